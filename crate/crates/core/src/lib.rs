//! Seed-stable machine learning estimators.
//!
//! The crate makes predictions and downstream debiased estimators reproducible
//! across random seeds. Subbagging averages a learner over `V` independent
//! (seed, subsample) pairs, with bag counts that provably bound the
//! probability that two runs differ by more than `epsilon`. Cross-bagging reuses
//! the out-of-bag rows of each subsample as cross-fitted nuisance predictions
//! for the AIPW estimator of the average treatment effect, and the adaptive
//! variant keeps adding bags until a Monte Carlo interval on the seed-induced
//! variability fits inside `[-epsilon, epsilon]`.
//!
//! Module map:
//!
//! - [`data`] and [`rng`]: datasets, min-max scaling, counter-based seeds, subsampling.
//! - [`learners`]: seeded random forest, one-hidden-layer neural network, constant baseline.
//! - [`stability`]: bag-count bounds and the empirical pairwise stability metric.
//! - [`bagging`]: subbagged ensembles.
//! - [`crossbag`]: out-of-bag plans, pooling, the bag-level variance estimate,
//!   Student-t quantiles and the adaptive loop.
//! - [`estimators`]: AIPW, its gradient and Lipschitz bound, cross-fitting baselines.
//! - [`simulate`]: the two benchmark data-generating processes.

pub mod bagging;
pub mod crossbag;
pub mod data;
pub mod error;
pub mod estimators;
pub mod learners;
pub mod rng;
pub mod simulate;
pub mod stability;

pub use error::{Error, Result};
