//! Experiment drivers. Each returns in-memory results; [`crate::output`]
//! turns them into files.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use seedstable::bagging::{build_bag_plan, fit_subbagged};
use seedstable::crossbag::{
    adaptive_crossbag, crossbag_estimate, stability_halfwidth, AdaptiveConfig, AdaptiveResult, CrossbagFit,
};
use seedstable::data::{Dataset, ScaleParams};
use seedstable::estimators::{
    aipw_nuisances, average_over_seeds, crossfit_aipw, crossfit_aipw_detailed, Aipw, AverageMode, Folds,
    NuisanceSpec, NuisanceTarget,
};
use seedstable::learners::{fit, LearnerSpec};
use seedstable::rng::derive_seed;
use seedstable::simulate::{gen_dgp_a, gen_dgp_b, DGP_A_FEATURES};
use seedstable::stability::StabilityTarget;

use crate::config::{EstimateConfig, Method, Sim1Config, Sim2Config};
use crate::CliError;

/// Seed for the simulated dataset of a run.
pub fn data_seed(master_seed: u64) -> u64 {
    derive_seed(master_seed, 0)
}

/// Seed of repetition `j`.
pub fn run_seed(master_seed: u64, j: usize) -> u64 {
    derive_seed(derive_seed(master_seed, 1), j as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim1Row {
    pub seed: u64,
    pub unbagged: f64,
    pub subbagged: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim1Output {
    pub config: Sim1Config,
    /// Training data (the first `n` DGP-A rows).
    pub data: Dataset,
    pub test_point: Vec<f64>,
    pub test_probability: f64,
    pub rows: Vec<Sim1Row>,
}

/// Unbagged vs subbagged neural net predictions at one DGP-A test point.
///
/// The sample has `n + 1` rows; the last is held out as the test point.
/// Repetition `j` trains the unbagged net with seed `s_j` and the subbagged
/// net on the bag plan with master seed `s_j`.
pub fn run_sim1(config: &Sim1Config) -> Result<Sim1Output, CliError> {
    config.validate()?;
    let n = config.n;
    let sample = gen_dgp_a(n + 1, data_seed(config.global.master_seed))?;
    let full = &sample.dataset;
    let train_rows: Vec<usize> = (0..n).collect();
    let x = full.features().select_rows(&train_rows);
    let y = full.outcome()[..n].to_vec();
    let data = Dataset::new(x, y, None, full.column_names().map(<[String]>::to_vec))?;
    let test_point = full.features().row(n).to_vec();
    let test_probability = sample.truth.outcome_probability.as_ref().expect("DGP-A truth")[n];
    let spec = LearnerSpec::NeuralNet(config.net.clone());

    let rows = (0..config.seeds)
        .into_par_iter()
        .map(|j| {
            let seed = run_seed(config.global.master_seed, j);
            let single = fit(&spec, data.features(), data.outcome(), seed)?;
            let plan = build_bag_plan(seed, n, config.rho, config.v_bags)?;
            let ensemble = fit_subbagged(&spec, data.features(), data.outcome(), &plan)?;
            Ok(Sim1Row {
                seed,
                unbagged: single.predict(&test_point)?,
                subbagged: ensemble.predict(&test_point)?,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, seedstable::Error>>()?;
    debug_assert_eq!(test_point.len(), DGP_A_FEATURES);
    Ok(Sim1Output {
        config: config.clone(),
        data,
        test_point,
        test_probability,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim2Record {
    pub seed: u64,
    pub method: String,
    pub estimate: Option<f64>,
    pub elapsed_ms: Option<f64>,
    pub v_dagger: Option<usize>,
    pub converged: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim2Output {
    pub config: Sim2Config,
    pub data: Dataset,
    /// Method names in reporting order.
    pub methods: Vec<String>,
    /// Seed-major, methods in `methods` order within a seed.
    pub records: Vec<Sim2Record>,
}

#[derive(Debug, Clone)]
enum Sim2Method {
    Adaptive,
    Crossfit(Folds),
    Averaged(Folds),
}

impl Sim2Method {
    fn name(&self, avg_seeds: usize) -> String {
        match self {
            Sim2Method::Adaptive => "adaptive".into(),
            Sim2Method::Crossfit(f) => format!("crossfit_{f}"),
            Sim2Method::Averaged(f) => format!("avg{avg_seeds}_crossfit_{f}"),
        }
    }
}

/// AIPW estimates of the null ATE on one DGP-B dataset, for every configured
/// method and repetition. Per-seed failures (for instance a leave-one-out
/// split missing a treatment arm) are recorded, not raised.
pub fn run_sim2(config: &Sim2Config) -> Result<Sim2Output, CliError> {
    config.validate()?;
    let data = gen_dgp_b(config.n, data_seed(config.global.master_seed))?.dataset;
    let learner = LearnerSpec::forest(config.trees);
    let specs = [learner.clone(), learner.clone(), learner.clone()];
    let nuisances = aipw_nuisances(&learner);
    let estimator = Aipw { clip: config.clip };
    let target = StabilityTarget::new(config.epsilon, config.delta)?;

    let mut methods = Vec::new();
    if config.adaptive {
        methods.push(Sim2Method::Adaptive);
    }
    methods.extend(config.folds.iter().map(|&f| Sim2Method::Crossfit(f)));
    methods.extend(config.avg_folds.iter().map(|&f| Sim2Method::Averaged(f)));
    let names: Vec<String> = methods.iter().map(|m| m.name(config.avg_seeds)).collect();

    let jobs: Vec<(usize, usize)> = (0..config.seeds)
        .flat_map(|j| (0..methods.len()).map(move |k| (j, k)))
        .collect();
    let records = jobs
        .into_par_iter()
        .map(|(j, k)| {
            let seed = run_seed(config.global.master_seed, j);
            let start = Instant::now();
            let mut v_dagger = None;
            let mut converged = None;
            let outcome = match &methods[k] {
                Sim2Method::Adaptive => {
                    let cfg = AdaptiveConfig {
                        rho: config.rho,
                        v0: config.v0,
                        target,
                        master_seed: seed,
                        growth: config.growth,
                        max_rounds: config.max_rounds,
                        ..AdaptiveConfig::default()
                    };
                    adaptive_crossbag(&nuisances, &estimator, &data, &cfg).map(|r| {
                        v_dagger = Some(r.v_dagger);
                        converged = Some(r.converged);
                        r.estimate
                    })
                }
                Sim2Method::Crossfit(f) => crossfit_aipw(&specs, &data, *f, seed, config.clip),
                Sim2Method::Averaged(f) => {
                    let inner: Vec<u64> = (0..config.avg_seeds as u64).map(|k| derive_seed(seed, k)).collect();
                    average_over_seeds(
                        |s| crossfit_aipw(&specs, &data, *f, s, config.clip),
                        &inner,
                        AverageMode::Mean,
                    )
                }
            };
            let elapsed_ms = config.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            let (estimate, error) = match outcome {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Sim2Record {
                seed,
                method: names[k].clone(),
                estimate,
                elapsed_ms,
                v_dagger,
                converged,
                error,
            }
        })
        .collect();
    Ok(Sim2Output {
        config: config.clone(),
        data,
        methods: names,
        records,
    })
}

/// Result of `estimate`, shaped per method.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum EstimateOutput {
    Crossfit {
        estimate: f64,
        folds: usize,
        fits_per_nuisance: usize,
        outcome_scale: ScaleParams,
        estimate_original_scale: f64,
    },
    Crossbag {
        #[serde(flatten)]
        fit: CrossbagFit,
        halfwidth: f64,
        outcome_scale: ScaleParams,
        estimate_original_scale: f64,
    },
    Adaptive {
        #[serde(flatten)]
        result: AdaptiveResult,
        outcome_scale: ScaleParams,
        estimate_original_scale: f64,
    },
}

fn nuisance_specs(config: &EstimateConfig) -> Vec<NuisanceSpec> {
    let [pi, mu1, mu0] = config.learners();
    vec![
        NuisanceSpec { learner: pi, target: NuisanceTarget::Treatment },
        NuisanceSpec { learner: mu1, target: NuisanceTarget::OutcomeTreated },
        NuisanceSpec { learner: mu0, target: NuisanceTarget::OutcomeControl },
    ]
}

/// The ATE on min-max scaled outcomes, mapped back by the outcome range.
fn original_scale(estimate: f64, scale: &ScaleParams) -> f64 {
    if scale.degenerate {
        0.0
    } else {
        estimate * (scale.y_max - scale.y_min)
    }
}

/// Runs one AIPW method on a user dataset.
pub fn run_estimate(config: &EstimateConfig) -> Result<EstimateOutput, CliError> {
    config.validate()?;
    let (data, scale) = Dataset::read_csv(&config.input)?;
    data.require_treatment()?;
    let seed = config.global.master_seed;
    let target = StabilityTarget::new(config.epsilon, config.delta)?;
    let estimator = Aipw { clip: config.clip };
    Ok(match config.method {
        Method::Crossfit => {
            let r = crossfit_aipw_detailed(&config.learners(), &data, config.folds, seed, config.clip)?;
            EstimateOutput::Crossfit {
                estimate: r.estimate,
                folds: r.folds,
                fits_per_nuisance: r.fits_per_nuisance,
                outcome_scale: scale,
                estimate_original_scale: original_scale(r.estimate, &scale),
            }
        }
        Method::Crossbag => {
            let fit = crossbag_estimate(&nuisance_specs(config), &estimator, &data, config.rho, config.v0, seed)?;
            EstimateOutput::Crossbag {
                halfwidth: stability_halfwidth(fit.tau2_hat, fit.v_dagger, target.delta)?,
                estimate_original_scale: original_scale(fit.estimate, &scale),
                fit,
                outcome_scale: scale,
            }
        }
        Method::Adaptive => {
            let cfg = AdaptiveConfig {
                rho: config.rho,
                v0: config.v0,
                target,
                master_seed: seed,
                growth: config.growth,
                max_rounds: config.max_rounds,
                max_bags: config.max_bags,
            };
            let result = adaptive_crossbag(&nuisance_specs(config), &estimator, &data, &cfg)?;
            EstimateOutput::Adaptive {
                estimate_original_scale: original_scale(result.estimate, &scale),
                result,
                outcome_scale: scale,
            }
        }
    })
}
