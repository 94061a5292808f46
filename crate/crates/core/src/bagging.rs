//! Subbagging: average a learner over `V` independent (seed, subsample) pairs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::learners::{fit, FittedModel, LearnerSpec};
use crate::rng::{derive_seed, draw_subsample};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedBagPair {
    /// Training seed for the member fitted on this bag.
    pub seed: u64,
    /// Sorted in-bag row indices.
    pub indices: Vec<usize>,
}

/// An ordered list of seed-and-bag pairs; pair `v` is a pure function of
/// `(master_seed, n, m, v)`, so plans extend without disturbing their prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BagPlan {
    pub rho: f64,
    pub n: usize,
    pub m: usize,
    pub master_seed: u64,
    pub pairs: Vec<SeedBagPair>,
}

/// `floor(rho * n)`, checked to give a proper nonempty subsample.
pub fn subsample_size(n: usize, rho: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 rows, got {n}")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!("rho must lie in (0,1), got {rho}")));
    }
    let m = (rho * n as f64).floor() as usize;
    if m < 1 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "floor(rho*n) = {m} for rho={rho}, n={n}; the subsample must have between 1 and n-1 rows"
        )));
    }
    Ok(m)
}

impl BagPlan {
    /// An empty plan; pairs are appended with [`BagPlan::extend_to`].
    pub fn empty(master_seed: u64, n: usize, rho: f64) -> Result<Self> {
        let m = subsample_size(n, rho)?;
        Ok(Self {
            rho,
            n,
            m,
            master_seed,
            pairs: Vec::new(),
        })
    }

    /// The `v`-th pair: subsample from counter `2v`, training seed from `2v+1`.
    pub fn pair(&self, v: usize) -> SeedBagPair {
        let v = v as u64;
        let indices = draw_subsample(derive_seed(self.master_seed, 2 * v), self.n, self.m)
            .expect("subsample size validated at construction");
        SeedBagPair {
            seed: derive_seed(self.master_seed, 2 * v + 1),
            indices,
        }
    }

    /// Appends pairs until the plan holds `count` of them.
    pub fn extend_to(&mut self, count: usize) {
        let start = self.pairs.len();
        let new: Vec<SeedBagPair> = (start..count).map(|v| self.pair(v)).collect();
        self.pairs.extend(new);
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn build_bag_plan(master_seed: u64, n: usize, rho: f64, count: usize) -> Result<BagPlan> {
    if count < 1 {
        return Err(Error::InvalidArgument("bag count must be at least 1".into()));
    }
    let mut plan = BagPlan::empty(master_seed, n, rho)?;
    plan.extend_to(count);
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubbaggedEnsemble {
    pub plan: BagPlan,
    pub spec: LearnerSpec,
    pub models: Vec<FittedModel>,
}

/// Fits one member per pair of `plan`, member `v` on the rows of bag `v`
/// only. Members are fitted in parallel; the result does not depend on the
/// worker count.
pub fn fit_subbagged(
    spec: &LearnerSpec,
    x: &Matrix,
    target: &[f64],
    plan: &BagPlan,
) -> Result<SubbaggedEnsemble> {
    if plan.n != x.rows() || target.len() != x.rows() {
        return Err(Error::InvalidArgument(format!(
            "plan is for {} rows, data has {} rows and {} targets",
            plan.n,
            x.rows(),
            target.len()
        )));
    }
    let models = plan
        .pairs
        .par_iter()
        .enumerate()
        .map(|(v, pair)| {
            let xb = x.select_rows(&pair.indices);
            let yb: Vec<f64> = pair.indices.iter().map(|&i| target[i]).collect();
            fit(spec, &xb, &yb, pair.seed).map_err(|e| e.in_bag(v))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(SubbaggedEnsemble {
        plan: plan.clone(),
        spec: spec.clone(),
        models,
    })
}

impl SubbaggedEnsemble {
    /// Mean of member predictions, summed in pair order.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for m in &self.models {
            sum += m.predict(x)?;
        }
        Ok((sum / self.models.len() as f64).clamp(0.0, 1.0))
    }
}

pub fn predict_subbagged(ensemble: &SubbaggedEnsemble, x: &[f64]) -> Result<f64> {
    ensemble.predict(x)
}
