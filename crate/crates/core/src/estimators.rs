//! AIPW estimation of the average treatment effect, plus the cross-fitting
//! and seed-averaging baselines.
//!
//! Nuisance vectors are laid out as `[pi, mu1, mu0]`, each of length `n`, and
//! gradients follow the same layout.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::learners::{fit, LearnerSpec};
use crate::rng::{derive_seed, seeded_rng};
use crate::{Error, Result};

pub const DEFAULT_CLIP: f64 = 0.01;

/// Which rows and which target a nuisance learner is trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuisanceTarget {
    /// `P(A = 1 | X)` on all rows.
    Treatment,
    /// `E[Y | A = 1, X]` on treated rows.
    OutcomeTreated,
    /// `E[Y | A = 0, X]` on control rows.
    OutcomeControl,
    /// `E[Y | X]` on all rows.
    Outcome,
}

impl NuisanceTarget {
    /// Training rows (a subset of `rows`, order kept) and their targets.
    pub fn training_set(&self, data: &Dataset, rows: &[usize]) -> Result<(Vec<usize>, Vec<f64>)> {
        let y = data.outcome();
        let (kept, target): (Vec<usize>, Vec<f64>) = match self {
            NuisanceTarget::Outcome => (rows.to_vec(), rows.iter().map(|&i| y[i]).collect()),
            NuisanceTarget::Treatment => {
                let a = data.require_treatment()?;
                (rows.to_vec(), rows.iter().map(|&i| a[i]).collect())
            }
            NuisanceTarget::OutcomeTreated | NuisanceTarget::OutcomeControl => {
                let a = data.require_treatment()?;
                let arm = if *self == NuisanceTarget::OutcomeTreated { 1.0 } else { 0.0 };
                rows.iter()
                    .filter(|&&i| a[i] == arm)
                    .map(|&i| (i, y[i]))
                    .unzip()
            }
        };
        if kept.is_empty() {
            return Err(Error::InvalidInput(format!("no training rows for nuisance {self:?}")));
        }
        Ok((kept, target))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuisanceSpec {
    pub learner: LearnerSpec,
    pub target: NuisanceTarget,
}

/// The three AIPW nuisances, all fitted with copies of `learner`.
pub fn aipw_nuisances(learner: &LearnerSpec) -> Vec<NuisanceSpec> {
    [
        NuisanceTarget::Treatment,
        NuisanceTarget::OutcomeTreated,
        NuisanceTarget::OutcomeControl,
    ]
    .into_iter()
    .map(|target| NuisanceSpec {
        learner: learner.clone(),
        target,
    })
    .collect()
}

/// A scalar functional of `p` nuisance prediction vectors, with its gradient.
pub trait Estimator: Sync {
    fn nuisance_targets(&self) -> Vec<NuisanceTarget>;

    fn value(&self, data: &Dataset, eta: &[Vec<f64>]) -> Result<f64>;

    /// Partial derivatives, nuisance-major (`l * n + i`).
    fn gradient(&self, data: &Dataset, eta: &[Vec<f64>]) -> Result<Vec<f64>>;
}

pub fn clip_propensity(pi: &[f64], c: f64) -> Vec<f64> {
    pi.iter().map(|&p| p.clamp(c, 1.0 - c)).collect()
}

fn check_clip(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::InvalidArgument(format!("clip must lie in (0, 0.5), got {c}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuisancePredictions {
    pub pi: Vec<f64>,
    pub mu1: Vec<f64>,
    pub mu0: Vec<f64>,
    pub clip: f64,
}

impl NuisancePredictions {
    /// Builds the nuisance set, clipping `pi` to `[clip, 1 - clip]`.
    pub fn new(pi: Vec<f64>, mu1: Vec<f64>, mu0: Vec<f64>, clip: f64) -> Result<Self> {
        check_clip(clip)?;
        if pi.len() != mu1.len() || pi.len() != mu0.len() {
            return Err(Error::InvalidInput(format!(
                "nuisance lengths differ: pi {}, mu1 {}, mu0 {}",
                pi.len(),
                mu1.len(),
                mu0.len()
            )));
        }
        if pi.iter().chain(&mu1).chain(&mu0).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite nuisance prediction".into()));
        }
        Ok(Self {
            pi: clip_propensity(&pi, clip),
            mu1,
            mu0,
            clip,
        })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.pi.len() != n {
            return Err(Error::InvalidInput(format!(
                "nuisances have length {}, dataset has {n} rows",
                self.pi.len()
            )));
        }
        Ok(())
    }
}

/// `(1/n) sum_i (a_i/pi_i - (1-a_i)/(1-pi_i)) (y_i - mu_i^{a_i}) + mu1_i - mu0_i`,
/// summed in row order.
pub fn aipw_ate(data: &Dataset, eta: &NuisancePredictions) -> Result<f64> {
    let a = data.require_treatment()?;
    eta.check_len(data.n())?;
    let y = data.outcome();
    let mut sum = 0.0;
    for i in 0..data.n() {
        let (pi, m1, m0) = (eta.pi[i], eta.mu1[i], eta.mu0[i]);
        let mu_a = if a[i] == 1.0 { m1 } else { m0 };
        let weight = a[i] / pi - (1.0 - a[i]) / (1.0 - pi);
        sum += weight * (y[i] - mu_a) + m1 - m0;
    }
    Ok(sum / data.n() as f64)
}

/// Analytic partials of [`aipw_ate`] in the `[pi, mu1, mu0]` layout.
pub fn aipw_gradient(data: &Dataset, eta: &NuisancePredictions) -> Result<Vec<f64>> {
    let a = data.require_treatment()?;
    eta.check_len(data.n())?;
    let y = data.outcome();
    let n = data.n();
    let inv_n = 1.0 / n as f64;
    let mut g = vec![0.0; 3 * n];
    for i in 0..n {
        let (pi, m1, m0, ai) = (eta.pi[i], eta.mu1[i], eta.mu0[i], a[i]);
        g[i] = -inv_n
            * (ai * (y[i] - m1) / (pi * pi) + (1.0 - ai) * (y[i] - m0) / ((1.0 - pi) * (1.0 - pi)));
        g[n + i] = inv_n * (1.0 - ai / pi);
        g[2 * n + i] = inv_n * ((1.0 - ai) / (1.0 - pi) - 1.0);
    }
    Ok(g)
}

/// Sup-norm Lipschitz constant of AIPW over `pi in [c, 1-c]`, `y, mu in [0,1]`:
/// the sum of worst-case absolute partials, `1/c^2 + 2 (1/c - 1)`.
pub fn aipw_lipschitz_bound(c: f64) -> Result<f64> {
    check_clip(c)?;
    Ok(1.0 / (c * c) + 2.0 * (1.0 / c - 1.0))
}

/// AIPW as an [`Estimator`] over raw (unclipped) propensities.
///
/// The propensity is clipped inside `value`; `gradient` is the gradient of
/// that composite, so propensity partials vanish wherever the clip is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aipw {
    pub clip: f64,
}

impl Default for Aipw {
    fn default() -> Self {
        Self { clip: DEFAULT_CLIP }
    }
}

impl Aipw {
    fn predictions(&self, eta: &[Vec<f64>]) -> Result<NuisancePredictions> {
        match eta {
            [pi, mu1, mu0] => NuisancePredictions::new(pi.clone(), mu1.clone(), mu0.clone(), self.clip),
            _ => Err(Error::InvalidInput(format!(
                "AIPW needs 3 nuisance vectors, got {}",
                eta.len()
            ))),
        }
    }
}

impl Estimator for Aipw {
    fn nuisance_targets(&self) -> Vec<NuisanceTarget> {
        vec![
            NuisanceTarget::Treatment,
            NuisanceTarget::OutcomeTreated,
            NuisanceTarget::OutcomeControl,
        ]
    }

    fn value(&self, data: &Dataset, eta: &[Vec<f64>]) -> Result<f64> {
        aipw_ate(data, &self.predictions(eta)?)
    }

    fn gradient(&self, data: &Dataset, eta: &[Vec<f64>]) -> Result<Vec<f64>> {
        let mut g = aipw_gradient(data, &self.predictions(eta)?)?;
        for (gi, &raw) in g.iter_mut().zip(&eta[0]) {
            if raw < self.clip || raw > 1.0 - self.clip {
                *gi = 0.0;
            }
        }
        Ok(g)
    }
}

/// Number of cross-fitting folds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Folds {
    K(usize),
    /// Leave-one-out: one fold per row.
    Loo,
}

impl Folds {
    pub fn count(&self, n: usize) -> usize {
        match self {
            Folds::K(k) => *k,
            Folds::Loo => n,
        }
    }
}

impl fmt::Display for Folds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Folds::K(k) => write!(f, "{k}"),
            Folds::Loo => f.write_str("loo"),
        }
    }
}

impl FromStr for Folds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("loo") {
            return Ok(Folds::Loo);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 2 => Ok(Folds::K(k)),
            _ => Err(Error::InvalidArgument(format!(
                "folds must be an integer >= 2 or `loo`, got {s:?}"
            ))),
        }
    }
}

impl TryFrom<String> for Folds {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Folds> for String {
    fn from(f: Folds) -> String {
        f.to_string()
    }
}

/// Balanced random fold labels: a seeded permutation dealt round-robin.
/// Leave-one-out ignores the seed.
pub fn fold_assignment(n: usize, folds: Folds, seed: u64) -> Result<Vec<usize>> {
    match folds {
        Folds::Loo => Ok((0..n).collect()),
        Folds::K(k) => {
            if k < 2 || k > n {
                return Err(Error::InvalidArgument(format!(
                    "folds must lie in [2, n={n}], got {k}"
                )));
            }
            let mut rng = seeded_rng(derive_seed(seed, 0));
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let mut label = vec![0; n];
            for (pos, &row) in perm.iter().enumerate() {
                label[row] = pos % k;
            }
            Ok(label)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossfitResult {
    pub estimate: f64,
    pub nuisances: NuisancePredictions,
    pub folds: usize,
    /// Fits performed for each nuisance (one per fold).
    pub fits_per_nuisance: usize,
}

/// Cross-fitted AIPW: nuisances for each fold are fitted on the other folds
/// (outcome models on the matching treatment arm) and predicted on the fold.
///
/// `seed` drives the fold assignment and, through derived seeds, every
/// learner fit.
pub fn crossfit_aipw_detailed(
    specs: &[LearnerSpec; 3],
    data: &Dataset,
    folds: Folds,
    seed: u64,
    clip: f64,
) -> Result<CrossfitResult> {
    check_clip(clip)?;
    let a = data.require_treatment()?;
    let n = data.n();
    let labels = fold_assignment(n, folds, seed)?;
    let k = folds.count(n);
    let targets = Aipw { clip }.nuisance_targets();

    let per_fold = (0..k)
        .into_par_iter()
        .map(|fold| {
            let train: Vec<usize> = (0..n).filter(|&i| labels[i] != fold).collect();
            let held: Vec<usize> = (0..n).filter(|&i| labels[i] == fold).collect();
            let treated = train.iter().filter(|&&i| a[i] == 1.0).count();
            if treated == 0 || treated == train.len() {
                return Err(Error::DegenerateSplit {
                    fold,
                    reason: format!(
                        "training split has {treated} treated of {} rows; both arms are required",
                        train.len()
                    ),
                });
            }
            let mut preds = Vec::with_capacity(3);
            for (l, (spec, target)) in specs.iter().zip(&targets).enumerate() {
                let (rows, y) = target.training_set(data, &train)?;
                let xs = data.features().select_rows(&rows);
                let model = fit(spec, &xs, &y, derive_seed(seed, 1 + 3 * fold as u64 + l as u64))?;
                preds.push(model.predict_rows(data.features(), &held)?);
            }
            Ok((held, preds))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut eta = vec![vec![0.0; n]; 3];
    for (held, preds) in per_fold {
        for (l, p) in preds.into_iter().enumerate() {
            for (&i, v) in held.iter().zip(p) {
                eta[l][i] = v;
            }
        }
    }
    let [pi, mu1, mu0]: [Vec<f64>; 3] = eta.try_into().expect("three nuisances");
    let nuisances = NuisancePredictions::new(pi, mu1, mu0, clip)?;
    Ok(CrossfitResult {
        estimate: aipw_ate(data, &nuisances)?,
        nuisances,
        folds: k,
        fits_per_nuisance: k,
    })
}

pub fn crossfit_aipw(
    specs: &[LearnerSpec; 3],
    data: &Dataset,
    folds: Folds,
    seed: u64,
    clip: f64,
) -> Result<f64> {
    crossfit_aipw_detailed(specs, data, folds, seed, clip).map(|r| r.estimate)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageMode {
    #[default]
    Mean,
    Median,
}

/// Runs `run` once per seed (in parallel) and aggregates the estimates.
pub fn average_over_seeds<F>(run: F, seeds: &[u64], mode: AverageMode) -> Result<f64>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("seed list is empty".into()));
    }
    let mut values = seeds
        .par_iter()
        .map(|&s| run(s))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(match mode {
        AverageMode::Mean => values.iter().sum::<f64>() / values.len() as f64,
        AverageMode::Median => {
            values.sort_by(f64::total_cmp);
            let k = values.len();
            if k % 2 == 1 {
                values[k / 2]
            } else {
                0.5 * (values[k / 2 - 1] + values[k / 2])
            }
        }
    })
}
