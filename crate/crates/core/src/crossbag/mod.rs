//! Cross-bagging: out-of-bag nuisance predictions pooled across subsamples.
//!
//! Each bag `v` fits every nuisance on its in-bag rows and predicts only on
//! its out-of-bag rows. Row `i`'s pooled prediction averages the `C_i` bags
//! that left it out, which cross-fits without an explicit sample split. The
//! seed-induced variability of the resulting estimate is tracked by the
//! bag-level variance estimate `tau2_hat`, and [`adaptive_crossbag`] adds bags
//! until a Student-t interval of half-width
//! `t_{V-1, 1-delta/2} * sqrt(2 tau2_hat / V)` is at most `epsilon`.

mod tdist;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use tdist::{ln_gamma, regularized_incomplete_beta, t_cdf, t_quantile};

use crate::bagging::{BagPlan, SeedBagPair};
use crate::data::{Dataset, Matrix};
use crate::estimators::{Estimator, NuisanceSpec};
use crate::learners::{fit, FittedModel};
use crate::stability::StabilityTarget;
use crate::{Error, Result};

/// Upper bound on the number of bags a plan may draw.
pub const DEFAULT_MAX_BAGS: usize = 1_000_000;

/// A bag plan together with its out-of-bag structure.
#[derive(Debug, Clone, PartialEq)]
pub struct OobPlan {
    plan: BagPlan,
    /// Sorted out-of-bag rows of each bag (column `v` of the membership matrix).
    oob_rows: Vec<Vec<usize>>,
    /// Number of bags leaving each row out.
    counts: Vec<usize>,
    target_oob: usize,
}

fn complement(indices: &[usize], n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - indices.len());
    let mut it = indices.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

impl OobPlan {
    /// Wraps an existing bag plan; the OOB target is the smallest count.
    pub fn from_bag_plan(plan: BagPlan) -> Self {
        let mut oob = OobPlan {
            oob_rows: Vec::with_capacity(plan.len()),
            counts: vec![0; plan.n],
            target_oob: 0,
            plan: BagPlan {
                pairs: Vec::new(),
                ..plan.clone()
            },
        };
        for pair in plan.pairs {
            oob.push(pair);
        }
        oob.target_oob = oob.min_count();
        oob
    }

    fn push(&mut self, pair: SeedBagPair) {
        let rows = complement(&pair.indices, self.plan.n);
        for &i in &rows {
            self.counts[i] += 1;
        }
        self.oob_rows.push(rows);
        self.plan.pairs.push(pair);
    }

    /// Draws further pairs until every row is out of bag at least
    /// `target_oob` times.
    pub fn extend_to_target(&mut self, target_oob: usize, max_bags: usize) -> Result<()> {
        while self.min_count() < target_oob {
            if self.plan.len() >= max_bags {
                return Err(Error::ResourceLimit(format!(
                    "reached {max_bags} bags before every row was out of bag {target_oob} times"
                )));
            }
            let pair = self.plan.pair(self.plan.len());
            self.push(pair);
        }
        self.target_oob = self.target_oob.max(target_oob);
        Ok(())
    }

    pub fn plan(&self) -> &BagPlan {
        &self.plan
    }

    pub fn n(&self) -> usize {
        self.plan.n
    }

    pub fn m(&self) -> usize {
        self.plan.m
    }

    /// Total number of bags drawn.
    pub fn v_dagger(&self) -> usize {
        self.plan.len()
    }

    pub fn target_oob(&self) -> usize {
        self.target_oob
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn min_count(&self) -> usize {
        self.counts.iter().copied().min().unwrap_or(0)
    }

    pub fn oob_rows(&self, v: usize) -> &[usize] {
        &self.oob_rows[v]
    }

    pub fn is_oob(&self, i: usize, v: usize) -> bool {
        self.oob_rows[v].binary_search(&i).is_ok()
    }

    /// Dense `n x V` membership matrix with `M[i][v] = 1` iff row `i` is out of bag `v`.
    pub fn membership_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.v_dagger()]; self.n()];
        for (v, rows) in self.oob_rows.iter().enumerate() {
            for &i in rows {
                m[i][v] = 1;
            }
        }
        m
    }
}

pub fn build_oob_plan(master_seed: u64, n: usize, rho: f64, target_oob: usize) -> Result<OobPlan> {
    build_oob_plan_capped(master_seed, n, rho, target_oob, DEFAULT_MAX_BAGS)
}

pub fn build_oob_plan_capped(
    master_seed: u64,
    n: usize,
    rho: f64,
    target_oob: usize,
    max_bags: usize,
) -> Result<OobPlan> {
    if target_oob < 1 {
        return Err(Error::InvalidArgument("OOB target must be at least 1".into()));
    }
    let mut oob = OobPlan::from_bag_plan(BagPlan::empty(master_seed, n, rho)?);
    oob.extend_to_target(target_oob, max_bags)?;
    Ok(oob)
}

/// Pooled out-of-bag predictions and the per-bag raw predictions behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledPredictions {
    /// `pooled[l][i]`: mean over bags leaving row `i` out of nuisance `l`'s prediction.
    pub pooled: Vec<Vec<f64>>,
    /// `raw[v][l][k]`: bag `v`'s nuisance-`l` prediction at `oob_rows(v)[k]`.
    pub raw: Vec<Vec<Vec<f64>>>,
}

impl PooledPredictions {
    /// Pools cached raw predictions, summing over bags in plan order.
    pub fn from_raw(raw: Vec<Vec<Vec<f64>>>, oob: &OobPlan) -> Result<Self> {
        if raw.len() != oob.v_dagger() {
            return Err(Error::InvalidInput(format!(
                "{} cached bags for a plan of {}",
                raw.len(),
                oob.v_dagger()
            )));
        }
        if let Some(i) = oob.counts().iter().position(|&c| c == 0) {
            return Err(Error::Invariant(format!("row {i} is out of bag for no bag")));
        }
        let p = raw.first().map_or(0, Vec::len);
        let n = oob.n();
        let mut pooled = vec![vec![0.0; n]; p];
        for (v, bag) in raw.iter().enumerate() {
            let rows = oob.oob_rows(v);
            if bag.len() != p || bag.iter().any(|preds| preds.len() != rows.len()) {
                return Err(Error::InvalidInput(format!("bag {v} cache has the wrong shape")));
            }
            for (l, preds) in bag.iter().enumerate() {
                for (&i, &value) in rows.iter().zip(preds) {
                    pooled[l][i] += value;
                }
            }
        }
        for series in pooled.iter_mut() {
            for (value, &c) in series.iter_mut().zip(oob.counts()) {
                *value /= c as f64;
            }
        }
        Ok(Self { pooled, raw })
    }
}

/// Pools predictions of already fitted models; `models[v][l]` is bag `v`'s
/// model for nuisance `l`.
pub fn pool_oob(models: &[Vec<FittedModel>], oob: &OobPlan, x: &Matrix) -> Result<PooledPredictions> {
    if models.len() != oob.v_dagger() {
        return Err(Error::InvalidInput(format!(
            "{} bags of models for a plan of {}",
            models.len(),
            oob.v_dagger()
        )));
    }
    let raw = models
        .iter()
        .enumerate()
        .map(|(v, bag)| {
            bag.iter()
                .map(|model| model.predict_rows(x, oob.oob_rows(v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PooledPredictions::from_raw(raw, oob)
}

/// Bag-level variance of the cross-bagged estimate:
///
/// `tau2_hat = 1 / (V (1 - m/n)^2) * sum_v ( sum_l sum_{i oob in v} g_{l,i} (raw_{v,l,i} - pooled_{l,i}) )^2`
///
/// with `V` the number of bags drawn and `g` the estimator gradient at the
/// pooled predictions, nuisance-major.
pub fn tau_squared(gradient: &[f64], pooled: &PooledPredictions, oob: &OobPlan) -> Result<f64> {
    let n = oob.n();
    let p = pooled.pooled.len();
    if gradient.len() != p * n {
        return Err(Error::InvalidInput(format!(
            "gradient has length {}, expected {p} x {n}",
            gradient.len()
        )));
    }
    if gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::InvalidInput("non-finite gradient".into()));
    }
    let v_total = oob.v_dagger();
    let mut sum_sq = 0.0;
    for (v, bag) in pooled.raw.iter().enumerate() {
        let rows = oob.oob_rows(v);
        let mut contribution = 0.0;
        for (l, preds) in bag.iter().enumerate() {
            let g = &gradient[l * n..(l + 1) * n];
            let centre = &pooled.pooled[l];
            for (&i, &value) in rows.iter().zip(preds) {
                contribution += g[i] * (value - centre[i]);
            }
        }
        sum_sq += contribution * contribution;
    }
    let keep = 1.0 - oob.m() as f64 / n as f64;
    Ok(sum_sq / (v_total as f64 * keep * keep))
}

/// Fits every nuisance on bag `pair` and predicts on `oob_rows`.
fn fit_bag(
    nuisances: &[NuisanceSpec],
    data: &Dataset,
    pair: &SeedBagPair,
    oob_rows: &[usize],
) -> Result<Vec<Vec<f64>>> {
    nuisances
        .iter()
        .map(|spec| {
            let (rows, target) = spec.target.training_set(data, &pair.indices)?;
            let x = data.features().select_rows(&rows);
            let model = fit(&spec.learner, &x, &target, pair.seed)?;
            model.predict_rows(data.features(), oob_rows)
        })
        .collect()
}

/// One cross-bagged evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossbagFit {
    pub estimate: f64,
    pub tau2_hat: f64,
    pub v_dagger: usize,
}

/// Incremental cross-bagging state: the plan plus cached raw predictions of
/// every bag fitted so far. Growing the plan fits only the new bags.
pub struct CrossBagger<'a> {
    nuisances: &'a [NuisanceSpec],
    data: &'a Dataset,
    oob: OobPlan,
    raw: Vec<Vec<Vec<f64>>>,
    max_bags: usize,
}

impl<'a> CrossBagger<'a> {
    pub fn new(
        nuisances: &'a [NuisanceSpec],
        data: &'a Dataset,
        rho: f64,
        master_seed: u64,
    ) -> Result<Self> {
        Self::from_plan(nuisances, data, BagPlan::empty(master_seed, data.n(), rho)?)
    }

    /// Starts from an explicit bag plan and fits all of its bags.
    pub fn from_plan(nuisances: &'a [NuisanceSpec], data: &'a Dataset, plan: BagPlan) -> Result<Self> {
        if nuisances.is_empty() {
            return Err(Error::InvalidArgument("at least one nuisance is required".into()));
        }
        if plan.n != data.n() {
            return Err(Error::InvalidArgument(format!(
                "plan is for {} rows, dataset has {}",
                plan.n,
                data.n()
            )));
        }
        let mut this = Self {
            nuisances,
            data,
            oob: OobPlan::from_bag_plan(plan),
            raw: Vec::new(),
            max_bags: DEFAULT_MAX_BAGS,
        };
        this.fit_pending()?;
        Ok(this)
    }

    pub fn with_max_bags(mut self, max_bags: usize) -> Self {
        self.max_bags = max_bags;
        self
    }

    pub fn oob(&self) -> &OobPlan {
        &self.oob
    }

    fn fit_pending(&mut self) -> Result<()> {
        let start = self.raw.len();
        let (nuisances, data, oob) = (self.nuisances, self.data, &self.oob);
        let fresh = (start..oob.v_dagger())
            .into_par_iter()
            .map(|v| {
                fit_bag(nuisances, data, &oob.plan().pairs[v], oob.oob_rows(v)).map_err(|e| e.in_bag(v))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        self.raw.extend(fresh);
        Ok(())
    }

    /// Draws and fits bags until every row is out of bag `target_oob` times.
    pub fn grow_to(&mut self, target_oob: usize) -> Result<()> {
        self.oob.extend_to_target(target_oob, self.max_bags)?;
        self.fit_pending()
    }

    pub fn pooled(&self) -> Result<PooledPredictions> {
        PooledPredictions::from_raw(self.raw.clone(), &self.oob)
    }

    pub fn evaluate(&self, estimator: &dyn Estimator) -> Result<CrossbagFit> {
        let targets = estimator.nuisance_targets();
        if targets.len() != self.nuisances.len()
            || targets.iter().zip(self.nuisances).any(|(t, s)| *t != s.target)
        {
            return Err(Error::InvalidArgument(
                "nuisance specs do not match the estimator's nuisance targets".into(),
            ));
        }
        let pooled = self.pooled()?;
        let estimate = estimator.value(self.data, &pooled.pooled)?;
        let gradient = estimator.gradient(self.data, &pooled.pooled)?;
        let tau2_hat = tau_squared(&gradient, &pooled, &self.oob)?;
        Ok(CrossbagFit {
            estimate,
            tau2_hat,
            v_dagger: self.oob.v_dagger(),
        })
    }
}

/// Cross-bagged estimate with every row out of bag at least `target_oob` times.
pub fn crossbag_estimate(
    nuisances: &[NuisanceSpec],
    estimator: &dyn Estimator,
    data: &Dataset,
    rho: f64,
    target_oob: usize,
    master_seed: u64,
) -> Result<CrossbagFit> {
    if target_oob < 1 {
        return Err(Error::InvalidArgument("OOB target must be at least 1".into()));
    }
    let mut bagger = CrossBagger::new(nuisances, data, rho, master_seed)?;
    bagger.grow_to(target_oob)?;
    bagger.evaluate(estimator)
}

/// Half-width `t_{V-1, 1-delta/2} * sqrt(2 tau2 / V)` of the seed-stability interval.
pub fn stability_halfwidth(tau2_hat: f64, v_dagger: usize, delta: f64) -> Result<f64> {
    if v_dagger < 2 {
        return Err(Error::InvalidArgument("need at least 2 bags for a t interval".into()));
    }
    let t = t_quantile(v_dagger as u64 - 1, 1.0 - delta / 2.0)?;
    Ok(t * (2.0 * tau2_hat / v_dagger as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub rho: f64,
    /// Initial OOB target; must exceed 1.
    pub v0: usize,
    pub target: StabilityTarget,
    pub master_seed: u64,
    /// Factor applied to the OOB target after each failed round.
    pub growth: f64,
    pub max_rounds: usize,
    pub max_bags: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            rho: 0.5,
            v0: 50,
            target: StabilityTarget {
                epsilon: 0.01,
                delta: 0.01,
            },
            master_seed: 0,
            growth: 1.5,
            max_rounds: 20,
            max_bags: DEFAULT_MAX_BAGS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveResult {
    pub estimate: f64,
    pub tau2_hat: f64,
    pub v_dagger: usize,
    pub halfwidth: f64,
    pub rounds: usize,
    pub converged: bool,
}

/// Adaptive cross-bagging: grow the OOB target geometrically, reusing every
/// bag already fitted, until the stability interval fits in `[-eps, eps]` or
/// `max_rounds` is exhausted (then `converged` is false).
pub fn adaptive_crossbag(
    nuisances: &[NuisanceSpec],
    estimator: &dyn Estimator,
    data: &Dataset,
    config: &AdaptiveConfig,
) -> Result<AdaptiveResult> {
    if config.v0 < 2 {
        return Err(Error::InvalidArgument(format!(
            "initial OOB target must exceed 1, got {}",
            config.v0
        )));
    }
    if !(config.growth > 1.0 && config.growth.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "growth must exceed 1, got {}",
            config.growth
        )));
    }
    if config.max_rounds < 1 {
        return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
    }
    let mut bagger =
        CrossBagger::new(nuisances, data, config.rho, config.master_seed)?.with_max_bags(config.max_bags);
    let mut target_oob = config.v0;
    let mut rounds = 0;
    loop {
        bagger.grow_to(target_oob)?;
        rounds += 1;
        let fit = bagger.evaluate(estimator)?;
        let halfwidth = stability_halfwidth(fit.tau2_hat, fit.v_dagger, config.target.delta)?;
        let converged = halfwidth <= config.target.epsilon;
        if converged || rounds >= config.max_rounds {
            return Ok(AdaptiveResult {
                estimate: fit.estimate,
                tau2_hat: fit.tau2_hat,
                v_dagger: fit.v_dagger,
                halfwidth,
                rounds,
                converged,
            });
        }
        target_oob = ((target_oob as f64) * config.growth).ceil() as usize;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bagging::build_bag_plan;
    use crate::estimators::{aipw_nuisances, Aipw, NuisanceTarget};
    use crate::learners::LearnerSpec;
    use crate::simulate::gen_dgp_b;

    #[test]
    fn two_rows_half_rho() {
        let oob = build_oob_plan(3, 2, 0.5, 1).unwrap();
        assert!(oob.v_dagger() >= 2);
        assert!(oob.counts().iter().all(|&c| c >= 1));
        assert!((0..oob.v_dagger()).all(|v| oob.oob_rows(v).len() == 1));
        // stops at the first bag that completes coverage
        let mut shorter = OobPlan::from_bag_plan(build_bag_plan(3, 2, 0.5, oob.v_dagger() - 1).unwrap());
        assert_eq!(shorter.min_count(), 0);
        shorter.extend_to_target(1, 100).unwrap();
        assert_eq!(shorter, oob);
    }

    #[test]
    fn four_rows_need_two_bags() {
        for seed in 0..20 {
            let oob = build_oob_plan(seed, 4, 0.5, 1).unwrap();
            assert!(oob.v_dagger() >= 2);
        }
    }

    #[test]
    fn membership_matrix_matches_bags() {
        let oob = build_oob_plan(9, 12, 0.25, 3).unwrap();
        let mm = oob.membership_matrix();
        for (v, pair) in oob.plan().pairs.iter().enumerate() {
            for (i, row) in mm.iter().enumerate() {
                assert_eq!(row[v] == 1, !pair.indices.contains(&i));
            }
            assert_eq!(mm.iter().filter(|r| r[v] == 0).count(), oob.m());
        }
        let counts: Vec<usize> = mm.iter().map(|r| r.iter().map(|&b| b as usize).sum()).collect();
        assert_eq!(counts, oob.counts());
    }

    #[test]
    fn cap_exceeded_is_a_resource_error() {
        let err = build_oob_plan_capped(1, 100, 0.5, 50, 10).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn oob_target_golden_value() {
        let oob = build_oob_plan(7, 100, 0.5, 50).unwrap();
        assert_eq!(oob.v_dagger(), GOLDEN_V_DAGGER_7_100_05_50);
    }

    const GOLDEN_V_DAGGER_7_100_05_50: usize = 129;

    fn constant_models(oob: &OobPlan, target: &[f64]) -> Vec<Vec<FittedModel>> {
        let x = Matrix::from_rows(&(0..oob.n()).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        oob.plan()
            .pairs
            .iter()
            .map(|pair| {
                let xb = x.select_rows(&pair.indices);
                let yb: Vec<f64> = pair.indices.iter().map(|&i| target[i]).collect();
                vec![fit(&LearnerSpec::Constant, &xb, &yb, pair.seed).unwrap()]
            })
            .collect()
    }

    #[test]
    fn pooling_singleton_bags_by_hand() {
        // n = 3, m = 1, bags {0}, {1}, {2}: row 0 is pooled from bags 1 and 2
        let plan = BagPlan {
            rho: 0.4,
            n: 3,
            m: 1,
            master_seed: 0,
            pairs: (0..3)
                .map(|i| SeedBagPair { seed: i as u64, indices: vec![i] })
                .collect(),
        };
        let oob = OobPlan::from_bag_plan(plan);
        let target = [0.2, 0.5, 0.9];
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let pooled = pool_oob(&constant_models(&oob, &target), &oob, &x).unwrap();
        assert!((pooled.pooled[0][0] - 0.7).abs() < 1e-15);
        assert!((pooled.pooled[0][1] - 0.55).abs() < 1e-15);
        assert!((pooled.pooled[0][2] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn pooling_constant_half_and_zero_count_error() {
        let oob = build_oob_plan(4, 10, 0.5, 3).unwrap();
        let raw: Vec<Vec<Vec<f64>>> = (0..oob.v_dagger())
            .map(|v| vec![vec![0.5; oob.oob_rows(v).len()]])
            .collect();
        let pooled = PooledPredictions::from_raw(raw, &oob).unwrap();
        assert!(pooled.pooled[0].iter().all(|&p| p == 0.5));

        let partial = OobPlan::from_bag_plan(build_bag_plan(4, 10, 0.5, 1).unwrap());
        let raw = vec![vec![vec![0.5; partial.oob_rows(0).len()]]];
        assert!(matches!(
            PooledPredictions::from_raw(raw, &partial),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn tau_squared_zero_cases() {
        let oob = build_oob_plan(5, 8, 0.5, 4).unwrap();
        let raw: Vec<Vec<Vec<f64>>> = (0..oob.v_dagger())
            .map(|v| vec![vec![0.3; oob.oob_rows(v).len()]])
            .collect();
        let pooled = PooledPredictions::from_raw(raw, &oob).unwrap();
        assert_eq!(tau_squared(&[1.0; 8], &pooled, &oob).unwrap(), 0.0);

        let raw: Vec<Vec<Vec<f64>>> = (0..oob.v_dagger())
            .map(|v| vec![(0..oob.oob_rows(v).len()).map(|k| (v + k) as f64 / 50.0).collect()])
            .collect();
        let pooled = PooledPredictions::from_raw(raw, &oob).unwrap();
        assert_eq!(tau_squared(&[0.0; 8], &pooled, &oob).unwrap(), 0.0);
        assert!(tau_squared(&[1.0; 8], &pooled, &oob).unwrap() > 0.0);
    }

    #[test]
    fn seed_free_estimate_converges_immediately() {
        // constant outcome: every bag predicts 1 for both arms, the residuals
        // vanish, so the propensity partials are zero and tau2_hat = 0
        let base = gen_dgp_b(60, 2).unwrap().dataset;
        let ds = Dataset::new(
            base.features().clone(),
            vec![1.0; 60],
            base.treatment().map(<[f64]>::to_vec),
            None,
        )
        .unwrap();
        let nuisances = aipw_nuisances(&LearnerSpec::Constant);
        let cfg = AdaptiveConfig {
            v0: 5,
            ..AdaptiveConfig::default()
        };
        let res = adaptive_crossbag(&nuisances, &Aipw::default(), &ds, &cfg).unwrap();
        assert_eq!(res.tau2_hat, 0.0);
        assert!(res.converged);
        assert_eq!(res.rounds, 1);
        assert!(res.halfwidth <= cfg.target.epsilon);
        assert_eq!(res.v_dagger, build_oob_plan(0, 60, 0.5, 5).unwrap().v_dagger());
    }

    #[test]
    fn mismatched_nuisances_are_rejected() {
        let ds = gen_dgp_b(30, 2).unwrap().dataset;
        let mut nuisances = aipw_nuisances(&LearnerSpec::Constant);
        nuisances[1].target = NuisanceTarget::Outcome;
        let err = crossbag_estimate(&nuisances, &Aipw::default(), &ds, 0.5, 2, 1).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn adaptive_argument_validation() {
        let ds = gen_dgp_b(30, 2).unwrap().dataset;
        let nuisances = aipw_nuisances(&LearnerSpec::Constant);
        for cfg in [
            AdaptiveConfig { v0: 1, ..AdaptiveConfig::default() },
            AdaptiveConfig { growth: 1.0, ..AdaptiveConfig::default() },
            AdaptiveConfig { max_rounds: 0, ..AdaptiveConfig::default() },
        ] {
            assert!(adaptive_crossbag(&nuisances, &Aipw::default(), &ds, &cfg).is_err());
        }
    }

    #[test]
    fn max_rounds_exhaustion_is_not_an_error() {
        let ds = gen_dgp_b(60, 4).unwrap().dataset;
        let nuisances = aipw_nuisances(&LearnerSpec::forest(5));
        let cfg = AdaptiveConfig {
            v0: 3,
            max_rounds: 2,
            target: StabilityTarget { epsilon: 1e-6, delta: 0.01 },
            ..AdaptiveConfig::default()
        };
        let res = adaptive_crossbag(&nuisances, &Aipw::default(), &ds, &cfg).unwrap();
        assert!(!res.converged);
        assert_eq!(res.rounds, 2);
        assert!(res.halfwidth > cfg.target.epsilon);
    }
}
