//! Seed-stability bounds and the empirical pairwise stability metric.
//!
//! A procedure is `(epsilon, delta)`-seed-stable when two runs under
//! independent seeds differ by more than `epsilon` with probability at most
//! `delta`. The bounds below are Bernstein-type: natural logarithms
//! throughout, ceilings for bag counts.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityTarget {
    pub epsilon: f64,
    pub delta: f64,
}

impl StabilityTarget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
        }
        Ok(Self { epsilon, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub target: StabilityTarget,
    pub delta_hat: f64,
    pub ratio: f64,
    pub pair_count: u64,
}

impl StabilityReport {
    /// Empirical stability of `estimates` against `target`.
    pub fn from_estimates(estimates: &[f64], target: StabilityTarget) -> Result<Self> {
        let delta_hat = empirical_delta(estimates, target.epsilon)?;
        let s = estimates.len() as u64;
        Ok(Self {
            target,
            delta_hat,
            ratio: stability_ratio(delta_hat, target.delta),
            pair_count: s * (s - 1) / 2,
        })
    }

    pub fn is_stable(&self) -> bool {
        self.ratio <= 1.0
    }
}

/// Largest seed variance that certifies an unbagged learner on `k` test
/// points: `(eps/4) * (eps/ln(2k/delta) - 2/3)`. Non-positive thresholds
/// certify nothing.
pub fn lemma1_variance_threshold(target: StabilityTarget, k: u64) -> Result<(f64, bool)> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let eps = target.epsilon;
    let log_term = (2.0 * k as f64 / target.delta).ln();
    let threshold = eps / 4.0 * (eps / log_term - 2.0 / 3.0);
    Ok((threshold, threshold > 0.0))
}

fn check_nu2(nu2: f64) -> Result<()> {
    if !(0.0..=0.25).contains(&nu2) {
        return Err(Error::InvalidArgument(format!(
            "nu2 must lie in [0, 0.25] for predictions in [0,1], got {nu2}"
        )));
    }
    Ok(())
}

fn bag_count(log_term: f64, eps: f64, nu2: f64) -> u64 {
    let v = log_term / (eps * eps) * (4.0 * nu2 + 2.0 / 3.0 * eps);
    (v.ceil() as u64).max(1)
}

/// Minimum number of subbagged members for `(epsilon, delta)`-stability on
/// `k` test points with bag-and-seed prediction variance `nu2`.
pub fn theorem1_min_bags(target: StabilityTarget, k: u64, nu2: f64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    check_nu2(nu2)?;
    let log_term = (2.0 * k as f64 / target.delta).ln();
    Ok(bag_count(log_term, target.epsilon, nu2))
}

/// Bag count for an `L`-Lipschitz (sup-norm) scalar functional of `p`
/// bagged nuisance vectors of length `n`.
pub fn corollary1_min_bags(
    target: StabilityTarget,
    n: u64,
    p: u64,
    lipschitz: f64,
    nu2: f64,
) -> Result<u64> {
    if n < 1 || p < 1 {
        return Err(Error::InvalidArgument("n and p must be at least 1".into()));
    }
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Lipschitz constant must be > 0, got {lipschitz}"
        )));
    }
    check_nu2(nu2)?;
    let log_term = (2.0 * n as f64 * p as f64 / target.delta).ln();
    Ok(bag_count(log_term, target.epsilon / lipschitz, nu2))
}

/// Fraction of unordered pairs `i < j` with `|p_i - p_j| > epsilon`.
pub fn empirical_delta(estimates: &[f64], epsilon: f64) -> Result<f64> {
    let s = estimates.len();
    if s < 2 {
        return Err(Error::InvalidArgument(format!(
            "empirical delta needs at least 2 estimates, got {s}"
        )));
    }
    if estimates.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("estimates contain NaN".into()));
    }
    let mut sorted = estimates.to_vec();
    sorted.sort_by(f64::total_cmp);
    // for each i, count j > i with sorted[j] - sorted[i] > epsilon
    let mut exceed: u64 = 0;
    let mut j = 0;
    for i in 0..s {
        if j <= i {
            j = i + 1;
        }
        while j < s && sorted[j] - sorted[i] <= epsilon {
            j += 1;
        }
        exceed += (s - j) as u64;
    }
    let pairs = (s as u64) * (s as u64 - 1) / 2;
    Ok(exceed as f64 / pairs as f64)
}

pub fn stability_ratio(delta_hat: f64, delta: f64) -> f64 {
    delta_hat / delta
}

/// Logarithmic grid of `points` values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..points)
                .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
                .collect()
        }
    }
}
