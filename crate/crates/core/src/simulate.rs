//! The two benchmark data-generating processes.
//!
//! DGP-A is a 20-feature binary-outcome prediction task with correlated
//! Gaussian blocks, heavy-tailed and skewed marginals and a nonlinear logit.
//! DGP-B has four confounders, a binary treatment and a binary outcome whose
//! logit does not involve the treatment, so the true average treatment effect
//! is zero.
//!
//! Row `i` of a sample is generated from its own stream seeded with
//! `derive_seed(seed, i)`, so every prefix of a sample is itself a sample.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, ChiSquared, Distribution, Gamma, StandardNormal};

use crate::data::{Dataset, Matrix};
use crate::rng::{derive_seed, seeded_rng, SeedRng};
use crate::{Error, Result};

pub const DGP_A_FEATURES: usize = 20;
pub const DGP_B_FEATURES: usize = 4;

/// Ground truth recorded alongside a simulated dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Truth {
    /// DGP-A: `P(Y = 1 | W)` per row.
    pub outcome_probability: Option<Vec<f64>>,
    /// DGP-B: `P(A = 1 | W)` per row.
    pub propensity: Option<Vec<f64>>,
    /// DGP-B: `P(Y = 1 | A, W)` per row (identical for both arms).
    pub outcome_given_covariates: Option<Vec<f64>>,
    pub ate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DgpSample {
    pub dataset: Dataset,
    pub truth: Truth,
}

#[inline]
pub fn expit(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn normal_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The DGP-A outcome logit; `w[0]` is `W1`.
pub fn dgp_a_logit(w: &[f64; DGP_A_FEATURES]) -> f64 {
    let [w1, w2, w3, w4, w5, w6, w7, w8, w9, w10, w11, _w12, w13, _w14, _w15, w16, _w17, w18, _w19, w20] =
        *w;
    -0.5 + 0.5 * w1 - 0.3 * w2 * w2 + (PI / 2.0 * w3).sin() + 0.4 * positive_part(w4)
        - 0.6 * w5.abs()
        + 0.2 * w6
        + 5.0 * normal_density(w7, 1.0, 0.5)
        - 0.3 * w8
        + 0.5 * sign(w9) * (w9.abs() + 1.0).ln()
        - 0.15 * w10
        + 0.8 * indicator(w11 > 1.0) * w11
        - 0.04 * w13.powi(3)
        + 0.3 * positive_part(w16).sqrt()
        - 0.6 * w18.cos()
        + 0.2 * w20
        + 0.5 * w1 * w6
        - 0.4 * w2 * w3
        + 0.6 * w4 * indicator(w7 > 0.5)
        - 0.3 * w5 * w18.sin()
        + 0.7 * w11 * w16 / (1.0 + w11.abs())
        - 0.5 * indicator(w8 > 0.0) * indicator(w13 > 0.0)
        + 0.4 * w1 * w7 * indicator(w20 > 0.0)
}

/// Fills `out` with a draw from `N(mean * 1, (1 - r) I + r 11')` using the
/// symmetric square root `sqrt(1-r) I + c 11'`.
fn equicorrelated_normal(rng: &mut SeedRng, r: f64, mean: f64, out: &mut [f64]) {
    let k = out.len() as f64;
    let a = (1.0 - r).sqrt();
    let c = ((1.0 + (k - 1.0) * r).sqrt() - a) / k;
    for z in out.iter_mut() {
        *z = rng.sample(StandardNormal);
    }
    let total: f64 = out.iter().sum();
    for z in out.iter_mut() {
        *z = mean + a * *z + c * total;
    }
}

/// One DGP-A row: features, `P(Y=1|W)` and the Bernoulli outcome.
pub fn dgp_a_row(seed: u64, row: u64) -> ([f64; DGP_A_FEATURES], f64, f64) {
    let mut rng = seeded_rng(derive_seed(seed, row));
    let mut w = [0.0; DGP_A_FEATURES];
    equicorrelated_normal(&mut rng, 0.3, 0.0, &mut w[0..5]);
    equicorrelated_normal(&mut rng, 0.2, 1.0, &mut w[5..10]);
    for v in &mut w[10..15] {
        *v = 1.5 * rng.sample::<f64, _>(StandardNormal);
    }
    w[15] = Gamma::new(2.0, 1.0).expect("valid gamma").sample(&mut rng);
    let b: f64 = Beta::new(2.0, 5.0).expect("valid beta").sample(&mut rng);
    w[16] = 4.0 * (b - 1.0);
    w[17] = 2.0 * rng.sample::<f64, _>(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    let chi: f64 = ChiSquared::new(5.0).expect("valid chi-squared").sample(&mut rng);
    w[18] = z / (chi / 5.0).sqrt();
    w[19] = rng.random_range(-2.0..2.0);
    let prob = expit(dgp_a_logit(&w));
    let y = indicator(rng.random::<f64>() < prob);
    (w, prob, y)
}

/// One DGP-B row: features, propensity, outcome probability, treatment, outcome.
pub fn dgp_b_row(seed: u64, row: u64) -> ([f64; DGP_B_FEATURES], f64, f64, f64, f64) {
    let mut rng = seeded_rng(derive_seed(seed, row));
    let w1 = rng.random_range(0.0..2.0);
    let w2 = indicator(rng.random::<f64>() < 0.5);
    let w3 = indicator(rng.random::<f64>() < 0.5);
    let w4 = indicator(rng.random::<f64>() < 0.5);
    let pi = expit(w1 + w2 * w3 - 2.0 * w4);
    let a = indicator(rng.random::<f64>() < pi);
    let q = expit(w1 + w2 * w3 - 3.0);
    let y = indicator(rng.random::<f64>() < q);
    ([w1, w2, w3, w4], pi, q, a, y)
}

fn names(d: usize) -> Vec<String> {
    (1..=d).map(|j| format!("w{j}")).collect()
}

fn check_rows(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "simulated datasets need at least 2 rows, got {n}"
        )));
    }
    Ok(())
}

pub fn gen_dgp_a(n: usize, seed: u64) -> Result<DgpSample> {
    check_rows(n)?;
    let mut features = Vec::with_capacity(n * DGP_A_FEATURES);
    let mut prob = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let (w, p, yi) = dgp_a_row(seed, i as u64);
        features.extend_from_slice(&w);
        prob.push(p);
        y.push(yi);
    }
    let x = Matrix::from_row_major(n, DGP_A_FEATURES, features)?;
    Ok(DgpSample {
        dataset: Dataset::new(x, y, None, Some(names(DGP_A_FEATURES)))?,
        truth: Truth {
            outcome_probability: Some(prob),
            ..Truth::default()
        },
    })
}

pub fn gen_dgp_b(n: usize, seed: u64) -> Result<DgpSample> {
    check_rows(n)?;
    let mut features = Vec::with_capacity(n * DGP_B_FEATURES);
    let (mut pis, mut qs, mut a, mut y) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for i in 0..n {
        let (w, pi, q, ai, yi) = dgp_b_row(seed, i as u64);
        features.extend_from_slice(&w);
        pis.push(pi);
        qs.push(q);
        a.push(ai);
        y.push(yi);
    }
    let x = Matrix::from_row_major(n, DGP_B_FEATURES, features)?;
    Ok(DgpSample {
        dataset: Dataset::new(x, y, Some(a), Some(names(DGP_B_FEATURES)))?,
        truth: Truth {
            propensity: Some(pis),
            outcome_given_covariates: Some(qs),
            ate: Some(0.0),
            ..Truth::default()
        },
    })
}
