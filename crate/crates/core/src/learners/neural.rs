//! Single-hidden-layer logistic network trained by full-batch gradient
//! descent on the log-loss.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::rng::{derive_seed, seeded_rng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NeuralNetParams {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Initial weights are uniform on `[-init_scale, init_scale]`.
    pub init_scale: f64,
    /// Z-score the inputs with the training rows' column means and standard deviations.
    pub standardize: bool,
}

impl Default for NeuralNetParams {
    fn default() -> Self {
        Self {
            hidden_units: 20,
            learning_rate: 0.1,
            epochs: 200,
            init_scale: 0.7,
            standardize: true,
        }
    }
}

impl NeuralNetParams {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_units < 1 {
            return Err(Error::InvalidArgument("neural net needs hidden_units >= 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("neural net needs learning_rate > 0".into()));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidArgument("neural net needs epochs >= 1".into()));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Error::InvalidArgument("neural net needs init_scale >= 0".into()));
        }
        Ok(())
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNet {
    center: Vec<f64>,
    scale: Vec<f64>,
    /// `hidden x d`, row-major.
    w_in: Vec<f64>,
    b_in: Vec<f64>,
    w_out: Vec<f64>,
    b_out: f64,
}

impl NeuralNet {
    pub(super) fn fit(params: &NeuralNetParams, x: &Matrix, target: &[f64], seed: u64) -> Self {
        let (n, d, h) = (x.rows(), x.cols(), params.hidden_units);

        let (center, scale) = if params.standardize {
            column_moments(x)
        } else {
            (vec![0.0; d], vec![1.0; d])
        };
        let mut xs = Vec::with_capacity(n * d);
        for i in 0..n {
            xs.extend(
                x.row(i)
                    .iter()
                    .zip(center.iter().zip(&scale))
                    .map(|(v, (c, s))| (v - c) / s),
            );
        }

        let mut rng = seeded_rng(derive_seed(seed, 0));
        let a = params.init_scale;
        let mut draw = || if a > 0.0 { rng.random_range(-a..=a) } else { 0.0 };
        let mut w_in: Vec<f64> = (0..h * d).map(|_| draw()).collect();
        let mut b_in: Vec<f64> = (0..h).map(|_| draw()).collect();
        let mut w_out: Vec<f64> = (0..h).map(|_| draw()).collect();
        let mut b_out = draw();

        let mut g_w_in = vec![0.0; h * d];
        let mut g_b_in = vec![0.0; h];
        let mut g_w_out = vec![0.0; h];
        let mut hidden = vec![0.0; h];
        let inv_n = 1.0 / n as f64;
        let lr = params.learning_rate;

        for _ in 0..params.epochs {
            g_w_in.fill(0.0);
            g_b_in.fill(0.0);
            g_w_out.fill(0.0);
            let mut g_b_out = 0.0;
            for (i, &y) in target.iter().enumerate() {
                let xi = &xs[i * d..(i + 1) * d];
                let mut out = b_out;
                for j in 0..h {
                    let w = &w_in[j * d..(j + 1) * d];
                    let z = b_in[j] + w.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>();
                    hidden[j] = sigmoid(z);
                    out += w_out[j] * hidden[j];
                }
                // d(log-loss)/d(output logit)
                let g = (sigmoid(out) - y) * inv_n;
                g_b_out += g;
                for j in 0..h {
                    g_w_out[j] += g * hidden[j];
                    let gh = g * w_out[j] * hidden[j] * (1.0 - hidden[j]);
                    g_b_in[j] += gh;
                    for (gw, xv) in g_w_in[j * d..(j + 1) * d].iter_mut().zip(xi) {
                        *gw += gh * xv;
                    }
                }
            }
            for (w, g) in w_in.iter_mut().zip(&g_w_in) {
                *w -= lr * g;
            }
            for (w, g) in b_in.iter_mut().zip(&g_b_in) {
                *w -= lr * g;
            }
            for (w, g) in w_out.iter_mut().zip(&g_w_out) {
                *w -= lr * g;
            }
            b_out -= lr * g_b_out;
        }

        NeuralNet {
            center,
            scale,
            w_in,
            b_in,
            w_out,
            b_out,
        }
    }

    pub(super) fn predict(&self, x: &[f64]) -> f64 {
        let d = x.len();
        let mut out = self.b_out;
        for (j, (&b, &v)) in self.b_in.iter().zip(&self.w_out).enumerate() {
            let w = &self.w_in[j * d..(j + 1) * d];
            let mut z = b;
            for k in 0..d {
                z += w[k] * (x[k] - self.center[k]) / self.scale[k];
            }
            out += v * sigmoid(z);
        }
        sigmoid(out)
    }
}

fn column_moments(x: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let (n, d) = (x.rows(), x.cols());
    let mut center = vec![0.0; d];
    for i in 0..n {
        for (c, v) in center.iter_mut().zip(x.row(i)) {
            *c += v;
        }
    }
    center.iter_mut().for_each(|c| *c /= n as f64);
    let mut scale = vec![0.0; d];
    for i in 0..n {
        for ((s, v), c) in scale.iter_mut().zip(x.row(i)).zip(&center) {
            *s += (v - c) * (v - c);
        }
    }
    for s in scale.iter_mut() {
        *s = (*s / n as f64).sqrt();
        if !(*s > 1e-12) {
            *s = 1.0;
        }
    }
    (center, scale)
}
