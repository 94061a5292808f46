//! Seeded base learners. Every learner is a pure function of
//! `(spec, features, target, seed)` and predicts inside [0,1].

mod forest;
mod neural;

use serde::{Deserialize, Serialize};

pub use forest::{Forest, ForestParams};
pub use neural::{NeuralNet, NeuralNetParams};

use crate::data::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    /// Predicts the training mean everywhere; ignores the seed.
    Constant,
    Forest(ForestParams),
    NeuralNet(NeuralNetParams),
}

impl LearnerSpec {
    pub fn forest(tree_count: usize) -> Self {
        LearnerSpec::Forest(ForestParams {
            tree_count,
            ..ForestParams::default()
        })
    }

    pub fn neural_net() -> Self {
        LearnerSpec::NeuralNet(NeuralNetParams::default())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LearnerSpec::Constant => Ok(()),
            LearnerSpec::Forest(p) => p.validate(),
            LearnerSpec::NeuralNet(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ModelKind {
    Constant(f64),
    Forest(Forest),
    NeuralNet(NeuralNet),
}

/// A trained prediction function. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    kind: ModelKind,
    dim: usize,
    training_seed: u64,
}

impl FittedModel {
    pub fn training_seed(&self) -> u64 {
        self.training_seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Prediction at `x`, clamped to [0,1].
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "input has dimension {}, model was trained on {}",
                x.len(),
                self.dim
            )));
        }
        let raw = match &self.kind {
            ModelKind::Constant(v) => *v,
            ModelKind::Forest(f) => f.predict(x),
            ModelKind::NeuralNet(nn) => nn.predict(x),
        };
        Ok(clamp_unit(raw))
    }

    /// Predictions at the given rows of `x`.
    pub fn predict_rows(&self, x: &Matrix, rows: &[usize]) -> Result<Vec<f64>> {
        rows.iter().map(|&i| self.predict(x.row(i))).collect()
    }
}

#[inline]
pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.5
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Trains `spec` on `(x, target)` with all randomness drawn from `seed`.
pub fn fit(spec: &LearnerSpec, x: &Matrix, target: &[f64], seed: u64) -> Result<FittedModel> {
    spec.validate()?;
    if x.rows() == 0 {
        return Err(Error::InvalidInput("cannot fit on zero rows".into()));
    }
    if target.len() != x.rows() {
        return Err(Error::InvalidInput(format!(
            "target has {} entries for {} rows",
            target.len(),
            x.rows()
        )));
    }
    if let Some(i) = target
        .iter()
        .position(|v| !v.is_finite() || !(0.0..=1.0).contains(v))
    {
        return Err(Error::InvalidInput(format!(
            "target at row {i} is {} (must be finite and in [0,1])",
            target[i]
        )));
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite feature value".into()));
    }
    let kind = match spec {
        LearnerSpec::Constant => ModelKind::Constant(mean(target)),
        LearnerSpec::Forest(p) => ModelKind::Forest(Forest::fit(p, x, target, seed)),
        LearnerSpec::NeuralNet(p) => ModelKind::NeuralNet(NeuralNet::fit(p, x, target, seed)),
    };
    Ok(FittedModel {
        kind,
        dim: x.cols(),
        training_seed: seed,
    })
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
