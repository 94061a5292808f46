//! Run configurations. Every command config can be loaded from a JSON file
//! and then overridden field by field from the command line.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use seedstable::crossbag::DEFAULT_MAX_BAGS;
use seedstable::estimators::{Folds, DEFAULT_CLIP};
use seedstable::learners::{LearnerSpec, NeuralNetParams};
use seedstable::stability::StabilityTarget;

use crate::CliError;

/// Settings shared by every command. Neither the output directory nor the
/// worker count is echoed into reports, so outputs only depend on the
/// numeric configuration and the master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GlobalConfig {
    pub master_seed: u64,
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            out_dir: PathBuf::from("out"),
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sim1Config {
    #[serde(flatten)]
    pub global: GlobalConfig,
    pub n: usize,
    pub seeds: usize,
    pub v_bags: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub net: NeuralNetParams,
}

impl Default for Sim1Config {
    fn default() -> Self {
        Self {
            global: GlobalConfig::default(),
            n: 100,
            seeds: 200,
            v_bags: 320,
            rho: 2.0 / 3.0,
            epsilon: 0.1,
            delta: 0.1,
            net: NeuralNetParams::default(),
        }
    }
}

impl Sim1Config {
    pub fn validate(&self) -> Result<(), CliError> {
        check(self.n >= 2, "n must be at least 2")?;
        check(self.seeds >= 2, "seeds must be at least 2")?;
        check(self.v_bags >= 1, "v_bags must be at least 1")?;
        seedstable::bagging::subsample_size(self.n, self.rho)?;
        StabilityTarget::new(self.epsilon, self.delta)?;
        LearnerSpec::NeuralNet(self.net.clone()).validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sim2Config {
    #[serde(flatten)]
    pub global: GlobalConfig,
    pub n: usize,
    pub seeds: usize,
    pub rho: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub trees: usize,
    /// Cross-fitting baselines run once per seed.
    pub folds: Vec<Folds>,
    /// Cross-fitting baselines averaged over `avg_seeds` inner seeds.
    pub avg_folds: Vec<Folds>,
    pub avg_seeds: usize,
    pub adaptive: bool,
    pub v0: usize,
    pub growth: f64,
    pub max_rounds: usize,
    pub clip: f64,
    /// Fill the `elapsed_ms` column. Wall-clock times make the estimates
    /// file differ between runs.
    pub timing: bool,
}

impl Default for Sim2Config {
    fn default() -> Self {
        let all = vec![Folds::K(2), Folds::K(10), Folds::Loo];
        Self {
            global: GlobalConfig::default(),
            n: 100,
            seeds: 100,
            rho: 0.5,
            epsilon: 0.01,
            delta: 0.01,
            trees: 100,
            folds: all.clone(),
            avg_folds: all,
            avg_seeds: 80,
            adaptive: true,
            v0: 50,
            growth: 1.5,
            max_rounds: 20,
            clip: DEFAULT_CLIP,
            timing: false,
        }
    }
}

impl Sim2Config {
    pub fn validate(&self) -> Result<(), CliError> {
        check(self.n >= 2, "n must be at least 2")?;
        check(self.seeds >= 2, "seeds must be at least 2")?;
        check(self.trees >= 1, "trees must be at least 1")?;
        check(
            self.adaptive || !self.folds.is_empty() || !self.avg_folds.is_empty(),
            "no method selected",
        )?;
        check(
            self.avg_folds.is_empty() || self.avg_seeds >= 1,
            "avg_seeds must be at least 1 when averaging is enabled",
        )?;
        for f in self.folds.iter().chain(&self.avg_folds) {
            check(
                f.count(self.n) <= self.n,
                &format!("{f} folds exceed the {} rows", self.n),
            )?;
        }
        check(self.v0 >= 2, "v0 must exceed 1")?;
        check(self.growth > 1.0, "growth must exceed 1")?;
        check(self.max_rounds >= 1, "max_rounds must be at least 1")?;
        check(self.clip > 0.0 && self.clip < 0.5, "clip must lie in (0, 0.5)")?;
        seedstable::bagging::subsample_size(self.n, self.rho)?;
        StabilityTarget::new(self.epsilon, self.delta)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Crossfit,
    Crossbag,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateConfig {
    #[serde(flatten)]
    pub global: GlobalConfig,
    pub input: PathBuf,
    pub method: Method,
    pub folds: Folds,
    pub rho: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// OOB target: the starting value for `adaptive`, the fixed one for `crossbag`.
    pub v0: usize,
    pub growth: f64,
    pub max_rounds: usize,
    pub max_bags: usize,
    pub clip: f64,
    /// Learner for the outcome regressions, and for the propensity unless
    /// `propensity_learner` is set.
    pub learner: LearnerSpec,
    pub propensity_learner: Option<LearnerSpec>,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            global: GlobalConfig::default(),
            input: PathBuf::new(),
            method: Method::Adaptive,
            folds: Folds::K(2),
            rho: 0.5,
            epsilon: 0.01,
            delta: 0.01,
            v0: 50,
            growth: 1.5,
            max_rounds: 20,
            max_bags: DEFAULT_MAX_BAGS,
            clip: DEFAULT_CLIP,
            learner: LearnerSpec::forest(100),
            propensity_learner: None,
        }
    }
}

impl EstimateConfig {
    /// Learners for propensity, treated outcome and control outcome.
    pub fn learners(&self) -> [LearnerSpec; 3] {
        let pi = self.propensity_learner.clone().unwrap_or_else(|| self.learner.clone());
        [pi, self.learner.clone(), self.learner.clone()]
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check(!self.input.as_os_str().is_empty(), "an input CSV is required")?;
        check(self.v0 >= 2, "v0 must exceed 1")?;
        check(self.growth > 1.0, "growth must exceed 1")?;
        check(self.max_rounds >= 1, "max_rounds must be at least 1")?;
        check(self.clip > 0.0 && self.clip < 0.5, "clip must lie in (0, 0.5)")?;
        StabilityTarget::new(self.epsilon, self.delta)?;
        for spec in self.learners() {
            spec.validate()?;
        }
        Ok(())
    }
}

fn check(ok: bool, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(msg.to_string()))
    }
}

/// Reads a JSON config file, or the defaults when no file is given.
pub fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let file = File::open(p).map_err(|e| CliError::io(format!("opening config {}", p.display()), e))?;
            serde_json::from_reader(file)
                .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", p.display())))
        }
    }
}
