//! Flat run configuration, loadable from TOML and overridable by flags.

use std::fs;
use std::path::{Path, PathBuf};

use neurofuzzy::{GenConfig, GenMethod, PsoConfig, SplitSpec, TargetMode, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Every key is optional in the file; missing keys take these defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: PathBuf,
    pub target: TargetMode,
    pub train_fraction: f64,
    pub seeds: Vec<u64>,
    pub out: PathBuf,

    pub gen_method: GenMethod,
    pub radius: f64,
    pub accept_ratio: f64,
    pub reject_ratio: f64,
    pub mfs_per_input: usize,
    pub rule_cap: usize,

    pub epochs: usize,
    pub learning_rate: f64,
    pub ridge_lambda: f64,

    pub swarm: usize,
    pub iterations: usize,
    pub w_start: f64,
    pub w_end: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_max_fraction: f64,
    pub parallel: bool,

    /// `train-anfis-pso` also trains the plain ANFIS baseline.
    pub baseline: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let gen = GenConfig::default();
        let train = TrainConfig::default();
        let pso = PsoConfig::default();
        Self {
            data: PathBuf::from("data/bupa.data"),
            target: TargetMode::Selector,
            train_fraction: 0.7,
            seeds: (1..=10).collect(),
            out: PathBuf::from("runs"),
            gen_method: gen.method,
            radius: gen.radius,
            accept_ratio: gen.accept_ratio,
            reject_ratio: gen.reject_ratio,
            mfs_per_input: gen.mfs_per_input,
            rule_cap: gen.rule_cap,
            epochs: train.epochs,
            learning_rate: train.learning_rate,
            ridge_lambda: train.ridge_lambda,
            swarm: pso.swarm_size,
            iterations: pso.iterations,
            w_start: pso.w_start,
            w_end: pso.w_end,
            c1: pso.c1,
            c2: pso.c2,
            v_max_fraction: pso.v_max_fraction,
            parallel: pso.parallel,
            baseline: true,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn gen_config(&self) -> GenConfig {
        GenConfig {
            method: self.gen_method,
            mfs_per_input: self.mfs_per_input,
            radius: self.radius,
            accept_ratio: self.accept_ratio,
            reject_ratio: self.reject_ratio,
            rule_cap: self.rule_cap,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            ridge_lambda: self.ridge_lambda,
            record_history: true,
        }
    }

    pub fn pso_config(&self, seed: u64) -> PsoConfig {
        PsoConfig {
            swarm_size: self.swarm,
            iterations: self.iterations,
            w_start: self.w_start,
            w_end: self.w_end,
            c1: self.c1,
            c2: self.c2,
            v_max_fraction: self.v_max_fraction,
            seed,
            parallel: self.parallel,
        }
    }

    pub fn split(&self, seed: u64) -> SplitSpec {
        SplitSpec::holdout(self.train_fraction, seed)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let config = |e: neurofuzzy::Error| CliError::Config(e.to_string());
        if self.seeds.is_empty() {
            return Err(CliError::Config("seeds must list at least one seed".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::Config(format!("seed {} is listed twice", w[0])));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(CliError::Config(format!(
                "train_fraction = {} (need 0 < f < 1)",
                self.train_fraction
            )));
        }
        self.gen_config().validate().map_err(config)?;
        self.train_config().validate().map_err(config)?;
        let pso = self.pso_config(0);
        if self.iterations == 0 {
            pso.validate_dynamics().map_err(config)
        } else {
            pso.validate().map_err(config)
        }
    }

    /// Digest of everything that affects a run's numbers.
    pub fn digest(&self, command: &str) -> Result<String, CliError> {
        let key = Self {
            seeds: Vec::new(),
            out: PathBuf::new(),
            ..self.clone()
        };
        neurofuzzy::config_digest(&(command, key)).map_err(CliError::Runtime)
    }
}
