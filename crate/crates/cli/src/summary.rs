//! Cross-seed aggregation and the multi-run summary file.

use std::fmt;

use neurofuzzy::{ExperimentReport, MethodReport, Rate, REPORT_SCHEMA_VERSION};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Anfis,
    AnfisPso,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Anfis, Method::AnfisPso];

    pub fn of(self, r: &ExperimentReport) -> Option<&MethodReport> {
        match self {
            Method::Anfis => r.anfis.as_ref(),
            Method::AnfisPso => r.anfis_pso.as_ref(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Method::Anfis => "anfis",
            Method::AnfisPso => "anfis-pso",
        })
    }
}

/// Mean and sample standard deviation (zero for a single value).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Option<Self> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Some(Self { mean, std, n })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodAggregate {
    pub train_rmse: MeanStd,
    pub test_rmse: MeanStd,
    pub train_mse: MeanStd,
    pub test_mse: MeanStd,
    /// Over seeds where the rate is defined; absent when none are.
    pub accuracy: Option<MeanStd>,
    pub sensitivity: Option<MeanStd>,
    pub specificity: Option<MeanStd>,
}

impl MethodAggregate {
    pub fn over(runs: &[ExperimentReport], method: Method) -> Option<Self> {
        let reports: Vec<&MethodReport> = runs.iter().filter_map(|r| method.of(r)).collect();
        let field = |f: fn(&MethodReport) -> f64| MeanStd::of(&reports.iter().map(|m| f(m)).collect::<Vec<_>>());
        let rate = |f: fn(&MethodReport) -> Option<Rate>| {
            MeanStd::of(&reports.iter().filter_map(|m| f(m).and_then(Rate::value)).collect::<Vec<_>>())
        };
        Some(Self {
            train_rmse: field(|m| m.train_rmse)?,
            test_rmse: field(|m| m.test_rmse)?,
            train_mse: field(|m| m.train_mse)?,
            test_mse: field(|m| m.test_mse)?,
            accuracy: rate(|m| m.classification.as_ref().map(|c| c.summary.accuracy)),
            sensitivity: rate(|m| m.classification.as_ref().map(|c| c.summary.sensitivity)),
            specificity: rate(|m| m.classification.as_ref().map(|c| c.summary.specificity)),
        })
    }
}

/// Everything one `train-*` invocation produced, across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub command: String,
    pub config_digest: String,
    pub config: RunConfig,
    pub runs: Vec<ExperimentReport>,
    pub anfis: Option<MethodAggregate>,
    pub anfis_pso: Option<MethodAggregate>,
    /// Per-seed ANFIS-PSO minus ANFIS test accuracy.
    pub accuracy_delta: Option<MeanStd>,
    /// Seeds on which ANFIS-PSO reached a strictly lower test RMSE than ANFIS.
    pub test_rmse_wins: Option<usize>,
}

impl RunSummary {
    pub fn new(command: &str, config_digest: String, config: RunConfig, runs: Vec<ExperimentReport>) -> Self {
        let deltas: Vec<f64> = runs.iter().filter_map(|r| r.accuracy_delta).collect();
        let paired: Vec<(f64, f64)> = runs
            .iter()
            .filter_map(|r| Some((r.anfis.as_ref()?.test_rmse, r.anfis_pso.as_ref()?.test_rmse)))
            .collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            config_digest,
            config,
            anfis: MethodAggregate::over(&runs, Method::Anfis),
            anfis_pso: MethodAggregate::over(&runs, Method::AnfisPso),
            accuracy_delta: MeanStd::of(&deltas),
            test_rmse_wins: (!paired.is_empty()).then(|| paired.iter().filter(|(a, p)| p < a).count()),
            runs,
        }
    }

    pub fn method(&self, m: Method) -> Option<&MethodAggregate> {
        match m {
            Method::Anfis => self.anfis.as_ref(),
            Method::AnfisPso => self.anfis_pso.as_ref(),
        }
    }
}
