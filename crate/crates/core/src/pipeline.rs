//! The ANFIS-PSO experiment: build an initial FIS, tune its full parameter
//! vector with the swarm, refit the consequents, keep the candidate with
//! the lowest training RMSE. The plain ANFIS baseline runs on the same
//! split for comparison.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{Dataset, TargetMode};
use crate::encode::{decode_fis, encode_fis};
use crate::error::Result;
use crate::fis::Fis;
use crate::gen::{generate, GenConfig};
use crate::metrics::{evaluate, ClassificationSummary, ConfusionMatrix};
use crate::pso::{pso_optimize_seeded, PsoConfig};
use crate::scalar::Scalar;
use crate::train::{lse_consequents, train_anfis, TrainConfig, TrainHistory};

/// Version of the [`ExperimentReport`] document layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Also train the plain ANFIS baseline.
    pub include_baseline: bool,
    /// Threshold for classification metrics; `None` skips them (regression
    /// targets).
    pub threshold: Option<f64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            include_baseline: true,
            threshold: Some(crate::metrics::DEFAULT_THRESHOLD),
        }
    }
}

impl PipelineOptions {
    pub fn for_target(mode: TargetMode, include_baseline: bool) -> Self {
        Self {
            include_baseline,
            threshold: (mode == TargetMode::Selector).then_some(crate::metrics::DEFAULT_THRESHOLD),
        }
    }
}

/// Which model the ANFIS-PSO selection kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidate {
    Initial,
    InitialLse,
    PsoBest,
    PsoBestLse,
    AnfisTrained,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MethodHistory<T> {
    Training(TrainHistory<T>),
    Convergence(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodResult<T> {
    pub model: Fis<T>,
    pub selected: Candidate,
    pub train_rmse: T,
    pub test_rmse: T,
    /// Test-split confusion matrix and rates.
    pub classification: Option<(ConfusionMatrix, ClassificationSummary)>,
    pub history: MethodHistory<T>,
}

impl<T: Scalar> MethodResult<T> {
    fn evaluate(
        model: Fis<T>,
        selected: Candidate,
        train: &Dataset<T>,
        test: &Dataset<T>,
        history: MethodHistory<T>,
        opts: &PipelineOptions,
    ) -> Result<Self> {
        let classification = match opts.threshold {
            Some(t) => Some(evaluate(&model, test, T::lit(t))?),
            None => None,
        };
        Ok(Self {
            train_rmse: model.rmse(train)?,
            test_rmse: model.rmse(test)?,
            model,
            selected,
            classification,
            history,
        })
    }

    pub fn train_mse(&self) -> T {
        self.train_rmse * self.train_rmse
    }

    pub fn test_mse(&self) -> T {
        self.test_rmse * self.test_rmse
    }
}

/// In-memory outcome of one seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment<T> {
    pub initial: Fis<T>,
    pub initial_train_rmse: T,
    pub anfis: Option<MethodResult<T>>,
    pub anfis_pso: Option<MethodResult<T>>,
}

/// Plain ANFIS: initial FIS followed by hybrid training.
pub fn run_anfis<T: Scalar>(
    train: &Dataset<T>,
    test: &Dataset<T>,
    gen: &GenConfig,
    anfis_cfg: &TrainConfig,
    opts: &PipelineOptions,
) -> Result<Experiment<T>> {
    let initial = generate(train, gen)?;
    let initial_train_rmse = initial.rmse(train)?;
    let anfis = baseline(&initial, train, test, anfis_cfg, opts)?;
    Ok(Experiment {
        initial,
        initial_train_rmse,
        anfis: Some(anfis),
        anfis_pso: None,
    })
}

fn baseline<T: Scalar>(
    initial: &Fis<T>,
    train: &Dataset<T>,
    test: &Dataset<T>,
    anfis_cfg: &TrainConfig,
    opts: &PipelineOptions,
) -> Result<MethodResult<T>> {
    let (model, history) = train_anfis(initial, train, Some(test), anfis_cfg)?;
    MethodResult::evaluate(model, Candidate::AnfisTrained, train, test, MethodHistory::Training(history), opts)
}

/// ANFIS-PSO on one split.
///
/// The swarm minimizes the train RMSE of `decode_fis(initial, v)` with one
/// particle placed at the encoded initial FIS. The returned model is the
/// lowest-train-RMSE member of {initial, swarm best, swarm best with
/// refitted consequents}. With `pso_cfg.iterations == 0` the swarm is
/// skipped and the candidates are {initial, initial with refitted
/// consequents}.
pub fn run_anfis_pso<T: Scalar>(
    train: &Dataset<T>,
    test: &Dataset<T>,
    gen: &GenConfig,
    pso_cfg: &PsoConfig,
    anfis_cfg: &TrainConfig,
    opts: &PipelineOptions,
) -> Result<Experiment<T>> {
    anfis_cfg.validate()?;
    let initial = generate(train, gen)?;
    let initial_train_rmse = initial.rmse(train)?;
    let lambda = T::lit(anfis_cfg.ridge_lambda);

    let mut candidates: Vec<(Candidate, Fis<T>)> = vec![(Candidate::Initial, initial.clone())];
    let convergence = if pso_cfg.iterations == 0 {
        candidates.push((Candidate::InitialLse, lse_consequents(&initial, train, lambda)?));
        Vec::new()
    } else {
        let encoded = encode_fis(&initial);
        let objective = |v: &[T]| match decode_fis(&initial, v) {
            Ok(d) => d.fis.rmse(train).unwrap_or(T::infinity()),
            Err(_) => T::infinity(),
        };
        let outcome = pso_optimize_seeded(&objective, &encoded.bounds, pso_cfg, &[encoded.values.clone()])?;
        let best = decode_fis(&initial, &outcome.best_position)?.fis;
        let refit = lse_consequents(&best, train, lambda)?;
        candidates.push((Candidate::PsoBest, best));
        candidates.push((Candidate::PsoBestLse, refit));
        outcome.history
    };

    let mut chosen = 0;
    let mut chosen_rmse = T::infinity();
    for (i, (_, fis)) in candidates.iter().enumerate() {
        let r = fis.rmse(train)?;
        if r < chosen_rmse {
            chosen = i;
            chosen_rmse = r;
        }
    }
    let (which, model) = candidates.swap_remove(chosen);
    let anfis_pso = MethodResult::evaluate(model, which, train, test, MethodHistory::Convergence(convergence), opts)?;

    let anfis = if opts.include_baseline {
        Some(baseline(&initial, train, test, anfis_cfg, opts)?)
    } else {
        None
    };
    Ok(Experiment {
        initial,
        initial_train_rmse,
        anfis,
        anfis_pso: Some(anfis_pso),
    })
}

/// Short hex SHA-256 of a value's canonical JSON.
pub fn config_digest<S: Serialize>(value: &S) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    Ok(hex::encode(&Sha256::digest(&bytes)[..8]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub confusion: ConfusionMatrix,
    #[serde(flatten)]
    pub summary: ClassificationSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub selected: Candidate,
    pub train_rmse: f64,
    pub train_mse: f64,
    pub test_rmse: f64,
    pub test_mse: f64,
    pub n_rules: usize,
    pub classification: Option<ClassificationReport>,
    /// Model file, relative to the report.
    pub model_file: Option<String>,
    /// Training-history or convergence CSV, relative to the report.
    pub history_file: Option<String>,
}

impl MethodReport {
    pub fn from_result<T: Scalar>(r: &MethodResult<T>) -> Self {
        Self {
            selected: r.selected,
            train_rmse: r.train_rmse.as_f64(),
            train_mse: r.train_mse().as_f64(),
            test_rmse: r.test_rmse.as_f64(),
            test_mse: r.test_mse().as_f64(),
            n_rules: r.model.n_rules(),
            classification: r.classification.map(|(confusion, summary)| ClassificationReport { confusion, summary }),
            model_file: None,
            history_file: None,
        }
    }

    pub fn accuracy(&self) -> Option<f64> {
        self.classification.as_ref().and_then(|c| c.summary.accuracy.value())
    }
}

/// Serialized record of one seed. Field order is stable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub seed: u64,
    pub config_digest: String,
    pub target_mode: TargetMode,
    pub dataset_rows: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub initial_rules: usize,
    pub initial_train_rmse: f64,
    pub anfis: Option<MethodReport>,
    pub anfis_pso: Option<MethodReport>,
    /// ANFIS-PSO minus ANFIS test accuracy, when both are defined.
    pub accuracy_delta: Option<f64>,
}

/// Run identity recorded in a report.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMeta {
    pub seed: u64,
    pub config_digest: String,
    pub target_mode: TargetMode,
    pub dataset_rows: usize,
    pub train_rows: usize,
    pub test_rows: usize,
}

impl ExperimentReport {
    pub fn new<T: Scalar>(meta: RunMeta, exp: &Experiment<T>) -> Self {
        let anfis = exp.anfis.as_ref().map(MethodReport::from_result);
        let anfis_pso = exp.anfis_pso.as_ref().map(MethodReport::from_result);
        let accuracy_delta = match (&anfis, &anfis_pso) {
            (Some(a), Some(p)) => p.accuracy().zip(a.accuracy()).map(|(p, a)| p - a),
            _ => None,
        };
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            seed: meta.seed,
            config_digest: meta.config_digest,
            target_mode: meta.target_mode,
            dataset_rows: meta.dataset_rows,
            train_rows: meta.train_rows,
            test_rows: meta.test_rows,
            initial_rules: exp.initial.n_rules(),
            initial_train_rmse: exp.initial_train_rmse.as_f64(),
            anfis,
            anfis_pso,
            accuracy_delta,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
