//! Side-by-side comparison of saved reports.

use std::fmt;
use std::fs;
use std::path::Path;

use neurofuzzy::{ClassificationSummary, ExperimentReport, MethodReport, Rate, REPORT_SCHEMA_VERSION};

use crate::error::CliError;
use crate::summary::{MeanStd, Method, MethodAggregate, RunSummary};

/// Runs read from one report file.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportSet {
    pub label: String,
    pub runs: Vec<ExperimentReport>,
}

impl ReportSet {
    pub fn aggregate(&self, m: Method) -> Option<MethodAggregate> {
        MethodAggregate::over(&self.runs, m)
    }
}

/// Accepts a summary file or a single per-seed `report.json`.
pub fn load_report_set(path: &Path) -> Result<ReportSet, CliError> {
    let bad = |m: String| CliError::Input(format!("{}: {m}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(format!("cannot read report: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(REPORT_SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(bad(format!(
                "schema version {v} does not match supported version {REPORT_SCHEMA_VERSION}"
            )))
        }
        None => return Err(bad("not a report (no schema_version)".into())),
    }
    let runs = if value.get("runs").is_some() {
        serde_json::from_value::<RunSummary>(value).map_err(|e| bad(e.to_string()))?.runs
    } else {
        vec![serde_json::from_value::<ExperimentReport>(value).map_err(|e| bad(e.to_string()))?]
    };
    if runs.is_empty() {
        return Err(bad("report holds no runs".into()));
    }
    let label = path.display().to_string();
    Ok(ReportSet { label, runs })
}

/// Difference of means, `other - reference`, for one method.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodDelta {
    pub label: String,
    pub method: Method,
    pub train_rmse: f64,
    pub test_rmse: f64,
    pub test_mse: f64,
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub sets: Vec<ReportSet>,
    pub deltas: Vec<MethodDelta>,
    /// Mean ANFIS-PSO accuracy minus mean ANFIS accuracy, each taken from
    /// the first report that contains the method.
    pub accuracy_improvement: Option<f64>,
    pub anfis_accuracy: Option<f64>,
}

pub fn compare(sets: Vec<ReportSet>) -> Result<Comparison, CliError> {
    if sets.len() < 2 {
        return Err(CliError::Usage(format!("compare needs at least two reports, got {}", sets.len())));
    }
    let mode = |s: &ReportSet| s.runs[0].target_mode;
    let first_mode = mode(&sets[0]);
    for s in &sets {
        if let Some(r) = s.runs.iter().find(|r| r.target_mode != first_mode) {
            return Err(CliError::Input(format!(
                "{}: target mode {} does not match {} in {}",
                s.label, r.target_mode, first_mode, sets[0].label
            )));
        }
    }

    let mut deltas = Vec::new();
    for other in &sets[1..] {
        for m in Method::ALL {
            let (Some(a), Some(b)) = (sets[0].aggregate(m), other.aggregate(m)) else {
                continue;
            };
            let d = |f: fn(&MethodAggregate) -> Option<MeanStd>| Some(f(&b)?.mean - f(&a)?.mean);
            deltas.push(MethodDelta {
                label: other.label.clone(),
                method: m,
                train_rmse: b.train_rmse.mean - a.train_rmse.mean,
                test_rmse: b.test_rmse.mean - a.test_rmse.mean,
                test_mse: b.test_mse.mean - a.test_mse.mean,
                accuracy: d(|x| x.accuracy),
                sensitivity: d(|x| x.sensitivity),
                specificity: d(|x| x.specificity),
            });
        }
    }

    let mean_accuracy = |m: Method| sets.iter().find_map(|s| s.aggregate(m)).and_then(|a| a.accuracy).map(|a| a.mean);
    let anfis_accuracy = mean_accuracy(Method::Anfis);
    let accuracy_improvement = mean_accuracy(Method::AnfisPso).zip(anfis_accuracy).map(|(p, a)| p - a);
    Ok(Comparison {
        sets,
        deltas,
        accuracy_improvement,
        anfis_accuracy,
    })
}

fn rate(m: &MethodReport, f: fn(&ClassificationSummary) -> Rate) -> Rate {
    m.classification.as_ref().map_or(Rate::UNDEFINED, |c| f(&c.summary))
}

fn opt(v: Option<f64>) -> Rate {
    v.map_or(Rate::UNDEFINED, Rate::Value)
}

const HEADER: [&str; 9] = [
    "report", "seed", "method", "train_rmse", "test_rmse", "test_mse", "accuracy", "sensitivity", "specificity",
];

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lw = self.sets.iter().map(|s| s.label.len()).max().unwrap_or(0).max(HEADER[0].len());
        writeln!(
            f,
            "{:<lw$}  {:>6}  {:<9}  {:>10}  {:>10}  {:>10}  {:>10}  {:>11}  {:>11}",
            HEADER[0], HEADER[1], HEADER[2], HEADER[3], HEADER[4], HEADER[5], HEADER[6], HEADER[7], HEADER[8]
        )?;
        for s in &self.sets {
            for m in Method::ALL {
                for r in &s.runs {
                    let Some(mr) = m.of(r) else { continue };
                    writeln!(
                        f,
                        "{:<lw$}  {:>6}  {:<9}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>11.4}  {:>11.4}",
                        s.label,
                        r.seed,
                        m,
                        mr.train_rmse,
                        mr.test_rmse,
                        mr.test_mse,
                        rate(mr, |c| c.accuracy),
                        rate(mr, |c| c.sensitivity),
                        rate(mr, |c| c.specificity),
                    )?;
                }
                let Some(a) = s.aggregate(m) else { continue };
                for (name, pick) in [("mean", (|x: MeanStd| x.mean) as fn(MeanStd) -> f64), ("std", |x: MeanStd| x.std)] {
                    writeln!(
                        f,
                        "{:<lw$}  {:>6}  {:<9}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>11.4}  {:>11.4}",
                        s.label,
                        name,
                        m,
                        pick(a.train_rmse),
                        pick(a.test_rmse),
                        pick(a.test_mse),
                        opt(a.accuracy.map(pick)),
                        opt(a.sensitivity.map(pick)),
                        opt(a.specificity.map(pick)),
                    )?;
                }
            }
        }
        if !self.deltas.is_empty() {
            writeln!(f)?;
            writeln!(f, "deltas of means against {}", self.sets[0].label)?;
            for d in &self.deltas {
                writeln!(
                    f,
                    "{:<lw$}  {:>6}  {:<9}  {:>+10.4}  {:>+10.4}  {:>+10.4}  {:>10}  {:>11}  {:>11}",
                    d.label,
                    "delta",
                    d.method,
                    d.train_rmse,
                    d.test_rmse,
                    d.test_mse,
                    signed(d.accuracy),
                    signed(d.sensitivity),
                    signed(d.specificity),
                )?;
            }
        }
        writeln!(f)?;
        match (self.accuracy_improvement, self.anfis_accuracy) {
            (Some(d), Some(base)) if base > 0.0 => write!(
                f,
                "accuracy improvement (anfis-pso vs anfis): {d:+.4} ({:+.2}% relative)",
                100.0 * d / base
            ),
            (Some(d), _) => write!(f, "accuracy improvement (anfis-pso vs anfis): {d:+.4}"),
            (None, _) => write!(f, "accuracy improvement (anfis-pso vs anfis): undefined"),
        }
    }
}

fn signed(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| format!("{v:+.4}"))
}
