//! Binary classification metrics over thresholded FIS output.
//! The positive class (liver disorder) is encoded as 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fis::Fis;
use crate::scalar::Scalar;

/// Midpoint of the `{0, 1}` target encoding.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// `1` when `output >= threshold`, else `0`.
pub fn classify<T: Scalar>(output: T, threshold: T) -> Result<u8> {
    if !output.is_finite() {
        return Err(Error::NonFinite(format!("classifier output {output}")));
    }
    Ok(u8::from(output >= threshold))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.tn + self.fp
    }
}

pub fn confusion(predictions: &[u8], labels: &[u8]) -> Result<ConfusionMatrix> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: predictions.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (1, 1) => cm.tp += 1,
            (1, 0) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fn_ += 1,
            (bad, 0 | 1) | (_, bad) => return Err(Error::InvalidLabel(bad)),
        }
    }
    Ok(cm)
}

/// A rate that may be undefined because its denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rate {
    Value(f64),
    Undefined(Undefined),
}

/// Serialized as the string `"undefined"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Undefined {
    Undefined,
}

impl Rate {
    pub const UNDEFINED: Rate = Rate::Undefined(Undefined::Undefined);

    fn ratio(num: usize, den: usize) -> Self {
        if den == 0 {
            Self::UNDEFINED
        } else {
            Rate::Value(num as f64 / den as f64)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Rate::Value(v) => Some(v),
            Rate::Undefined(_) => None,
        }
    }

    pub fn is_defined(self) -> bool {
        self.value().is_some()
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => {
                let w = f.width().unwrap_or(0);
                match f.precision() {
                    Some(p) => write!(f, "{v:>w$.p$}"),
                    None => write!(f, "{v:>w$}"),
                }
            }
            // precision would truncate the marker
            None => write!(f, "{:>w$}", "undefined", w = f.width().unwrap_or(0)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub accuracy: Rate,
    pub sensitivity: Rate,
    pub specificity: Rate,
}

pub fn summarize(cm: &ConfusionMatrix) -> Result<ClassificationSummary> {
    if cm.total() == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(ClassificationSummary {
        accuracy: Rate::ratio(cm.tp + cm.tn, cm.total()),
        sensitivity: Rate::ratio(cm.tp, cm.positives()),
        specificity: Rate::ratio(cm.tn, cm.negatives()),
    })
}

impl fmt::Display for ClassificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>10}", "metric", "value")?;
        writeln!(f, "{:<12} {:>10.4}", "accuracy", self.accuracy)?;
        writeln!(f, "{:<12} {:>10.4}", "sensitivity", self.sensitivity)?;
        write!(f, "{:<12} {:>10.4}", "specificity", self.specificity)
    }
}

/// Thresholds FIS predictions on `d` against its `{0, 1}` targets.
pub fn evaluate<T: Scalar>(fis: &Fis<T>, d: &Dataset<T>, threshold: T) -> Result<(ConfusionMatrix, ClassificationSummary)> {
    let predictions = fis
        .predict_dataset(d)?
        .into_iter()
        .map(|y| classify(y, threshold))
        .collect::<Result<Vec<_>>>()?;
    let labels = d
        .targets()
        .iter()
        .map(|&t| match t.as_f64() {
            v if v == 0.0 => Ok(0),
            v if v == 1.0 => Ok(1),
            v => Err(Error::OutOfRange(format!("target {v} is not a class label"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    let cm = confusion(&predictions, &labels)?;
    Ok((cm, summarize(&cm)?))
}
