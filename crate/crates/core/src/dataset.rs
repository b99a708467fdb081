//! BUPA liver-disorders ingestion, min-max normalization and seeded splits.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Field labels of the BUPA file, in file order.
pub const BUPA_FIELDS: [&str; 7] = [
    "mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks", "selector",
];

/// Which BUPA column becomes the target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetMode {
    /// Six features, selector field remapped `{1 -> 0, 2 -> 1}`.
    #[default]
    Selector,
    /// Five blood-test features, drinks field as a regression target.
    Drinks,
}

impl std::str::FromStr for TargetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "selector" => Ok(TargetMode::Selector),
            "drinks" => Ok(TargetMode::Drinks),
            other => Err(Error::InvalidConfig(format!(
                "target mode {other:?} (expected selector or drinks)"
            ))),
        }
    }
}

impl std::fmt::Display for TargetMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TargetMode::Selector => "selector",
            TargetMode::Drinks => "drinks",
        })
    }
}

/// Feature matrix (row-major), targets and normalization provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    features: Vec<T>,
    n_features: usize,
    targets: Vec<T>,
    feature_names: Vec<String>,
    norm_params: Option<Vec<(T, T)>>,
}

impl<T: Scalar> Dataset<T> {
    /// Builds a dataset from rows. Every row must have the same width.
    pub fn from_rows(rows: Vec<Vec<T>>, targets: Vec<T>, feature_names: Vec<String>) -> Result<Self> {
        if rows.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: targets.len(),
            });
        }
        let n_features = rows.first().map_or(feature_names.len(), Vec::len);
        if feature_names.len() != n_features {
            return Err(Error::DimensionMismatch {
                expected: n_features,
                found: feature_names.len(),
            });
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for row in rows {
            if row.len() != n_features {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    found: row.len(),
                });
            }
            features.extend(row);
        }
        Ok(Self {
            features,
            n_features,
            targets,
            feature_names,
            norm_params: None,
        })
    }

    /// Unnamed features `x0, x1, ...`.
    pub fn from_unnamed(rows: Vec<Vec<T>>, targets: Vec<T>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        let names = (0..width).map(|i| format!("x{i}")).collect();
        Self::from_rows(rows, targets, names)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        // chunks_exact on a zero-width matrix would panic
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn target(&self, i: usize) -> T {
        self.targets[i]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Original per-column `(min, max)` if the dataset was normalized.
    pub fn norm_params(&self) -> Option<&[(T, T)]> {
        self.norm_params.as_deref()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Rows selected by index, keeping normalization provenance.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut targets = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            targets.push(self.targets[i]);
        }
        Self {
            features,
            n_features: self.n_features,
            targets,
            feature_names: self.feature_names.clone(),
            norm_params: self.norm_params.clone(),
        }
    }

    /// Maps every feature column linearly onto `[0, 1]`.
    pub fn normalize_minmax(&self) -> Result<Self> {
        let mut params = Vec::with_capacity(self.n_features);
        for j in 0..self.n_features {
            let (lo, hi) = self
                .rows()
                .map(|r| r[j])
                .fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if !(hi > lo) {
                return Err(Error::ConstantColumn {
                    column: self.feature_names[j].clone(),
                });
            }
            params.push((lo, hi));
        }
        let mut features = self.features.clone();
        for row in features.chunks_exact_mut(self.n_features) {
            for (v, &(lo, hi)) in row.iter_mut().zip(&params) {
                // clamp guards the last ulp of rounding at the upper end
                *v = ((*v - lo) / (hi - lo)).max(T::zero()).min(T::one());
            }
        }
        Ok(Self {
            features,
            n_features: self.n_features,
            targets: self.targets.clone(),
            feature_names: self.feature_names.clone(),
            norm_params: Some(params),
        })
    }

    /// Recovers raw feature rows from a normalized dataset.
    pub fn denormalized_rows(&self) -> Option<Vec<Vec<T>>> {
        let params = self.norm_params.as_ref()?;
        Some(
            self.rows()
                .map(|r| {
                    r.iter()
                        .zip(params)
                        .map(|(&v, &(lo, hi))| lo + v * (hi - lo))
                        .collect()
                })
                .collect(),
        )
    }

    /// Seeded holdout split; see [`holdout_indices`].
    pub fn split_holdout(&self, spec: &SplitSpec) -> Result<(Self, Self)> {
        let SplitMode::Holdout { train_fraction } = spec.mode else {
            return Err(Error::InvalidConfig("split_holdout needs a holdout spec".into()));
        };
        let (train, test) = holdout_indices(self.len(), train_fraction, spec.seed)?;
        Ok((self.subset(&train), self.subset(&test)))
    }

    /// Seeded k-fold partition; see [`kfold_indices`].
    pub fn kfold(&self, spec: &SplitSpec) -> Result<Vec<(Self, Self)>> {
        let SplitMode::KFold { k } = spec.mode else {
            return Err(Error::InvalidConfig("kfold needs a k-fold spec".into()));
        };
        Ok(kfold_indices(self.len(), k, spec.seed)?
            .into_iter()
            .map(|(train, test)| (self.subset(&train), self.subset(&test)))
            .collect())
    }
}

/// Reads a BUPA file. See [`parse_bupa`] for the accepted format.
pub fn load_bupa<T: Scalar>(path: impl AsRef<Path>, mode: TargetMode) -> Result<Dataset<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_bupa(&text, mode)
}

/// Parses BUPA text: one sample per non-empty line, 7 comma-separated
/// numbers in the order of [`BUPA_FIELDS`]. Line numbers in errors are
/// 1-based.
pub fn parse_bupa<T: Scalar>(text: &str, mode: TargetMode) -> Result<Dataset<T>> {
    let mut rows = Vec::new();
    let mut targets = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split(',').map(str::trim).collect();
        if tokens.len() != 7 {
            return Err(Error::FieldCount {
                line: line_no,
                found: tokens.len(),
            });
        }
        let mut fields = [0.0f64; 7];
        for (slot, tok) in fields.iter_mut().zip(&tokens) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    token: (*tok).to_string(),
                })?;
        }
        match mode {
            TargetMode::Selector => {
                let target = match fields[6] {
                    v if v == 1.0 => 0.0,
                    v if v == 2.0 => 1.0,
                    v => {
                        return Err(Error::SelectorValue {
                            line: line_no,
                            value: v,
                        })
                    }
                };
                rows.push(fields[..6].iter().map(|&v| T::lit(v)).collect());
                targets.push(T::lit(target));
            }
            TargetMode::Drinks => {
                rows.push(fields[..5].iter().map(|&v| T::lit(v)).collect());
                targets.push(T::lit(fields[5]));
            }
        }
    }
    let width = match mode {
        TargetMode::Selector => 6,
        TargetMode::Drinks => 5,
    };
    let names = BUPA_FIELDS[..width].iter().map(|s| s.to_string()).collect();
    Dataset::from_rows(rows, targets, names)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SplitMode {
    Holdout { train_fraction: f64 },
    KFold { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    #[serde(flatten)]
    pub mode: SplitMode,
    pub seed: u64,
}

impl SplitSpec {
    pub fn holdout(train_fraction: f64, seed: u64) -> Self {
        Self {
            mode: SplitMode::Holdout { train_fraction },
            seed,
        }
    }

    pub fn kfold(k: usize, seed: u64) -> Self {
        Self {
            mode: SplitMode::KFold { k },
            seed,
        }
    }
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx
}

/// Train size for a holdout split: `train_fraction * n` rounded half up.
///
/// The product is nudged by a relative 1e-9 before flooring so that
/// decimal halves which are not exact in binary (0.7 * 345 evaluates to
/// 241.49999999999997) still round up.
pub fn holdout_train_size(n: usize, train_fraction: f64) -> usize {
    let x = train_fraction * n as f64;
    (x + 0.5 + 1e-9 * x.max(1.0)).floor() as usize
}

/// Returns sorted `(train, test)` index sets of a seeded shuffle.
pub fn holdout_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::OutOfRange(format!(
            "train_fraction {train_fraction} must lie in (0, 1)"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let m = holdout_train_size(n, train_fraction);
    if m == 0 || m == n {
        return Err(Error::OutOfRange(format!(
            "train_fraction {train_fraction} on {n} samples leaves an empty partition"
        )));
    }
    let perm = permutation(n, seed);
    let mut train = perm[..m].to_vec();
    let mut test = perm[m..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Returns `k` sorted `(train, test)` index pairs. The first `n % k` test
/// folds carry one extra sample.
pub fn kfold_indices(n: usize, k: usize, seed: u64) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k < 2 || k > n {
        return Err(Error::OutOfRange(format!("k = {k} must satisfy 2 <= k <= {n}")));
    }
    let perm = permutation(n, seed);
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut test = perm[start..start + size].to_vec();
        let mut train: Vec<usize> = perm[..start].iter().chain(&perm[start + size..]).copied().collect();
        test.sort_unstable();
        train.sort_unstable();
        folds.push((train, test));
        start += size;
    }
    Ok(folds)
}
