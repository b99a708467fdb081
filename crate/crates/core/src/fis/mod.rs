//! Takagi–Sugeno inference: the five-layer ANFIS forward pass.
//!
//! Layer 1 fuzzifies each input through its membership functions, layer 2
//! multiplies antecedent degrees into rule firing strengths, layer 3
//! normalizes them, layer 4 weights each rule's linear consequent and
//! layer 5 sums the result.

mod membership;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use membership::{MembershipFunction, PremiseParam};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Total firing strength at or below which the normalized weights fall
/// back to the uniform vector.
pub const ZERO_FIRING_EPS: f64 = 1e-12;

/// Conjunction operator. Only the product is supported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    #[default]
    Product,
}

/// Linear rule output `coefficients . x + constant`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RuleConsequent<T> {
    pub coefficients: Vec<T>,
    pub constant: T,
}

impl<T: Scalar> RuleConsequent<T> {
    pub fn zero(n_inputs: usize) -> Self {
        Self {
            coefficients: vec![T::zero(); n_inputs],
            constant: T::zero(),
        }
    }

    pub fn constant(n_inputs: usize, value: T) -> Self {
        Self {
            coefficients: vec![T::zero(); n_inputs],
            constant: value,
        }
    }

    #[inline]
    pub fn eval(&self, x: &[T]) -> T {
        self.coefficients
            .iter()
            .zip(x)
            .fold(self.constant, |acc, (&p, &xi)| acc + p * xi)
    }
}

/// A Takagi–Sugeno fuzzy inference system with product T-norm.
///
/// Rule `r` fires on input `i` through `input_mfs[i][rules[r][i]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", try_from = "FisDocument<T>")]
pub struct Fis<T> {
    n_inputs: usize,
    tnorm: TNorm,
    input_mfs: Vec<Vec<MembershipFunction<T>>>,
    rules: Vec<Vec<usize>>,
    consequents: Vec<RuleConsequent<T>>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Scalar")]
struct FisDocument<T> {
    n_inputs: usize,
    #[serde(default)]
    tnorm: TNorm,
    input_mfs: Vec<Vec<MembershipFunction<T>>>,
    rules: Vec<Vec<usize>>,
    consequents: Vec<RuleConsequent<T>>,
}

impl<T: Scalar> TryFrom<FisDocument<T>> for Fis<T> {
    type Error = Error;

    fn try_from(doc: FisDocument<T>) -> Result<Self> {
        if doc.input_mfs.len() != doc.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: doc.n_inputs,
                found: doc.input_mfs.len(),
            });
        }
        let fis = Fis {
            n_inputs: doc.n_inputs,
            tnorm: doc.tnorm,
            input_mfs: doc.input_mfs,
            rules: doc.rules,
            consequents: doc.consequents,
        };
        fis.validate()?;
        Ok(fis)
    }
}

/// Reusable per-sample buffers for the forward pass.
#[derive(Debug, Default)]
pub(crate) struct Scratch<T> {
    pub mu: Vec<Vec<T>>,
    pub firing: Vec<T>,
}

impl<T: Scalar> Fis<T> {
    pub fn new(
        input_mfs: Vec<Vec<MembershipFunction<T>>>,
        rules: Vec<Vec<usize>>,
        consequents: Vec<RuleConsequent<T>>,
    ) -> Result<Self> {
        Self::try_from(FisDocument {
            n_inputs: input_mfs.len(),
            tnorm: TNorm::Product,
            input_mfs,
            rules,
            consequents,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidFis(msg));
        if self.n_inputs == 0 {
            return invalid("no inputs".into());
        }
        for (i, mfs) in self.input_mfs.iter().enumerate() {
            if mfs.is_empty() {
                return invalid(format!("input {i} has no membership functions"));
            }
            for mf in mfs {
                mf.validate()?;
            }
        }
        if self.rules.is_empty() {
            return invalid("no rules".into());
        }
        if self.rules.len() != self.consequents.len() {
            return invalid(format!(
                "{} rules but {} consequents",
                self.rules.len(),
                self.consequents.len()
            ));
        }
        let mut seen = HashSet::with_capacity(self.rules.len());
        for (r, antecedent) in self.rules.iter().enumerate() {
            if antecedent.len() != self.n_inputs {
                return invalid(format!("rule {r} has {} antecedents", antecedent.len()));
            }
            for (i, &m) in antecedent.iter().enumerate() {
                if m >= self.input_mfs[i].len() {
                    return invalid(format!("rule {r} references missing MF {m} on input {i}"));
                }
            }
            if !seen.insert(antecedent.as_slice()) {
                return invalid(format!("rule {r} duplicates antecedent {antecedent:?}"));
            }
        }
        for (r, q) in self.consequents.iter().enumerate() {
            if q.coefficients.len() != self.n_inputs {
                return invalid(format!("consequent {r} has {} coefficients", q.coefficients.len()));
            }
            if !q.constant.is_finite() || q.coefficients.iter().any(|v| !v.is_finite()) {
                return invalid(format!("consequent {r} is not finite"));
            }
        }
        Ok(())
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }

    pub fn input_mfs(&self) -> &[Vec<MembershipFunction<T>>] {
        &self.input_mfs
    }

    pub fn rules(&self) -> &[Vec<usize>] {
        &self.rules
    }

    pub fn consequents(&self) -> &[RuleConsequent<T>] {
        &self.consequents
    }

    /// Replaces all consequents, keeping premises and rules.
    pub fn with_consequents(&self, consequents: Vec<RuleConsequent<T>>) -> Result<Self> {
        let mut out = self.clone();
        out.consequents = consequents;
        out.validate()?;
        Ok(out)
    }

    /// Number of premise parameters over all inputs and MFs.
    pub fn premise_len(&self) -> usize {
        self.input_mfs.iter().flatten().map(MembershipFunction::param_count).sum()
    }

    pub fn consequent_len(&self) -> usize {
        self.rules.len() * (self.n_inputs + 1)
    }

    /// Premise parameters, input-major then MF-major.
    pub fn premise_params(&self) -> Vec<T> {
        self.input_mfs.iter().flatten().flat_map(MembershipFunction::params).collect()
    }

    pub(crate) fn set_premise_params(&mut self, values: &[T]) {
        let mut at = 0;
        for mf in self.input_mfs.iter_mut().flatten() {
            at += mf.assign_params(&values[at..]);
        }
        debug_assert_eq!(at, values.len());
    }

    /// Consequent parameters, rule-major: coefficients then constant.
    pub fn consequent_params(&self) -> Vec<T> {
        self.consequents
            .iter()
            .flat_map(|q| q.coefficients.iter().copied().chain(std::iter::once(q.constant)))
            .collect()
    }

    pub(crate) fn set_consequent_params(&mut self, values: &[T]) {
        let width = self.n_inputs + 1;
        for (q, chunk) in self.consequents.iter_mut().zip(values.chunks_exact(width)) {
            q.coefficients.copy_from_slice(&chunk[..self.n_inputs]);
            q.constant = chunk[self.n_inputs];
        }
    }

    fn check_input(&self, x: &[T]) -> Result<()> {
        if x.len() != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                found: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("input {x:?}")));
        }
        Ok(())
    }

    pub(crate) fn scratch(&self) -> Scratch<T> {
        Scratch {
            mu: self.input_mfs.iter().map(|m| vec![T::zero(); m.len()]).collect(),
            firing: vec![T::zero(); self.rules.len()],
        }
    }

    /// Layers 1–2 into `s`.
    pub(crate) fn fire_into(&self, x: &[T], s: &mut Scratch<T>) {
        for ((mus, mfs), &xi) in s.mu.iter_mut().zip(&self.input_mfs).zip(x) {
            for (mu, mf) in mus.iter_mut().zip(mfs) {
                *mu = mf.degree(xi);
            }
        }
        for (w, antecedent) in s.firing.iter_mut().zip(&self.rules) {
            *w = antecedent
                .iter()
                .zip(&s.mu)
                .fold(T::one(), |acc, (&m, mus)| acc * mus[m]);
        }
    }

    /// Layers 3–5 given the firing strengths in `s`.
    pub(crate) fn output_from(&self, x: &[T], s: &Scratch<T>) -> T {
        let total: T = s.firing.iter().copied().sum();
        if total > T::lit(ZERO_FIRING_EPS) {
            s.firing
                .iter()
                .zip(&self.consequents)
                .fold(T::zero(), |acc, (&w, q)| acc + w * q.eval(x))
                / total
        } else {
            let m = T::from_usize(self.rules.len()).unwrap();
            self.consequents.iter().map(|q| q.eval(x)).sum::<T>() / m
        }
    }

    #[inline]
    pub(crate) fn predict_with(&self, x: &[T], s: &mut Scratch<T>) -> T {
        self.fire_into(x, s);
        self.output_from(x, s)
    }

    /// Membership degrees per input and MF (layer 1).
    pub fn memberships(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        self.check_input(x)?;
        let mut s = self.scratch();
        self.fire_into(x, &mut s);
        Ok(s.mu)
    }

    /// Rule firing strengths (layer 2).
    pub fn firing_strengths(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_input(x)?;
        let mut s = self.scratch();
        self.fire_into(x, &mut s);
        Ok(s.firing)
    }

    /// Per-rule consequent values at `x` (the un-weighted layer-4 inputs).
    pub fn rule_outputs(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_input(x)?;
        Ok(self.consequents.iter().map(|q| q.eval(x)).collect())
    }

    /// Crisp system output (layers 1–5).
    pub fn predict(&self, x: &[T]) -> Result<T> {
        self.check_input(x)?;
        Ok(self.predict_with(x, &mut self.scratch()))
    }

    pub fn predict_dataset(&self, d: &Dataset<T>) -> Result<Vec<T>> {
        self.check_dataset(d)?;
        let mut s = self.scratch();
        Ok(d.rows().map(|x| self.predict_with(x, &mut s)).collect())
    }

    fn check_dataset(&self, d: &Dataset<T>) -> Result<()> {
        if d.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if d.n_features() != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                found: d.n_features(),
            });
        }
        Ok(())
    }

    /// Sum of squared residuals over `d`.
    pub fn sse(&self, d: &Dataset<T>) -> Result<T> {
        self.check_dataset(d)?;
        let mut s = self.scratch();
        Ok(d.rows()
            .zip(d.targets())
            .map(|(x, &y)| {
                let e = self.predict_with(x, &mut s) - y;
                e * e
            })
            .sum())
    }

    pub fn mse(&self, d: &Dataset<T>) -> Result<T> {
        Ok(self.sse(d)? / T::from_usize(d.len()).unwrap())
    }

    pub fn rmse(&self, d: &Dataset<T>) -> Result<T> {
        Ok(self.mse(d)?.sqrt())
    }

    /// Pretty JSON with stable field order.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Divides firing strengths by their sum (layer 3). Falls back to the
/// uniform vector when the sum is at most [`ZERO_FIRING_EPS`].
pub fn normalize_weights<T: Scalar>(weights: &[T]) -> Result<Vec<T>> {
    if weights.is_empty() {
        return Err(Error::OutOfRange("cannot normalize an empty weight vector".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= T::zero()) || !w.is_finite()) {
        return Err(Error::OutOfRange(format!("firing strength {w} is not a finite non-negative value")));
    }
    let total: T = weights.iter().copied().sum();
    if total > T::lit(ZERO_FIRING_EPS) {
        Ok(weights.iter().map(|&w| w / total).collect())
    } else {
        let u = T::one() / T::from_usize(weights.len()).unwrap();
        Ok(vec![u; weights.len()])
    }
}
