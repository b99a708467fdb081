//! ANFIS hybrid learning: least squares on the consequents, gradient
//! descent on the premise parameters.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fis::{Fis, ZERO_FIRING_EPS};
use crate::linalg::ridge_least_squares;
use crate::scalar::Scalar;

/// Lower bound enforced on bell `a`, `b` and gaussian `sigma` after every
/// premise update.
pub const MIN_SHAPE_PARAM: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub ridge_lambda: f64,
    /// Also evaluate the test split each epoch.
    pub record_history: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            learning_rate: 0.01,
            ridge_lambda: 1e-8,
            record_history: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::InvalidConfig(format!("learning_rate = {}", self.learning_rate)));
        }
        if !(self.ridge_lambda.is_finite() && self.ridge_lambda >= 0.0) {
            return Err(Error::InvalidConfig(format!("ridge_lambda = {}", self.ridge_lambda)));
        }
        Ok(())
    }
}

/// Per-epoch RMSE of the model evaluated in that epoch (after its
/// least-squares pass, before its premise step).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TrainHistory<T> {
    pub train_rmse: Vec<T>,
    pub test_rmse: Option<Vec<T>>,
}

impl<T: Scalar> TrainHistory<T> {
    pub fn len(&self) -> usize {
        self.train_rmse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.train_rmse.is_empty()
    }

    /// `epoch,train_rmse,test_rmse` with 1-based epochs; the test column is
    /// empty when it was not recorded.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_rmse,test_rmse\n");
        for (e, tr) in self.train_rmse.iter().enumerate() {
            let te = self
                .test_rmse
                .as_ref()
                .and_then(|t| t.get(e))
                .map(|v| v.to_string())
                .unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", e + 1, tr, te));
        }
        out
    }
}

fn check_dims<T: Scalar>(fis: &Fis<T>, d: &Dataset<T>) -> Result<()> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if d.n_features() != fis.n_inputs() {
        return Err(Error::DimensionMismatch {
            expected: fis.n_inputs(),
            found: d.n_features(),
        });
    }
    Ok(())
}

/// Normalized firing strengths into `out`, uniform on zero firing.
fn normalized_into<T: Scalar>(firing: &[T], out: &mut [T]) -> (T, bool) {
    let total: T = firing.iter().copied().sum();
    if total > T::lit(ZERO_FIRING_EPS) {
        for (o, &w) in out.iter_mut().zip(firing) {
            *o = w / total;
        }
        (total, true)
    } else {
        let u = T::one() / T::from_usize(firing.len()).unwrap();
        out.fill(u);
        (total, false)
    }
}

/// Row-major least-squares design matrix over the consequent parameters:
/// for rule `r`, `wbar_r * x_1, ..., wbar_r * x_n, wbar_r`.
pub fn consequent_design<T: Scalar>(fis: &Fis<T>, d: &Dataset<T>) -> Result<Vec<T>> {
    check_dims(fis, d)?;
    let width = fis.consequent_len();
    let mut a = Vec::with_capacity(d.len() * width);
    let mut s = fis.scratch();
    let mut wbar = vec![T::zero(); fis.n_rules()];
    for x in d.rows() {
        fis.fire_into(x, &mut s);
        normalized_into(&s.firing, &mut wbar);
        for &w in &wbar {
            a.extend(x.iter().map(|&xi| w * xi));
            a.push(w);
        }
    }
    debug_assert_eq!(a.len(), d.len() * width);
    Ok(a)
}

/// Refits every consequent by (ridge) least squares with the premise
/// parameters frozen.
pub fn lse_consequents<T: Scalar>(fis: &Fis<T>, train: &Dataset<T>, ridge_lambda: T) -> Result<Fis<T>> {
    check_dims(fis, train)?;
    if !(ridge_lambda >= T::zero()) || !ridge_lambda.is_finite() {
        return Err(Error::InvalidConfig(format!("ridge_lambda = {ridge_lambda}")));
    }
    let a = consequent_design(fis, train)?;
    let theta = ridge_least_squares(&a, train.len(), fis.consequent_len(), train.targets(), ridge_lambda)?;
    let mut out = fis.clone();
    out.set_consequent_params(&theta);
    Ok(out)
}

/// Analytic gradient of the training MSE with respect to every premise
/// parameter, in [`Fis::premise_params`] order.
pub fn premise_gradients<T: Scalar>(fis: &Fis<T>, train: &Dataset<T>) -> Result<Vec<T>> {
    check_dims(fis, train)?;
    let n = fis.n_inputs();
    let n_rules = fis.n_rules();

    // offset of each (input, mf) block in the flat premise vector
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut at = 0;
    for mfs in fis.input_mfs() {
        offsets.push(
            mfs.iter()
                .map(|mf| {
                    let o = at;
                    at += mf.param_count();
                    o
                })
                .collect(),
        );
    }
    let mut grad = vec![T::zero(); at];

    let mut mu: Vec<Vec<T>> = fis.input_mfs().iter().map(|m| vec![T::zero(); m.len()]).collect();
    let mut dmu: Vec<Vec<[T; 3]>> = fis.input_mfs().iter().map(|m| vec![[T::zero(); 3]; m.len()]).collect();
    let mut firing = vec![T::zero(); n_rules];
    let mut outputs = vec![T::zero(); n_rules];
    let mut g_mu: Vec<Vec<T>> = mu.clone();
    let mut prefix = vec![T::one(); n + 1];
    let scale = T::lit(2.0) / T::from_usize(train.len()).unwrap();

    for (x, &y) in train.rows().zip(train.targets()) {
        for (i, mfs) in fis.input_mfs().iter().enumerate() {
            for (m, mf) in mfs.iter().enumerate() {
                let (deg, partials) = mf.degree_and_partials(x[i]);
                mu[i][m] = deg;
                dmu[i][m] = partials;
            }
        }
        for (r, antecedent) in fis.rules().iter().enumerate() {
            firing[r] = antecedent.iter().enumerate().fold(T::one(), |acc, (i, &m)| acc * mu[i][m]);
            outputs[r] = fis.consequents()[r].eval(x);
        }
        let total: T = firing.iter().copied().sum();
        if !(total > T::lit(ZERO_FIRING_EPS)) {
            // uniform fallback: output does not depend on the premises here
            continue;
        }
        let yhat = firing.iter().zip(&outputs).map(|(&w, &f)| w * f).sum::<T>() / total;
        let err = yhat - y;
        if err == T::zero() {
            continue;
        }

        for row in g_mu.iter_mut() {
            row.fill(T::zero());
        }
        for (r, antecedent) in fis.rules().iter().enumerate() {
            let dy_dw = (outputs[r] - yhat) / total;
            if dy_dw == T::zero() {
                continue;
            }
            // product of the other antecedent degrees without dividing by mu
            for (i, &m) in antecedent.iter().enumerate() {
                prefix[i + 1] = prefix[i] * mu[i][m];
            }
            let mut suffix = T::one();
            for i in (0..n).rev() {
                let m = antecedent[i];
                g_mu[i][m] += dy_dw * prefix[i] * suffix;
                suffix *= mu[i][m];
            }
        }
        let coeff = scale * err;
        for i in 0..n {
            for (m, mf) in fis.input_mfs()[i].iter().enumerate() {
                let g = g_mu[i][m];
                if g == T::zero() {
                    continue;
                }
                let base = offsets[i][m];
                for k in 0..mf.param_count() {
                    grad[base + k] += coeff * g * dmu[i][m][k];
                }
            }
        }
    }
    Ok(grad)
}

/// One premise descent step with projection of shape parameters onto
/// `>= MIN_SHAPE_PARAM`.
fn premise_step<T: Scalar>(fis: &mut Fis<T>, grad: &[T], learning_rate: T) {
    let mut params = fis.premise_params();
    let floor = T::lit(MIN_SHAPE_PARAM);
    let is_shape: Vec<bool> = fis
        .input_mfs()
        .iter()
        .flatten()
        .flat_map(|mf| mf.param_names().iter().map(|p| p.is_shape()))
        .collect();
    for ((p, &g), &shape) in params.iter_mut().zip(grad).zip(&is_shape) {
        *p -= learning_rate * g;
        if shape && !(*p >= floor) {
            *p = floor;
        }
    }
    fis.set_premise_params(&params);
}

/// Hybrid ANFIS training. Each epoch refits the consequents by least
/// squares, records the train (and optionally test) RMSE of that model,
/// then takes one projected gradient step on the premises. Returns the
/// recorded model with the lowest train RMSE.
pub fn train_anfis<T: Scalar>(
    fis: &Fis<T>,
    train: &Dataset<T>,
    test: Option<&Dataset<T>>,
    cfg: &TrainConfig,
) -> Result<(Fis<T>, TrainHistory<T>)> {
    cfg.validate()?;
    check_dims(fis, train)?;
    if let Some(t) = test {
        check_dims(fis, t)?;
    }
    let lambda = T::lit(cfg.ridge_lambda);
    let lr = T::lit(cfg.learning_rate);
    let mut history = TrainHistory {
        train_rmse: Vec::with_capacity(cfg.epochs),
        test_rmse: (cfg.record_history && test.is_some()).then(|| Vec::with_capacity(cfg.epochs)),
    };

    let mut current = fis.clone();
    let mut best: Option<(T, Fis<T>)> = None;
    for _ in 0..cfg.epochs {
        current = lse_consequents(&current, train, lambda)?;
        let train_rmse = current.rmse(train)?;
        history.train_rmse.push(train_rmse);
        if let (Some(h), Some(t)) = (history.test_rmse.as_mut(), test) {
            h.push(current.rmse(t)?);
        }
        if best.as_ref().is_none_or(|(b, _)| train_rmse < *b) {
            best = Some((train_rmse, current.clone()));
        }
        if lr > T::zero() {
            let grad = premise_gradients(&current, train)?;
            premise_step(&mut current, &grad, lr);
        }
    }
    let (_, model) = best.expect("epochs >= 1");
    Ok((model, history))
}
