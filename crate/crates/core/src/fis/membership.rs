use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parametric fuzzification curve.
///
/// Parameters are stored in the canonical order used by the parameter
/// encoding and the gradient: bell `(a, b, c)`, gaussian `(sigma, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum MembershipFunction<T> {
    /// `1 / (1 + |(x - c) / a|^(2b))`
    Bell { a: T, b: T, c: T },
    /// `exp(-(x - c)^2 / (2 sigma^2))`
    Gaussian { sigma: T, c: T },
}

/// Name of one premise parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PremiseParam {
    A,
    B,
    C,
    Sigma,
}

impl PremiseParam {
    /// Width-like parameters that must stay strictly positive.
    pub fn is_shape(self) -> bool {
        !matches!(self, PremiseParam::C)
    }
}

const BELL_PARAMS: [PremiseParam; 3] = [PremiseParam::A, PremiseParam::B, PremiseParam::C];
const GAUSSIAN_PARAMS: [PremiseParam; 2] = [PremiseParam::Sigma, PremiseParam::C];

impl<T: Scalar> MembershipFunction<T> {
    pub fn bell(a: T, b: T, c: T) -> Result<Self> {
        let mf = MembershipFunction::Bell { a, b, c };
        mf.validate()?;
        Ok(mf)
    }

    pub fn gaussian(sigma: T, c: T) -> Result<Self> {
        let mf = MembershipFunction::Gaussian { sigma, c };
        mf.validate()?;
        Ok(mf)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MembershipFunction::Bell { a, b, c } => a > T::zero() && b > T::zero() && a.is_finite() && b.is_finite() && c.is_finite(),
            MembershipFunction::Gaussian { sigma, c } => sigma > T::zero() && sigma.is_finite() && c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFis(format!("membership function parameters out of domain: {self:?}")))
        }
    }

    pub fn center(&self) -> T {
        match *self {
            MembershipFunction::Bell { c, .. } | MembershipFunction::Gaussian { c, .. } => c,
        }
    }

    /// Membership degree without input checks.
    #[inline]
    pub fn degree(&self, x: T) -> T {
        match *self {
            MembershipFunction::Bell { a, b, c } => {
                let t = (x - c) / a;
                T::one() / (T::one() + (t * t).powf(b))
            }
            MembershipFunction::Gaussian { sigma, c } => {
                let d = x - c;
                (-(d * d) / (T::lit(2.0) * sigma * sigma)).exp()
            }
        }
    }

    /// Membership degree in `[0, 1]`; rejects non-finite input.
    pub fn eval(&self, x: T) -> Result<T> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("membership input {x}")));
        }
        Ok(self.degree(x))
    }

    pub fn param_names(&self) -> &'static [PremiseParam] {
        match self {
            MembershipFunction::Bell { .. } => &BELL_PARAMS,
            MembershipFunction::Gaussian { .. } => &GAUSSIAN_PARAMS,
        }
    }

    pub fn param_count(&self) -> usize {
        self.param_names().len()
    }

    pub fn params(&self) -> Vec<T> {
        match *self {
            MembershipFunction::Bell { a, b, c } => vec![a, b, c],
            MembershipFunction::Gaussian { sigma, c } => vec![sigma, c],
        }
    }

    /// Overwrites parameters from `values` (canonical order); returns the
    /// number consumed. No validation.
    pub(crate) fn assign_params(&mut self, values: &[T]) -> usize {
        match self {
            MembershipFunction::Bell { a, b, c } => {
                (*a, *b, *c) = (values[0], values[1], values[2]);
                3
            }
            MembershipFunction::Gaussian { sigma, c } => {
                (*sigma, *c) = (values[0], values[1]);
                2
            }
        }
    }

    /// Degree and its partial derivatives in canonical parameter order.
    /// Unused trailing slots are zero.
    pub fn degree_and_partials(&self, x: T) -> (T, [T; 3]) {
        let zero = T::zero();
        match *self {
            MembershipFunction::Bell { a, b, c } => {
                let d = x - c;
                let t = d / a;
                let u = t * t;
                let g = u.powf(b);
                let mu = T::one() / (T::one() + g);
                if u == zero {
                    // flat top: all partials vanish for b > 1/2, and the
                    // b-partial vanishes in the limit for every b
                    return (mu, [zero, zero, zero]);
                }
                let two_b = T::lit(2.0) * b;
                let m1m = mu * (T::one() - mu);
                let da = two_b * m1m / a;
                let db = -m1m * u.ln();
                let dc = two_b * m1m / d;
                (mu, [da, db, dc])
            }
            MembershipFunction::Gaussian { sigma, c } => {
                let d = x - c;
                let s2 = sigma * sigma;
                let mu = (-(d * d) / (T::lit(2.0) * s2)).exp();
                let dsigma = mu * d * d / (s2 * sigma);
                let dc = mu * d / s2;
                (mu, [dsigma, dc, zero])
            }
        }
    }
}
