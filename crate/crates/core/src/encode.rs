//! Flat parameter vectors for swarm tuning of a fixed-structure FIS.
//!
//! Layout: every premise parameter input-major then MF-major (bell
//! `a, b, c`; gaussian `sigma, c`), followed by every consequent rule-major
//! (`p_1 .. p_n, r`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fis::{Fis, PremiseParam};
use crate::pso::Bounds;
use crate::scalar::Scalar;

pub const CENTER_BOUNDS: (f64, f64) = (-0.25, 1.25);
pub const WIDTH_BOUNDS: (f64, f64) = (1e-3, 2.0);
pub const BELL_SLOPE_BOUNDS: (f64, f64) = (0.5, 5.0);
pub const CONSEQUENT_BOUNDS: (f64, f64) = (-10.0, 10.0);

/// What one entry of a [`ParamVector`] controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "segment", rename_all = "lowercase")]
pub enum ParamSlot {
    Premise { input: usize, mf: usize, param: PremiseParam },
    /// `index == n_inputs` addresses the constant term.
    Consequent { rule: usize, index: usize },
}

impl ParamSlot {
    pub fn range(self) -> (f64, f64) {
        match self {
            ParamSlot::Premise { param, .. } => match param {
                PremiseParam::C => CENTER_BOUNDS,
                PremiseParam::A | PremiseParam::Sigma => WIDTH_BOUNDS,
                PremiseParam::B => BELL_SLOPE_BOUNDS,
            },
            ParamSlot::Consequent { .. } => CONSEQUENT_BOUNDS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ParamVector<T> {
    pub values: Vec<T>,
    pub layout: Vec<ParamSlot>,
    pub bounds: Bounds<T>,
}

impl<T: Scalar> ParamVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Decoded system and how many entries had to be clipped into bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded<T> {
    pub fis: Fis<T>,
    pub clipped: usize,
}

pub fn layout<T: Scalar>(fis: &Fis<T>) -> Vec<ParamSlot> {
    let mut slots = Vec::with_capacity(fis.premise_len() + fis.consequent_len());
    for (input, mfs) in fis.input_mfs().iter().enumerate() {
        for (mf, f) in mfs.iter().enumerate() {
            slots.extend(f.param_names().iter().map(|&param| ParamSlot::Premise { input, mf, param }));
        }
    }
    for rule in 0..fis.n_rules() {
        slots.extend((0..=fis.n_inputs()).map(|index| ParamSlot::Consequent { rule, index }));
    }
    slots
}

/// Search box implied by a layout.
pub fn bounds_for<T: Scalar>(layout: &[ParamSlot]) -> Result<Bounds<T>> {
    let (lower, upper) = layout
        .iter()
        .map(|s| {
            let (lo, hi) = s.range();
            (T::lit(lo), T::lit(hi))
        })
        .unzip();
    Bounds::new(lower, upper)
}

pub fn encode_fis<T: Scalar>(fis: &Fis<T>) -> ParamVector<T> {
    let layout = layout(fis);
    let mut values = fis.premise_params();
    values.extend(fis.consequent_params());
    let bounds = bounds_for(&layout).expect("static parameter ranges are well-formed");
    ParamVector { values, layout, bounds }
}

/// Writes `values` into a copy of `template`, clipping out-of-range
/// entries to the encoding bounds.
pub fn decode_fis<T: Scalar>(template: &Fis<T>, values: &[T]) -> Result<Decoded<T>> {
    let p = template.premise_len();
    let expected = p + template.consequent_len();
    if values.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: values.len(),
        });
    }
    let mut v = values.to_vec();
    let mut clipped = 0;
    for (x, slot) in v.iter_mut().zip(layout(template)) {
        let (lo, hi) = slot.range();
        let (lo, hi) = (T::lit(lo), T::lit(hi));
        let c = if x.is_nan() { lo } else { x.max(lo).min(hi) };
        if c != *x {
            *x = c;
            clipped += 1;
        }
    }
    let mut fis = template.clone();
    fis.set_premise_params(&v[..p]);
    fis.set_consequent_params(&v[p..]);
    Ok(Decoded { fis, clipped })
}
