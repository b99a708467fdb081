//! Initial-FIS construction: grid partition or subtractive clustering.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fis::{Fis, MembershipFunction, RuleConsequent};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMethod {
    Grid,
    #[default]
    Clustering,
}

impl std::str::FromStr for GenMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grid" => Ok(GenMethod::Grid),
            "clustering" => Ok(GenMethod::Clustering),
            other => Err(Error::InvalidConfig(format!(
                "generation method {other:?} (expected grid or clustering)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub method: GenMethod,
    pub mfs_per_input: usize,
    /// Cluster influence radius in normalized units.
    pub radius: f64,
    pub accept_ratio: f64,
    pub reject_ratio: f64,
    pub rule_cap: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            method: GenMethod::Clustering,
            mfs_per_input: 2,
            radius: 0.5,
            accept_ratio: 0.5,
            reject_ratio: 0.15,
            rule_cap: 256,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.mfs_per_input < 2 {
            return bad(format!("mfs_per_input = {} (need >= 2)", self.mfs_per_input));
        }
        if !(self.radius > 0.0 && self.radius <= 1.0) {
            return bad(format!("radius = {} (need 0 < radius <= 1)", self.radius));
        }
        if !(self.reject_ratio >= 0.0 && self.reject_ratio < self.accept_ratio && self.accept_ratio <= 1.0) {
            return bad(format!(
                "need 0 <= reject_ratio < accept_ratio <= 1, got reject {} accept {}",
                self.reject_ratio, self.accept_ratio
            ));
        }
        if self.rule_cap == 0 {
            return bad("rule_cap = 0".into());
        }
        Ok(())
    }
}

/// Builds an initial FIS with the configured method.
pub fn generate<T: Scalar>(d: &Dataset<T>, cfg: &GenConfig) -> Result<Fis<T>> {
    match cfg.method {
        GenMethod::Grid => grid_partition(d, cfg),
        GenMethod::Clustering => {
            let centers = subtractive_clustering(d, cfg)?;
            fis_from_clusters(d, &centers, cfg)
        }
    }
}

/// Evenly spaced bell MFs on `[0, 1]` per input and the full Cartesian
/// rule base, with zero consequents.
pub fn grid_partition<T: Scalar>(d: &Dataset<T>, cfg: &GenConfig) -> Result<Fis<T>> {
    cfg.validate()?;
    let n = d.n_features();
    if n == 0 {
        return Err(Error::InvalidConfig("dataset has no features".into()));
    }
    let m = cfg.mfs_per_input;
    let rules = u32::try_from(n)
        .ok()
        .and_then(|e| m.checked_pow(e))
        .filter(|&r| r <= cfg.rule_cap)
        .ok_or(Error::RuleCap {
            rules: m.saturating_pow(n as u32),
            cap: cfg.rule_cap,
        })?;

    let spacing = 1.0 / (m - 1) as f64;
    let mfs: Vec<MembershipFunction<T>> = (0..m)
        .map(|k| MembershipFunction::Bell {
            a: T::lit(spacing / 2.0),
            b: T::lit(2.0),
            c: if k == m - 1 { T::one() } else { T::lit(k as f64 * spacing) },
        })
        .collect();

    let mut antecedents = Vec::with_capacity(rules);
    for mut code in 0..rules {
        let mut tuple = vec![0; n];
        for slot in tuple.iter_mut().rev() {
            *slot = code % m;
            code /= m;
        }
        antecedents.push(tuple);
    }
    Fis::new(vec![mfs; n], antecedents, vec![RuleConsequent::zero(n); rules])
}

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Index of the largest value; ties go to the lowest index.
fn argmax<T: Scalar>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, &p) in v.iter().enumerate().skip(1) {
        if p > v[best] {
            best = i;
        }
    }
    best
}

/// Density-potential clustering. Returns data points chosen as centers,
/// in selection order.
///
/// Each point starts with potential `sum_j exp(-4 |x_i - x_j|^2 / r^2)`.
/// After a center is chosen every potential is reduced by the center's
/// potential times `exp(-4 |x_i - c|^2 / (1.5 r)^2)`. A candidate above
/// `accept_ratio` of the first potential is accepted, one below
/// `reject_ratio` ends the search, and one in between is accepted only if
/// `d_min / r + P / P_first >= 1`; otherwise its potential is zeroed and
/// the next candidate is tried.
pub fn subtractive_clustering<T: Scalar>(d: &Dataset<T>, cfg: &GenConfig) -> Result<Vec<Vec<T>>> {
    cfg.validate()?;
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = d.len();
    let r = T::lit(cfg.radius);
    let alpha = T::lit(4.0) / (r * r);
    let rb = T::lit(1.5) * r;
    let beta = T::lit(4.0) / (rb * rb);

    let mut potential: Vec<T> = (0..n)
        .map(|i| {
            let xi = d.row(i);
            // fixed j order per sample keeps the sum reproducible
            (0..n).map(|j| (-alpha * sq_dist(xi, d.row(j))).exp()).sum()
        })
        .collect();

    let first = argmax(&potential);
    let first_potential = potential[first];
    let accept = T::lit(cfg.accept_ratio) * first_potential;
    let reject = T::lit(cfg.reject_ratio) * first_potential;

    let mut centers: Vec<usize> = Vec::new();
    let mut chosen = first;
    loop {
        let pc = potential[chosen];
        centers.push(chosen);
        let c = d.row(chosen).to_vec();
        for (i, p) in potential.iter_mut().enumerate() {
            *p -= pc * (-beta * sq_dist(d.row(i), &c)).exp();
        }
        potential[chosen] = T::zero();

        // look for the next acceptable candidate
        let next = loop {
            let k = argmax(&potential);
            let pk = potential[k];
            if pk <= T::zero() || pk < reject {
                break None;
            }
            if pk > accept {
                break Some(k);
            }
            let dmin = centers
                .iter()
                .map(|&ci| sq_dist(d.row(k), d.row(ci)).sqrt())
                .fold(T::infinity(), T::min);
            if dmin / r + pk / first_potential >= T::one() {
                break Some(k);
            }
            potential[k] = T::zero();
        };
        match next {
            Some(k) => chosen = k,
            None => break,
        }
    }
    Ok(centers.into_iter().map(|i| d.row(i).to_vec()).collect())
}

/// Gaussian width matching a cluster radius.
pub fn sigma_for_radius(radius: f64) -> f64 {
    radius / 8f64.sqrt()
}

/// One rule per center: gaussian MFs centered on the center's coordinates
/// with `sigma = radius / sqrt(8)`, zero coefficients and a constant equal
/// to the mean target of the samples nearest that center.
pub fn fis_from_clusters<T: Scalar>(d: &Dataset<T>, centers: &[Vec<T>], cfg: &GenConfig) -> Result<Fis<T>> {
    if centers.is_empty() {
        return Err(Error::InvalidConfig("no cluster centers".into()));
    }
    let n = d.n_features();
    if let Some(bad) = centers.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let k = centers.len();
    let sigma = T::lit(sigma_for_radius(cfg.radius));

    let mut sums = vec![T::zero(); k];
    let mut counts = vec![0usize; k];
    for (x, &y) in d.rows().zip(d.targets()) {
        let nearest = (0..k)
            .map(|r| sq_dist(x, &centers[r]))
            .enumerate()
            .fold((0, T::infinity()), |best, (r, dist)| if dist < best.1 { (r, dist) } else { best })
            .0;
        sums[nearest] += y;
        counts[nearest] += 1;
    }
    let global_mean = d.targets().iter().copied().sum::<T>() / T::from_usize(d.len()).unwrap();

    let input_mfs = (0..n)
        .map(|i| {
            centers
                .iter()
                .map(|c| MembershipFunction::gaussian(sigma, c[i]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rules = (0..k).map(|r| vec![r; n]).collect();
    let consequents = (0..k)
        .map(|r| {
            let mean = if counts[r] > 0 {
                sums[r] / T::from_usize(counts[r]).unwrap()
            } else {
                global_mean
            };
            RuleConsequent::constant(n, mean)
        })
        .collect();
    Fis::new(input_mfs, rules, consequents)
}
