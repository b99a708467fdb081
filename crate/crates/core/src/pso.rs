//! Global-best particle swarm with a linearly decreasing inertia weight.
//!
//! Per particle and dimension each step applies
//!
//! ```text
//! v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)
//! x <- x + v
//! ```
//!
//! with fresh `r1, r2 ~ U[0, 1)`, the velocity clamped to
//! `±v_max_fraction * (upper - lower)` and the position clipped to the box
//! (zeroing the velocity on clipped dimensions).
//!
//! Every random draw comes from a generator derived from
//! `(seed, iteration, particle)`, so sequential and parallel evaluation
//! produce the same trajectory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub w_start: f64,
    pub w_end: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_max_fraction: f64,
    pub seed: u64,
    /// Evaluate particles on the rayon pool.
    pub parallel: bool,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 25,
            iterations: 500,
            w_start: 0.9,
            w_end: 0.5,
            c1: 2.0,
            c2: 2.0,
            v_max_fraction: 0.1,
            seed: 0,
            parallel: false,
        }
    }
}

impl PsoConfig {
    /// Full check used by [`pso_optimize`]: also requires `iterations >= 1`
    /// and strictly positive acceleration constants.
    pub fn validate(&self) -> Result<()> {
        self.validate_dynamics()?;
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be >= 1".into()));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "c1 = {}, c2 = {} (both must be positive)",
                self.c1, self.c2
            )));
        }
        Ok(())
    }

    /// Check used by the single-step API, which also admits `c = 0`.
    pub fn validate_dynamics(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.swarm_size < 2 {
            return bad(format!("swarm_size = {} (need >= 2)", self.swarm_size));
        }
        if !(0.0..=1.2).contains(&self.w_end) || !(0.0..=1.2).contains(&self.w_start) || self.w_start < self.w_end {
            return bad(format!(
                "inertia schedule {} -> {} must satisfy 1.2 >= w_start >= w_end >= 0",
                self.w_start, self.w_end
            ));
        }
        if !(self.c1 >= 0.0 && self.c1.is_finite() && self.c2 >= 0.0 && self.c2.is_finite()) {
            return bad(format!("c1 = {}, c2 = {}", self.c1, self.c2));
        }
        if !(self.v_max_fraction > 0.0 && self.v_max_fraction <= 1.0) {
            return bad(format!("v_max_fraction = {} (need 0 < f <= 1)", self.v_max_fraction));
        }
        Ok(())
    }

    /// Inertia for the step that follows `completed` finished steps.
    pub fn inertia(&self, completed: usize) -> f64 {
        if self.iterations <= 1 {
            return self.w_start;
        }
        let t = completed.min(self.iterations - 1) as f64 / (self.iterations - 1) as f64;
        self.w_start + (self.w_end - self.w_start) * t
    }
}

/// Axis-aligned search box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Bounds<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidConfig("bounds have no dimensions".into()));
        }
        for (d, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidConfig(format!("dimension {d}: need lower < upper, got [{lo}, {hi}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval on every dimension.
    pub fn uniform(dims: usize, lower: T, upper: T) -> Result<Self> {
        Self::new(vec![lower; dims], vec![upper; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dims() && x.iter().zip(&self.lower).zip(&self.upper).all(|((&v, &lo), &hi)| v >= lo && v <= hi)
    }

    /// Clips `x` into the box in place; returns how many entries moved.
    pub fn clip(&self, x: &mut [T]) -> usize {
        let mut moved = 0;
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            let c = v.max(lo).min(hi);
            // NaN compares unequal and is sent to the lower bound
            let c = if c.is_nan() { lo } else { c };
            if c != *v {
                *v = c;
                moved += 1;
            }
        }
        moved
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SwarmState<T> {
    pub positions: Vec<Vec<T>>,
    pub velocities: Vec<Vec<T>>,
    pub pbest_positions: Vec<Vec<T>>,
    pub pbest_values: Vec<T>,
    pub gbest_position: Vec<T>,
    pub gbest_value: T,
    /// Completed steps.
    pub iteration: usize,
    /// Global-best value after initialization and after every step.
    pub history: Vec<T>,
}

impl<T: Scalar> SwarmState<T> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    fn refresh_gbest(&mut self) {
        for (i, &v) in self.pbest_values.iter().enumerate() {
            if v < self.gbest_value {
                self.gbest_value = v;
                self.gbest_position.clone_from(&self.pbest_positions[i]);
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one particle at one iteration (iteration 0 is init).
fn particle_rng(seed: u64, iteration: usize, particle: usize) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(iteration as u64 ^ splitmix64(particle as u64).rotate_left(17)));
    ChaCha8Rng::seed_from_u64(key)
}

fn finite_or_inf<T: Scalar>(v: T) -> T {
    if v.is_finite() {
        v
    } else {
        T::infinity()
    }
}

fn map_particles<T, R, F>(n: usize, parallel: bool, f: F) -> Vec<R>
where
    T: Scalar,
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Random initial swarm; see [`pso_init_seeded`].
pub fn pso_init<T, F>(objective: &F, bounds: &Bounds<T>, cfg: &PsoConfig) -> Result<SwarmState<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    pso_init_seeded(objective, bounds, cfg, &[])
}

/// Initial swarm whose first particles sit at `seeded` (clipped into the
/// box) and the rest uniformly at random. Velocities start at zero.
pub fn pso_init_seeded<T, F>(
    objective: &F,
    bounds: &Bounds<T>,
    cfg: &PsoConfig,
    seeded: &[Vec<T>],
) -> Result<SwarmState<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    cfg.validate_dynamics()?;
    if seeded.len() > cfg.swarm_size {
        return Err(Error::InvalidConfig(format!(
            "{} seeded particles exceed swarm size {}",
            seeded.len(),
            cfg.swarm_size
        )));
    }
    if let Some(p) = seeded.iter().find(|p| p.len() != bounds.dims()) {
        return Err(Error::DimensionMismatch {
            expected: bounds.dims(),
            found: p.len(),
        });
    }
    let dims = bounds.dims();
    let evaluated = map_particles::<T, _, _>(cfg.swarm_size, cfg.parallel, |i| {
        let x = match seeded.get(i) {
            Some(p) => {
                let mut x = p.clone();
                bounds.clip(&mut x);
                x
            }
            None => {
                let mut rng = particle_rng(cfg.seed, 0, i);
                (0..dims)
                    .map(|d| {
                        let u = T::lit(rng.random::<f64>());
                        let (lo, hi) = (bounds.lower[d], bounds.upper[d]);
                        (lo + u * (hi - lo)).min(hi)
                    })
                    .collect::<Vec<T>>()
            }
        };
        let value = objective(&x);
        (x, value)
    });

    let mut positions = Vec::with_capacity(cfg.swarm_size);
    let mut values = Vec::with_capacity(cfg.swarm_size);
    for (x, value) in evaluated {
        if !value.is_finite() {
            return Err(Error::ObjectiveNonFinite {
                point: x.iter().map(|v| v.as_f64()).collect(),
            });
        }
        positions.push(x);
        values.push(value);
    }
    let mut state = SwarmState {
        velocities: vec![vec![T::zero(); dims]; cfg.swarm_size],
        pbest_positions: positions.clone(),
        pbest_values: values,
        gbest_position: positions[0].clone(),
        gbest_value: T::infinity(),
        positions,
        iteration: 0,
        history: Vec::new(),
    };
    state.refresh_gbest();
    state.history.push(state.gbest_value);
    Ok(state)
}

/// Advances the swarm by one iteration.
pub fn pso_step<T, F>(state: &mut SwarmState<T>, objective: &F, bounds: &Bounds<T>, cfg: &PsoConfig) -> Result<()>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    cfg.validate_dynamics()?;
    if state.len() != cfg.swarm_size {
        return Err(Error::DimensionMismatch {
            expected: cfg.swarm_size,
            found: state.len(),
        });
    }
    let w = T::lit(cfg.inertia(state.iteration));
    let (c1, c2) = (T::lit(cfg.c1), T::lit(cfg.c2));
    let step = state.iteration + 1;
    let frac = T::lit(cfg.v_max_fraction);
    let snapshot = &*state;

    let moved = map_particles::<T, _, _>(cfg.swarm_size, cfg.parallel, |i| {
        let mut rng = particle_rng(cfg.seed, step, i);
        let mut x = snapshot.positions[i].clone();
        let mut v = snapshot.velocities[i].clone();
        let pbest = &snapshot.pbest_positions[i];
        let gbest = &snapshot.gbest_position;
        for d in 0..x.len() {
            let r1 = T::lit(rng.random::<f64>());
            let r2 = T::lit(rng.random::<f64>());
            let (lo, hi) = (bounds.lower[d], bounds.upper[d]);
            let vmax = frac * (hi - lo);
            let vd = w * v[d] + c1 * r1 * (pbest[d] - x[d]) + c2 * r2 * (gbest[d] - x[d]);
            v[d] = vd.max(-vmax).min(vmax);
            let xd = x[d] + v[d];
            if xd < lo || xd > hi {
                x[d] = xd.max(lo).min(hi);
                v[d] = T::zero();
            } else {
                x[d] = xd;
            }
        }
        let value = finite_or_inf(objective(&x));
        (x, v, value)
    });

    for (i, (x, v, value)) in moved.into_iter().enumerate() {
        if value < state.pbest_values[i] {
            state.pbest_values[i] = value;
            state.pbest_positions[i].clone_from(&x);
        }
        state.positions[i] = x;
        state.velocities[i] = v;
    }
    state.refresh_gbest();
    state.iteration = step;
    state.history.push(state.gbest_value);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PsoOutcome<T> {
    pub best_position: Vec<T>,
    pub best_value: T,
    /// `iterations + 1` global-best values, initialization first.
    pub history: Vec<T>,
}

impl<T: Scalar> PsoOutcome<T> {
    /// Convergence curve as `iteration,gbest_value` rows.
    pub fn history_csv(&self) -> String {
        convergence_csv(&self.history)
    }
}

pub fn convergence_csv<T: Scalar>(history: &[T]) -> String {
    let mut out = String::from("iteration,gbest_value\n");
    for (i, v) in history.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

pub fn pso_optimize<T, F>(objective: &F, bounds: &Bounds<T>, cfg: &PsoConfig) -> Result<PsoOutcome<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    pso_optimize_seeded(objective, bounds, cfg, &[])
}

/// [`pso_optimize`] with some initial particles placed explicitly.
pub fn pso_optimize_seeded<T, F>(
    objective: &F,
    bounds: &Bounds<T>,
    cfg: &PsoConfig,
    seeded: &[Vec<T>],
) -> Result<PsoOutcome<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    cfg.validate()?;
    let mut state = pso_init_seeded(objective, bounds, cfg, seeded)?;
    for _ in 0..cfg.iterations {
        pso_step(&mut state, objective, bounds, cfg)?;
    }
    Ok(PsoOutcome {
        best_position: state.gbest_position,
        best_value: state.gbest_value,
        history: state.history,
    })
}
