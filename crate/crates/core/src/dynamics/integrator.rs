//! Fixed-step RK4 with step grids aligned to the generator's time breakpoints.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DynamicsError, HamiltonianSystem, Side};
use crate::geometry::Point2;
use crate::scalar::Scalar;

pub const DEFAULT_STEPS: usize = 4096;
pub const MIN_STEPS: usize = 100;

/// Sampled trajectory of one point over `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub id: usize,
    pub times: Vec<S>,
    pub positions: Vec<Point2<S>>,
    /// Distance between the first and last samples.
    pub closure_defect: S,
}

impl<S: Scalar> Trajectory<S> {
    pub fn start(&self) -> Point2<S> {
        self.positions[0]
    }

    pub fn end(&self) -> Point2<S> {
        self.positions[self.positions.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Largest distance from the starting point.
    pub fn max_displacement(&self) -> S {
        let s = self.start();
        self.positions.iter().map(|&p| p.distance(s)).fold(S::zero(), S::max)
    }
}

/// Splits `[t0, t1]` at breakpoints and distributes `steps` proportionally.
/// Returns `(piece start, piece end, steps in piece)`.
pub fn time_grid<S: Scalar>(system: &HamiltonianSystem<S>, t0: S, t1: S, steps: usize) -> Vec<(S, S, usize)> {
    let mut cuts = vec![t0];
    cuts.extend(system.breakpoints().into_iter().filter(|&b| b > t0 && b < t1));
    cuts.push(t1);
    let span = t1 - t0;
    cuts.windows(2)
        .map(|w| {
            let n = (S::lit(steps as f64) * (w[1] - w[0]) / span).round().to_usize().unwrap_or(1).max(1);
            (w[0], w[1], n)
        })
        .collect()
}

#[inline]
fn rk4_step<S: Scalar>(system: &HamiltonianSystem<S>, t: S, h: S, x: Point2<S>) -> Point2<S> {
    let half = h * S::lit(0.5);
    let tm = t + half;
    let k1 = system.field_at(t, Side::Right, x);
    let k2 = system.field_at(tm, Side::Right, x + k1 * half);
    let k3 = system.field_at(tm, Side::Right, x + k2 * half);
    let k4 = system.field_at(t + h, Side::Left, x + k3 * h);
    x + (k1 + k2 * S::lit(2.0) + k3 * S::lit(2.0) + k4) * (h / S::lit(6.0))
}

fn check_steps(steps: usize) -> Result<(), DynamicsError> {
    if steps < MIN_STEPS {
        Err(DynamicsError::TooFewSteps { min: MIN_STEPS, got: steps })
    } else {
        Ok(())
    }
}

fn integrate_between<S: Scalar>(
    system: &HamiltonianSystem<S>,
    id: usize,
    x0: Point2<S>,
    t0: S,
    t1: S,
    steps: usize,
    mut record: impl FnMut(S, Point2<S>),
) -> Result<Point2<S>, DynamicsError> {
    let mut x = x0;
    record(t0, x);
    for (a, b, n) in time_grid(system, t0, t1, steps) {
        let h = (b - a) / S::lit(n as f64);
        for k in 0..n {
            let t = a + h * S::lit(k as f64);
            x = rk4_step(system, t, h, x);
            let t_next = if k + 1 == n { b } else { a + h * S::lit((k + 1) as f64) };
            if !x.is_finite() {
                return Err(DynamicsError::NonFinite { point: id, time: t_next.as_f64() });
            }
            record(t_next, x);
        }
    }
    Ok(x)
}

pub fn integrate_point<S: Scalar>(
    system: &HamiltonianSystem<S>,
    id: usize,
    x0: Point2<S>,
    steps: usize,
) -> Result<Trajectory<S>, DynamicsError> {
    check_steps(steps)?;
    if !x0.is_finite() {
        return Err(DynamicsError::NonFinite { point: id, time: 0.0 });
    }
    let mut times = Vec::with_capacity(steps + 2);
    let mut positions = Vec::with_capacity(steps + 2);
    integrate_between(system, id, x0, S::zero(), S::one(), steps, |t, x| {
        times.push(t);
        positions.push(x);
    })?;
    let closure_defect = positions[0].distance(positions[positions.len() - 1]);
    Ok(Trajectory { id, times, positions, closure_defect })
}

/// Trajectories of all `points` (ids are indices). Points are integrated in
/// parallel; the result does not depend on scheduling.
pub fn integrate_flow<S: Scalar>(
    system: &HamiltonianSystem<S>,
    points: &[Point2<S>],
    steps: usize,
) -> Result<Vec<Trajectory<S>>, DynamicsError> {
    check_steps(steps)?;
    points.par_iter().enumerate().map(|(id, &x)| integrate_point(system, id, x, steps)).collect()
}

/// Flow from `t0` to `t1` of a single point.
pub fn flow_between<S: Scalar>(
    system: &HamiltonianSystem<S>,
    x: Point2<S>,
    t0: S,
    t1: S,
    steps: usize,
) -> Result<Point2<S>, DynamicsError> {
    check_steps(steps)?;
    if !(t0 >= S::zero() && t1 <= S::one() && t0 <= t1) {
        return Err(DynamicsError::TimeOutOfRange(if t0 < S::zero() { t0 } else { t1 }.as_f64()));
    }
    if !x.is_finite() {
        return Err(DynamicsError::NonFinitePoint(x.x.as_f64(), x.y.as_f64()));
    }
    integrate_between(system, 0, x, t0, t1, steps, |_, _| {})
}

pub fn time_one_map<S: Scalar>(
    system: &HamiltonianSystem<S>,
    x: Point2<S>,
    steps: usize,
) -> Result<Point2<S>, DynamicsError> {
    flow_between(system, x, S::zero(), S::one(), steps)
}
