//! Time-dependent Hamiltonian systems on the plane and their flows.
//!
//! Conventions: `ω = dx ∧ dy` and `dF(·) = ω(X_F, ·)`, so
//! `X_F = (∂F/∂y, −∂F/∂x)`. A radial Hamiltonian with non-negative profile
//! therefore rotates counterclockwise.

mod classify;
mod fixed_points;
mod integrator;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::profiles::RadialHamiltonian;
use crate::scalar::Scalar;

pub use classify::{
    classify_fixed_sets, rotation_factors, ClassifyOptions, ComponentGeometry, ComponentKind, Domain,
    FixedSetComponent, RotationFactor,
};
pub use fixed_points::{find_fixed_points, jacobian, refine_fixed_point, FixedPointSearch, NewtonOptions, SeedRegion};
pub use integrator::{
    flow_between, integrate_flow, integrate_point, time_grid, time_one_map, Trajectory, DEFAULT_STEPS, MIN_STEPS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("time {0} outside [0, 1]")]
    TimeOutOfRange(f64),
    #[error("evaluation at non-finite point ({0}, {1})")]
    NonFinitePoint(f64, f64),
    #[error("integration needs at least {min} steps, got {got}")]
    TooFewSteps { min: usize, got: usize },
    #[error("integration of point {point} produced a non-finite state at t = {time}")]
    NonFinite { point: usize, time: f64 },
    #[error("concatenation durations must be positive and sum to 1 (sum = {0})")]
    BadDurations(f64),
    #[error("time warp amplitude must satisfy |a| < 1, got {0}")]
    BadWarp(f64),
    #[error("unsupported system structure: {0}")]
    Unsupported(String),
    #[error("representative ({x}, {y}) of component {component} moves by {defect} under the time-one map")]
    RepresentativeNotFixed { component: usize, x: f64, y: f64, defect: f64 },
}

/// Which one-sided limit to take at a time breakpoint of a concatenation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeEnvelope {
    Constant,
    /// `2 sin²(πt)`: unit mean, vanishing at both ends.
    SineSquared,
}

impl TimeEnvelope {
    pub fn eval<S: Scalar>(&self, t: S) -> S {
        match self {
            TimeEnvelope::Constant => S::one(),
            TimeEnvelope::SineSquared => {
                let s = (S::PI() * t).sin();
                S::lit(2.0) * s * s
            }
        }
    }
}

/// `F(t, x) = amplitude · envelope(t) · (1 − |x − c|²/R²)³` inside the disk of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpPerturbation<S> {
    pub center: Point2<S>,
    pub radius: S,
    pub amplitude: S,
    pub envelope: TimeEnvelope,
}

impl<S: Scalar> BumpPerturbation<S> {
    fn value(&self, t: S, x: Point2<S>) -> S {
        let u2 = (x - self.center).norm_sq() / (self.radius * self.radius);
        if u2 >= S::one() {
            return S::zero();
        }
        let w = S::one() - u2;
        self.amplitude * self.envelope.eval(t) * w * w * w
    }

    fn gradient(&self, t: S, x: Point2<S>) -> Point2<S> {
        let d = x - self.center;
        let r2 = self.radius * self.radius;
        let u2 = d.norm_sq() / r2;
        if u2 >= S::one() {
            return Point2::origin();
        }
        let w = S::one() - u2;
        d * (-S::lit(6.0) * self.amplitude * self.envelope.eval(t) * w * w / r2)
    }
}

/// Smooth monotone reparametrization `φ` of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeWarp<S> {
    /// `φ(t) = t − a·sin(2πt)/(2π)`.
    Sine { amplitude: S },
}

impl<S: Scalar> TimeWarp<S> {
    pub fn sine(amplitude: S) -> Result<Self, DynamicsError> {
        if amplitude.abs() >= S::one() {
            return Err(DynamicsError::BadWarp(amplitude.as_f64()));
        }
        Ok(TimeWarp::Sine { amplitude })
    }

    pub fn map(&self, t: S) -> S {
        match *self {
            TimeWarp::Sine { amplitude } => t - amplitude * (S::two_pi() * t).sin() / S::two_pi(),
        }
    }

    pub fn rate(&self, t: S) -> S {
        match *self {
            TimeWarp::Sine { amplitude } => S::one() - amplitude * (S::two_pi() * t).cos(),
        }
    }

    pub fn inverse(&self, s: S) -> S {
        let (mut lo, mut hi) = (S::zero(), S::one());
        for _ in 0..200 {
            let mid = (lo + hi) * S::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.map(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * S::lit(0.5)
    }
}

#[derive(Debug, Clone)]
pub struct Leg<S: Scalar> {
    pub system: HamiltonianSystem<S>,
    pub duration: S,
}

/// Expression tree of Hamiltonian generators.
#[derive(Debug, Clone)]
pub enum HamiltonianSystem<S: Scalar> {
    Zero,
    Radial(Arc<RadialHamiltonian<S>>),
    Sum(Vec<HamiltonianSystem<S>>),
    /// Legs run one after the other, each time-rescaled to its duration, so the
    /// time-one map is the composition of the legs' time-one maps (first leg first).
    Concat(Vec<Leg<S>>),
    Bump(BumpPerturbation<S>),
    Reparametrized {
        inner: Box<HamiltonianSystem<S>>,
        warp: TimeWarp<S>,
    },
}

impl<S: Scalar> HamiltonianSystem<S> {
    pub fn radial(h: RadialHamiltonian<S>) -> Self {
        HamiltonianSystem::Radial(Arc::new(h))
    }

    pub fn concat(legs: Vec<(HamiltonianSystem<S>, S)>) -> Result<Self, DynamicsError> {
        let total: S = legs.iter().map(|l| l.1).sum();
        if legs.is_empty() || legs.iter().any(|l| !(l.1 > S::zero())) || (total - S::one()).abs() > S::lit(1e-12) {
            return Err(DynamicsError::BadDurations(total.as_f64()));
        }
        Ok(HamiltonianSystem::Concat(legs.into_iter().map(|(system, duration)| Leg { system, duration }).collect()))
    }

    /// Equal-duration concatenation.
    pub fn concat_equal(systems: Vec<HamiltonianSystem<S>>) -> Result<Self, DynamicsError> {
        let d = S::one() / S::lit(systems.len().max(1) as f64);
        Self::concat(systems.into_iter().map(|s| (s, d)).collect())
    }

    pub fn reparametrized(self, warp: TimeWarp<S>) -> Self {
        HamiltonianSystem::Reparametrized { inner: Box::new(self), warp }
    }

    /// Locates the active leg of a concatenation at `t` and returns
    /// `(leg, local time)`.
    fn active_leg(legs: &[Leg<S>], t: S, side: Side) -> (&Leg<S>, S) {
        let mut start = S::zero();
        let last = legs.len() - 1;
        for (i, leg) in legs.iter().enumerate() {
            let end = if i == last { S::one() } else { start + leg.duration };
            let inside = match side {
                Side::Right => t < end || i == last,
                Side::Left => t <= end || i == last,
            };
            if inside {
                let local = ((t - start) / leg.duration).max(S::zero()).min(S::one());
                return (leg, local);
            }
            start = end;
        }
        unreachable!("concatenation has at least one leg")
    }

    /// `F(t, x)` taking the `side` limit at breakpoints.
    pub fn value_at(&self, t: S, side: Side, x: Point2<S>) -> S {
        match self {
            HamiltonianSystem::Zero => S::zero(),
            HamiltonianSystem::Radial(h) => h.value(x),
            HamiltonianSystem::Sum(items) => items.iter().map(|s| s.value_at(t, side, x)).sum(),
            HamiltonianSystem::Concat(legs) => {
                let (leg, local) = Self::active_leg(legs, t, side);
                leg.system.value_at(local, side, x) / leg.duration
            }
            HamiltonianSystem::Bump(b) => b.value(t, x),
            HamiltonianSystem::Reparametrized { inner, warp } => warp.rate(t) * inner.value_at(warp.map(t), side, x),
        }
    }

    /// `X_F(t, x)` taking the `side` limit at breakpoints.
    pub fn field_at(&self, t: S, side: Side, x: Point2<S>) -> Point2<S> {
        match self {
            HamiltonianSystem::Zero => Point2::origin(),
            HamiltonianSystem::Radial(h) => h.velocity(x),
            HamiltonianSystem::Sum(items) => items.iter().fold(Point2::origin(), |acc, s| acc + s.field_at(t, side, x)),
            HamiltonianSystem::Concat(legs) => {
                let (leg, local) = Self::active_leg(legs, t, side);
                leg.system.field_at(local, side, x) * (S::one() / leg.duration)
            }
            HamiltonianSystem::Bump(b) => {
                let g = b.gradient(t, x);
                Point2::new(g.y, -g.x)
            }
            HamiltonianSystem::Reparametrized { inner, warp } => inner.field_at(warp.map(t), side, x) * warp.rate(t),
        }
    }

    #[inline]
    pub fn value(&self, t: S, x: Point2<S>) -> S {
        self.value_at(t, Side::Right, x)
    }

    /// Checked symplectic gradient.
    pub fn vector_field(&self, t: S, x: Point2<S>) -> Result<Point2<S>, DynamicsError> {
        if !(t >= S::zero() && t <= S::one()) {
            return Err(DynamicsError::TimeOutOfRange(t.as_f64()));
        }
        if !x.is_finite() {
            return Err(DynamicsError::NonFinitePoint(x.x.as_f64(), x.y.as_f64()));
        }
        Ok(self.field_at(t, Side::Right, x))
    }

    /// Times in `(0, 1)` where the generator may jump.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        out.dedup_by(|a, b| (*a - *b).abs() < S::lit(1e-14));
        out.retain(|&t| t > S::lit(1e-14) && t < S::one() - S::lit(1e-14));
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<S>) {
        match self {
            HamiltonianSystem::Zero | HamiltonianSystem::Radial(_) | HamiltonianSystem::Bump(_) => {}
            HamiltonianSystem::Sum(items) => items.iter().for_each(|s| s.collect_breakpoints(out)),
            HamiltonianSystem::Concat(legs) => {
                let mut start = S::zero();
                for leg in legs {
                    let mut inner = Vec::new();
                    leg.system.collect_breakpoints(&mut inner);
                    out.extend(inner.into_iter().map(|b| start + b * leg.duration));
                    start += leg.duration;
                    out.push(start);
                }
            }
            HamiltonianSystem::Reparametrized { inner, warp } => {
                let mut v = Vec::new();
                inner.collect_breakpoints(&mut v);
                out.extend(v.into_iter().map(|b| warp.inverse(b)));
            }
        }
    }

    /// True when the generator does not depend on time.
    pub fn is_autonomous(&self) -> bool {
        match self {
            HamiltonianSystem::Zero | HamiltonianSystem::Radial(_) => true,
            HamiltonianSystem::Sum(items) => items.iter().all(|s| s.is_autonomous()),
            HamiltonianSystem::Concat(legs) => legs.len() == 1 && legs[0].system.is_autonomous(),
            HamiltonianSystem::Bump(b) => b.envelope == TimeEnvelope::Constant,
            HamiltonianSystem::Reparametrized { inner, .. } => inner.is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            HamiltonianSystem::Zero => true,
            HamiltonianSystem::Sum(items) => items.iter().all(|s| s.is_zero()),
            HamiltonianSystem::Concat(legs) => legs.iter().all(|l| l.system.is_zero()),
            HamiltonianSystem::Reparametrized { inner, .. } => inner.is_zero(),
            HamiltonianSystem::Bump(b) => b.amplitude == S::zero(),
            HamiltonianSystem::Radial(_) => false,
        }
    }

    /// Applies the chart map `x ↦ offset + scale·x` to every primitive.
    /// Hamiltonian values scale by `scale²` (area units), rotation rates are unchanged.
    pub fn transformed(&self, scale: S, offset: Point2<S>) -> Result<Self, DynamicsError> {
        Ok(match self {
            HamiltonianSystem::Zero => HamiltonianSystem::Zero,
            HamiltonianSystem::Radial(h) => {
                let profile = h.profile().scaled(scale);
                let center = offset + h.center() * scale;
                HamiltonianSystem::radial(
                    RadialHamiltonian::new(profile, center).map_err(|e| DynamicsError::Unsupported(e.to_string()))?,
                )
            }
            HamiltonianSystem::Sum(items) => {
                HamiltonianSystem::Sum(items.iter().map(|s| s.transformed(scale, offset)).collect::<Result<_, _>>()?)
            }
            HamiltonianSystem::Concat(legs) => HamiltonianSystem::Concat(
                legs.iter()
                    .map(|l| Ok(Leg { system: l.system.transformed(scale, offset)?, duration: l.duration }))
                    .collect::<Result<_, DynamicsError>>()?,
            ),
            HamiltonianSystem::Bump(b) => HamiltonianSystem::Bump(BumpPerturbation {
                center: offset + b.center * scale,
                radius: b.radius * scale,
                amplitude: b.amplitude * scale * scale,
                envelope: b.envelope,
            }),
            HamiltonianSystem::Reparametrized { inner, warp } => {
                HamiltonianSystem::Reparametrized { inner: Box::new(inner.transformed(scale, offset)?), warp: *warp }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{hamiltonian_from_profile, AlphaParams, BetaParams, RadialProfile};

    fn alpha_system() -> HamiltonianSystem<f64> {
        let p = RadialProfile::alpha(&AlphaParams::default());
        HamiltonianSystem::radial(hamiltonian_from_profile(&p, Point2::origin()).unwrap())
    }

    fn beta_system() -> HamiltonianSystem<f64> {
        let p = RadialProfile::beta(&BetaParams::default());
        HamiltonianSystem::radial(hamiltonian_from_profile(&p, Point2::new(0.5, 0.0)).unwrap())
    }

    #[test]
    fn radial_field_vanishes_at_center() {
        let v = alpha_system().vector_field(0.3, Point2::origin()).unwrap();
        assert_eq!(v, Point2::new(0.0, 0.0));
    }

    #[test]
    fn radial_field_on_unit_plateau() {
        let v = alpha_system().vector_field(0.0, Point2::new(0.5, 0.0)).unwrap();
        let expected = 2.0 * std::f64::consts::PI * 0.5;
        assert!(v.x.abs() < 1e-15);
        assert!((v.y - expected).abs() < 1e-14);
    }

    #[test]
    fn sum_field_is_sum_of_fields() {
        let a = alpha_system();
        let b = beta_system();
        let s = HamiltonianSystem::Sum(vec![a.clone(), b.clone()]);
        for i in 0..20 {
            let x = Point2::new(-0.9 + 0.09 * i as f64, 0.3 - 0.02 * i as f64);
            let lhs = s.vector_field(0.2, x).unwrap();
            let rhs = a.vector_field(0.2, x).unwrap() + b.vector_field(0.2, x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn checked_field_rejects_bad_inputs() {
        let a = alpha_system();
        assert!(matches!(a.vector_field(1.5, Point2::origin()), Err(DynamicsError::TimeOutOfRange(_))));
        assert!(matches!(a.vector_field(0.5, Point2::new(f64::NAN, 0.0)), Err(DynamicsError::NonFinitePoint(..))));
    }

    /// dF(v) = ω(X_F, v) against central differences of F.
    #[test]
    fn field_is_symplectic_gradient() {
        let bump = HamiltonianSystem::Bump(BumpPerturbation {
            center: Point2::new(0.1, -0.2),
            radius: 0.4,
            amplitude: 0.3,
            envelope: TimeEnvelope::SineSquared,
        });
        let g = HamiltonianSystem::concat_equal(vec![alpha_system(), beta_system()]).unwrap();
        let systems = [alpha_system(), beta_system(), bump, HamiltonianSystem::Sum(vec![g, alpha_system()])];
        let h = 1e-6;
        for sys in &systems {
            for i in 0..25 {
                let t = 0.03 + 0.037 * i as f64;
                let x = Point2::new(0.7 * (1.3 * i as f64).cos(), 0.6 * (0.7 * i as f64).sin());
                let fx = (sys.value(t, x + Point2::new(h, 0.0)) - sys.value(t, x - Point2::new(h, 0.0))) / (2.0 * h);
                let fy = (sys.value(t, x + Point2::new(0.0, h)) - sys.value(t, x - Point2::new(0.0, h))) / (2.0 * h);
                let v = sys.field_at(t, Side::Right, x);
                assert!((v.x - fy).abs() < 1e-6, "X_x {} vs F_y {}", v.x, fy);
                assert!((v.y + fx).abs() < 1e-6, "X_y {} vs -F_x {}", v.y, -fx);
            }
        }
    }

    #[test]
    fn concat_durations_validated() {
        assert!(matches!(
            HamiltonianSystem::concat(vec![(alpha_system(), 0.5), (beta_system(), 0.6)]),
            Err(DynamicsError::BadDurations(_))
        ));
        assert!(HamiltonianSystem::concat(vec![(alpha_system(), 0.25), (beta_system(), 0.75)]).is_ok());
    }

    #[test]
    fn concat_legs_rescaled_and_one_sided() {
        let g = HamiltonianSystem::concat(vec![(alpha_system(), 0.25), (beta_system(), 0.75)]).unwrap();
        let x = Point2::new(0.55, 0.0);
        let a = alpha_system().value(0.0, x);
        let b = beta_system().value(0.0, x);
        assert!((g.value_at(0.25, Side::Left, x) - a / 0.25).abs() < 1e-12);
        assert!((g.value_at(0.25, Side::Right, x) - b / 0.75).abs() < 1e-12);
        assert_eq!(g.breakpoints(), vec![0.25]);
    }

    #[test]
    fn warp_inverse_and_breakpoints() {
        let w = TimeWarp::sine(0.6).unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((w.inverse(w.map(t)) - t).abs() < 1e-12);
        }
        assert!(TimeWarp::<f64>::sine(1.0).is_err());
        let g = HamiltonianSystem::concat(vec![(alpha_system(), 0.3), (beta_system(), 0.7)]).unwrap().reparametrized(w);
        let bp = g.breakpoints();
        assert_eq!(bp.len(), 1);
        assert!((w.map(bp[0]) - 0.3).abs() < 1e-12);
    }
}
