//! Radial rotation profiles and the radial Hamiltonians they generate.
//!
//! A profile maps a radius to a number of counterclockwise turns per unit
//! time. Profiles are C¹ piecewise cubic Hermite curves through knots
//! `(r, value, slope)`; the last knot closes the support and the profile is
//! zero beyond it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::quadrature::{adaptive_simpson, QuadratureError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("profile evaluated at negative radius {0}")]
    NegativeRadius(f64),
    #[error("profile needs at least two knots, got {0}")]
    TooFewKnots(usize),
    #[error("first knot must sit at radius 0, found {0}")]
    FirstKnotNotAtOrigin(f64),
    #[error("knot radii must be strictly increasing (knot {index})")]
    UnsortedKnots { index: usize },
    #[error("last knot must have value 0 and slope 0 for compact support")]
    OpenSupport,
    #[error("knot {index} has a non-finite entry")]
    NonFinite { index: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot<S> {
    pub r: S,
    pub value: S,
    pub slope: S,
}

impl<S: Scalar> Knot<S> {
    pub fn new(r: S, value: S, slope: S) -> Self {
        Self { r, value, slope }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Knot<S>>", into = "Vec<Knot<S>>")]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct RadialProfile<S: Scalar> {
    knots: Vec<Knot<S>>,
}

impl<S: Scalar> TryFrom<Vec<Knot<S>>> for RadialProfile<S> {
    type Error = ProfileError;
    fn try_from(knots: Vec<Knot<S>>) -> Result<Self, Self::Error> {
        Self::from_knots(knots)
    }
}

impl<S: Scalar> From<RadialProfile<S>> for Vec<Knot<S>> {
    fn from(p: RadialProfile<S>) -> Self {
        p.knots
    }
}

/// A maximal radius interval on which a profile is a constant integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau<S> {
    pub from: S,
    /// `None` for the unbounded zero plateau outside the support.
    pub to: Option<S>,
    pub level: i64,
}

impl<S: Scalar> Plateau<S> {
    pub fn contains(&self, r: S) -> bool {
        r >= self.from && self.to.is_none_or(|to| r <= to)
    }

    /// Distance from `r` to the nearest plateau edge, negative outside.
    pub fn depth(&self, r: S) -> S {
        let inner = if self.from == S::zero() { S::infinity() } else { r - self.from };
        let outer = self.to.map_or(S::infinity(), |to| to - r);
        inner.min(outer)
    }
}

/// Radii at which the rotation is an integer number of turns.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelStructure<S> {
    pub center_value: S,
    pub plateaus: Vec<Plateau<S>>,
    /// Isolated integer levels `(radius, turns)`, radius > 0, ascending.
    pub circles: Vec<(S, i64)>,
}

fn integer_level<S: Scalar>(v: S) -> Option<i64> {
    let r = v.round();
    if (v - r).abs() <= S::lit(1e-12) * S::one().max(v.abs()) {
        r.to_i64()
    } else {
        None
    }
}

impl<S: Scalar> RadialProfile<S> {
    pub fn from_knots(knots: Vec<Knot<S>>) -> Result<Self, ProfileError> {
        if knots.len() < 2 {
            return Err(ProfileError::TooFewKnots(knots.len()));
        }
        for (index, k) in knots.iter().enumerate() {
            if !(k.r.is_finite() && k.value.is_finite() && k.slope.is_finite()) {
                return Err(ProfileError::NonFinite { index });
            }
        }
        if knots[0].r != S::zero() {
            return Err(ProfileError::FirstKnotNotAtOrigin(knots[0].r.as_f64()));
        }
        for index in 1..knots.len() {
            if knots[index].r <= knots[index - 1].r {
                return Err(ProfileError::UnsortedKnots { index });
            }
        }
        let last = knots[knots.len() - 1];
        if last.value != S::zero() || last.slope != S::zero() {
            return Err(ProfileError::OpenSupport);
        }
        Ok(Self { knots })
    }

    /// The zero profile on `[0, r_max]`.
    pub fn zero(r_max: S) -> Self {
        Self { knots: vec![Knot::new(S::zero(), S::zero(), S::zero()), Knot::new(r_max, S::zero(), S::zero())] }
    }

    pub fn knots(&self) -> &[Knot<S>] {
        &self.knots
    }

    pub fn r_max(&self) -> S {
        self.knots[self.knots.len() - 1].r
    }

    /// Smallest radius beyond which the profile vanishes identically.
    pub fn support_radius(&self) -> S {
        let mut idx = self.knots.len() - 1;
        while idx > 0 && self.segment_is_constant(idx - 1) && self.knots[idx - 1].value == S::zero() {
            idx -= 1;
        }
        self.knots[idx].r
    }

    /// Checked evaluation.
    pub fn eval(&self, r: S) -> Result<S, ProfileError> {
        if r < S::zero() || r.is_nan() {
            return Err(ProfileError::NegativeRadius(r.as_f64()));
        }
        Ok(self.value(r))
    }

    fn segment_index(&self, r: S) -> Option<usize> {
        if r >= self.r_max() {
            return None;
        }
        // knots[i].r <= r < knots[i+1].r
        let idx = self.knots.partition_point(|k| k.r <= r);
        Some(idx.saturating_sub(1).min(self.knots.len() - 2))
    }

    fn hermite(&self, seg: usize, r: S) -> (S, S) {
        let a = self.knots[seg];
        let b = self.knots[seg + 1];
        let h = b.r - a.r;
        let t = (r - a.r) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = S::lit(2.0);
        let three = S::lit(3.0);
        let h00 = two * t3 - three * t2 + S::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        let value = h00 * a.value + h10 * h * a.slope + h01 * b.value + h11 * h * b.slope;
        let six = S::lit(6.0);
        let d00 = six * t2 - six * t;
        let d10 = three * t2 - S::lit(4.0) * t + S::one();
        let d01 = six * t - six * t2;
        let d11 = three * t2 - two * t;
        let deriv = (d00 * a.value + d01 * b.value) / h + d10 * a.slope + d11 * b.slope;
        (value, deriv)
    }

    /// Unchecked evaluation; negative radii are clamped to 0.
    #[inline]
    pub fn value(&self, r: S) -> S {
        let r = r.max(S::zero());
        match self.segment_index(r) {
            Some(seg) => self.hermite(seg, r).0,
            None => S::zero(),
        }
    }

    #[inline]
    pub fn derivative(&self, r: S) -> S {
        let r = r.max(S::zero());
        match self.segment_index(r) {
            Some(seg) => self.hermite(seg, r).1,
            None => S::zero(),
        }
    }

    pub fn segment_count(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn segment_is_constant(&self, seg: usize) -> bool {
        let a = self.knots[seg];
        let b = self.knots[seg + 1];
        a.value == b.value && a.slope == S::zero() && b.slope == S::zero()
    }

    /// Maximum of the derivative over `[lo, hi]` (exact: the derivative is a
    /// quadratic on each segment).
    pub fn max_derivative_on(&self, lo: S, hi: S) -> S {
        let mut best = S::neg_infinity();
        let mut consider = |r: S| {
            if r >= lo && r <= hi {
                best = best.max(self.derivative(r));
            }
        };
        consider(lo);
        consider(hi);
        for seg in 0..self.segment_count() {
            let a = self.knots[seg];
            let b = self.knots[seg + 1];
            let h = b.r - a.r;
            // derivative in t: A t² + B t + C (scaled by 1/h)
            let big_a = S::lit(6.0) * (a.value - b.value) + S::lit(3.0) * h * (a.slope + b.slope);
            let big_b = S::lit(6.0) * (b.value - a.value) - h * (S::lit(4.0) * a.slope + S::lit(2.0) * b.slope);
            if big_a != S::zero() {
                let t = -big_b / (S::lit(2.0) * big_a);
                if t > S::zero() && t < S::one() {
                    consider(a.r + t * h);
                }
            }
            consider(a.r);
            // approach the right end from inside the segment
            consider(b.r - h * S::lit(1e-12));
        }
        if hi >= self.r_max() {
            best = best.max(S::zero());
        }
        best
    }

    /// Profile with radii scaled by `factor` (turn counts preserved).
    pub fn scaled(&self, factor: S) -> Self {
        Self { knots: self.knots.iter().map(|k| Knot::new(k.r * factor, k.value, k.slope / factor)).collect() }
    }

    /// Pointwise sum of two profiles (exact: both are cubic on the merged knots).
    pub fn sum(&self, other: &Self) -> Self {
        let mut radii: Vec<S> = self.knots.iter().chain(other.knots.iter()).map(|k| k.r).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
        radii.dedup();
        let knots = radii
            .into_iter()
            .map(|r| {
                let slope = |p: &Self| if r >= p.r_max() { S::zero() } else { p.derivative(r) };
                Knot::new(r, self.value(r) + other.value(r), slope(self) + slope(other))
            })
            .collect();
        Self { knots }
    }

    /// Integer-level analysis used to locate fixed circles and plateaus.
    pub fn level_structure(&self) -> LevelStructure<S> {
        let n_seg = self.segment_count();
        let mut plateaus: Vec<Plateau<S>> = Vec::new();
        let mut seg = 0;
        while seg < n_seg {
            if self.segment_is_constant(seg) {
                let level_value = self.knots[seg].value;
                let start = seg;
                while seg < n_seg && self.segment_is_constant(seg) && self.knots[seg].value == level_value {
                    seg += 1;
                }
                if let Some(level) = integer_level(level_value) {
                    let to = if seg == n_seg && level == 0 { None } else { Some(self.knots[seg].r) };
                    plateaus.push(Plateau { from: self.knots[start].r, to, level });
                }
            } else {
                seg += 1;
            }
        }
        if plateaus.last().is_none_or(|p| p.to.is_some()) {
            plateaus.push(Plateau { from: self.r_max(), to: None, level: 0 });
        }

        let mut circles = Vec::new();
        for seg in 0..n_seg {
            let a = self.knots[seg];
            // knot-level integers strictly inside the profile
            if seg > 0 {
                if let Some(level) = integer_level(a.value) {
                    let left_const = self.segment_is_constant(seg - 1);
                    let right_const = self.segment_is_constant(seg);
                    if !left_const && !right_const {
                        circles.push((a.r, level));
                    }
                }
            }
            if self.segment_is_constant(seg) {
                continue;
            }
            for (lo, hi) in self.monotone_pieces(seg) {
                let (vlo, vhi) = (self.value_in(seg, lo), self.value_in(seg, hi));
                let (small, large) = if vlo < vhi { (vlo, vhi) } else { (vhi, vlo) };
                let mut n = small.floor() + S::one();
                while n < large {
                    let root = self.bisect_level(seg, lo, hi, n);
                    let at_knot = (root - lo).abs() < S::lit(1e-14) && lo == a.r
                        || (root - hi).abs() < S::lit(1e-14) && hi == self.knots[seg + 1].r;
                    if !at_knot {
                        circles.push((root, n.to_i64().expect("integer level")));
                    }
                    n += S::one();
                }
            }
        }
        circles.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite radii"));
        LevelStructure { center_value: self.knots[0].value, plateaus, circles }
    }

    fn value_in(&self, seg: usize, r: S) -> S {
        self.hermite(seg, r).0
    }

    fn monotone_pieces(&self, seg: usize) -> Vec<(S, S)> {
        let a = self.knots[seg];
        let b = self.knots[seg + 1];
        let h = b.r - a.r;
        let big_a = S::lit(6.0) * (a.value - b.value) + S::lit(3.0) * h * (a.slope + b.slope);
        let big_b = S::lit(6.0) * (b.value - a.value) - h * (S::lit(4.0) * a.slope + S::lit(2.0) * b.slope);
        let big_c = h * a.slope;
        // Double roots at the ends round to slivers just inside the segment.
        let edge = S::lit(1e-9);
        let mut cuts = vec![S::zero(), S::one()];
        if big_a.abs() > S::epsilon() {
            let disc = big_b * big_b - S::lit(4.0) * big_a * big_c;
            if disc > S::zero() {
                let sq = disc.sqrt();
                for t in [(-big_b - sq) / (S::lit(2.0) * big_a), (-big_b + sq) / (S::lit(2.0) * big_a)] {
                    if t > edge && t < S::one() - edge {
                        cuts.push(t);
                    }
                }
            }
        } else if big_b.abs() > S::epsilon() {
            let t = -big_c / big_b;
            if t > edge && t < S::one() - edge {
                cuts.push(t);
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        let at = |t: S| {
            if t == S::zero() {
                a.r
            } else if t == S::one() {
                b.r
            } else {
                a.r + t * h
            }
        };
        cuts.windows(2).map(|w| (at(w[0]), at(w[1]))).collect()
    }

    fn bisect_level(&self, seg: usize, mut lo: S, mut hi: S, level: S) -> S {
        let increasing = self.value_in(seg, hi) > self.value_in(seg, lo);
        for _ in 0..200 {
            let mid = (lo + hi) * S::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            let above = self.value_in(seg, mid) > level;
            if above == increasing {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) * S::lit(0.5)
    }

    /// Radius at which the profile takes the integer `level`, if isolated.
    pub fn level_radius(&self, level: i64) -> Option<S> {
        self.level_structure().circles.into_iter().find(|&(_, l)| l == level).map(|(r, _)| r)
    }
}

/// Shape parameters of the default α profile. The fixed radii (0.1, 0.2,
/// 0.8, 0.9) and levels (2, 1, 0) are not configurable here; use explicit
/// knots for anything else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    /// α(0), in (2, 2.5].
    pub center_turns: f64,
    /// α'(0.1), negative.
    pub inner_slope: f64,
}

impl Default for AlphaParams {
    fn default() -> Self {
        Self { center_turns: 2.5, inner_slope: -14.0 }
    }
}

/// Shape parameters of the default β profile on `[0, 0.3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    /// β(0), in (3, 3.5].
    pub center_turns: f64,
    /// β'(0.1), negative.
    pub inner_slope: f64,
}

impl Default for BetaParams {
    fn default() -> Self {
        Self { center_turns: 3.5, inner_slope: -14.0 }
    }
}

impl<S: Scalar> RadialProfile<S> {
    pub fn alpha(params: &AlphaParams) -> Self {
        let k = |r: f64, v: f64, s: f64| Knot::new(S::lit(r), S::lit(v), S::lit(s));
        Self {
            knots: vec![
                k(0.0, params.center_turns, 0.0),
                k(0.1, 2.0, params.inner_slope),
                k(0.2, 1.0, 0.0),
                k(0.8, 1.0, 0.0),
                k(0.9, 0.0, 0.0),
                k(1.0, 0.0, 0.0),
            ],
        }
    }

    pub fn beta(params: &BetaParams) -> Self {
        let k = |r: f64, v: f64, s: f64| Knot::new(S::lit(r), S::lit(v), S::lit(s));
        Self {
            knots: vec![
                k(0.0, params.center_turns, 0.0),
                k(0.1, 3.0, params.inner_slope),
                k(0.2, 0.0, 0.0),
                k(0.3, 0.0, 0.0),
            ],
        }
    }
}

/// Which constraint block to validate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileSpec {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Minimal descent rate (turns per unit radius) on "strongly decreasing" intervals.
    pub strong_decrease_threshold: f64,
    /// Fraction of each strongly decreasing interval excluded at both ends,
    /// where C¹ joins with plateaus force the slope to 0.
    pub interval_margin: f64,
    pub value_tolerance: f64,
    pub samples: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { strong_decrease_threshold: 0.1, interval_margin: 0.05, value_tolerance: 1e-12, samples: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub id: String,
    pub satisfied: bool,
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }

    pub fn is_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn get(&self, id: &str) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    fn push(&mut self, id: &str, satisfied: bool, measured: f64) {
        self.checks.push(ConstraintCheck { id: id.to_string(), satisfied, measured });
    }
}

pub fn validate_profile<S: Scalar>(
    profile: &RadialProfile<S>,
    spec: ProfileSpec,
    opts: &ValidationOptions,
) -> ConstraintReport {
    let mut report = ConstraintReport::default();
    let f = |r: f64| profile.value(S::lit(r)).as_f64();
    let tol = opts.value_tolerance;
    let max_dev = |lo: f64, hi: f64, target: f64| {
        (0..=opts.samples)
            .map(|i| lo + (hi - lo) * i as f64 / opts.samples as f64)
            .map(|r| (f(r) - target).abs())
            .fold(0.0, f64::max)
    };
    let strong = |lo: f64, hi: f64| {
        let m = (hi - lo) * opts.interval_margin;
        profile.max_derivative_on(S::lit(lo + m), S::lit(hi - m)).as_f64()
    };
    let monotone = profile.max_derivative_on(S::zero(), profile.r_max()).as_f64();
    let thr = -opts.strong_decrease_threshold;
    let prefix = match spec {
        ProfileSpec::Alpha => "alpha",
        ProfileSpec::Beta => "beta",
    };
    let id = |s: &str| format!("{prefix}-{s}");
    match spec {
        ProfileSpec::Alpha => {
            let c = f(0.0);
            report.push(&id("center-above-2"), c > 2.0, c);
            report.push(&id("range"), c <= 2.5 + tol && profile.r_max().as_f64() <= 1.0 + tol, c);
            let v = f(0.1);
            report.push(&id("at-0.1"), (v - 2.0).abs() <= tol, v);
            let d = max_dev(0.2, 0.8, 1.0);
            report.push(&id("plateau-1"), d <= tol, d);
            let d = max_dev(0.9, profile.r_max().as_f64().max(0.9), 0.0).max(f(1.0).abs());
            report.push(&id("zero-beyond-0.9"), d <= tol, d);
            let s = strong(0.0, 0.2);
            report.push(&id("strong-decrease-inner"), s <= thr, s);
            let s = strong(0.8, 0.9);
            report.push(&id("strong-decrease-outer"), s <= thr, s);
        }
        ProfileSpec::Beta => {
            let c = f(0.0);
            report.push(&id("center-above-3"), c > 3.0, c);
            report.push(&id("range"), c <= 3.5 + tol && profile.r_max().as_f64() <= 0.3 + tol, c);
            let v = f(0.1);
            report.push(&id("at-0.1"), (v - 3.0).abs() <= tol, v);
            let d = max_dev(0.2, profile.r_max().as_f64().max(0.2), 0.0).max(f(0.3).abs());
            report.push(&id("zero-beyond-0.2"), d <= tol, d);
            let s = strong(0.0, 0.2);
            report.push(&id("strong-decrease"), s <= thr, s);
        }
    }
    report.push(&id("monotone"), monotone <= tol, monotone);
    let min_value = (0..=opts.samples)
        .map(|i| f(profile.r_max().as_f64() * i as f64 / opts.samples as f64))
        .fold(f64::INFINITY, f64::min);
    report.push(&id("non-negative"), min_value >= -tol, min_value);
    report
}

/// Autonomous Hamiltonian whose flow rotates each circle about `center` by
/// `2π·profile(r)` per unit time: `H(r) = 2π ∫_r^{r_max} s·profile(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialHamiltonian<S: Scalar> {
    center: Point2<S>,
    profile: RadialProfile<S>,
    /// `tail[j] = H(knots[j].r)`.
    tail: Vec<S>,
}

const TABLE_TOL: f64 = 1e-15;
const QUAD_DEPTH: u32 = 40;
const GL3: [(f64, f64); 3] =
    [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];

pub fn hamiltonian_from_profile<S: Scalar>(
    profile: &RadialProfile<S>,
    center: Point2<S>,
) -> Result<RadialHamiltonian<S>, ProfileError> {
    RadialHamiltonian::new(profile.clone(), center)
}

impl<S: Scalar> RadialHamiltonian<S> {
    pub fn new(profile: RadialProfile<S>, center: Point2<S>) -> Result<Self, ProfileError> {
        let knots = profile.knots();
        let mut tail = vec![S::zero(); knots.len()];
        for j in (0..knots.len() - 1).rev() {
            let piece = adaptive_simpson(
                |s: S| s * profile.value(s),
                knots[j].r,
                knots[j + 1].r,
                S::lit(TABLE_TOL),
                QUAD_DEPTH,
            )?;
            tail[j] = tail[j + 1] + S::two_pi() * piece;
        }
        Ok(Self { center, profile, tail })
    }

    pub fn center(&self) -> Point2<S> {
        self.center
    }

    pub fn profile(&self) -> &RadialProfile<S> {
        &self.profile
    }

    pub fn support_radius(&self) -> S {
        self.profile.support_radius()
    }

    /// `H` as a function of the distance to the center.
    pub fn value_at_radius(&self, r: S) -> S {
        let knots = self.profile.knots();
        let r = r.max(S::zero());
        if r >= self.profile.r_max() {
            return S::zero();
        }
        let seg = knots.partition_point(|k| k.r <= r).saturating_sub(1);
        let next = seg + 1;
        if r == knots[seg].r {
            return self.tail[seg];
        }
        // s·profile(s) is a quartic on the segment: 3-point Gauss–Legendre is exact.
        let (a, b) = (r, knots[next].r);
        let half = (b - a) * S::lit(0.5);
        let mid = (a + b) * S::lit(0.5);
        let piece = GL3
            .iter()
            .map(|&(x, w)| {
                let s = mid + half * S::lit(x);
                S::lit(w) * s * self.profile.value(s)
            })
            .sum::<S>()
            * half;
        self.tail[next] + S::two_pi() * piece
    }

    #[inline]
    pub fn value(&self, x: Point2<S>) -> S {
        self.value_at_radius((x - self.center).norm())
    }

    /// Counterclockwise rotation field with angular speed `2π·profile(r)`.
    #[inline]
    pub fn velocity(&self, x: Point2<S>) -> Point2<S> {
        let d = x - self.center;
        let r = d.norm();
        d.perp() * (S::two_pi() * self.profile.value(r))
    }

    /// Exact time-`t` flow: rotation by `2π·t·profile(r)`.
    pub fn exact_flow(&self, x: Point2<S>, t: S) -> Point2<S> {
        let r = (x - self.center).norm();
        x.rotated_about(self.center, S::two_pi() * t * self.profile.value(r))
    }
}
