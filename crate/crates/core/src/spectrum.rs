//! Actions of fixed points with their evident cappings, the action spectrum,
//! the checkable admissibility clauses and Hofer lengths of generators.
//!
//! The action of a loop `γ` is `A(γ) = ∫₀¹ F(t, γ(t)) dt + ½∮(x dy − y dx)`,
//! so counterclockwise loops contribute their enclosed area with a positive
//! sign. On a radial orbit with `n` turns this gives `H(r) + nπr²`, which is
//! constant wherever the profile is the integer `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    integrate_flow, time_grid, ComponentKind, Domain, DynamicsError, FixedSetComponent, HamiltonianSystem, Side,
    Trajectory, DEFAULT_STEPS,
};
use crate::geometry::Point2;
use crate::quadrature::gauss_legendre;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("loop {id} is not closed (defect {defect})")]
    NotClosed { id: usize, defect: f64 },
    #[error("action varies by {spread} across the representatives of component {component}")]
    NotLocallyConstant { component: usize, spread: f64 },
    #[error("component {0} has no representatives")]
    NoRepresentatives(usize),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub steps: usize,
    pub closure_tol: f64,
    /// Largest accepted action spread inside one component.
    pub spread_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { steps: DEFAULT_STEPS, closure_tol: 1e-6, spread_tol: 1e-6 }
    }
}

/// Action of a closed sampled loop. The time grid must contain the
/// generator's breakpoints (as produced by the integrator); one-sided values
/// are used at each end of every step.
pub fn loop_action<S: Scalar>(
    trajectory: &Trajectory<S>,
    system: &HamiltonianSystem<S>,
    closure_tol: S,
) -> Result<S, SpectrumError> {
    if !(trajectory.closure_defect < closure_tol) {
        return Err(SpectrumError::NotClosed { id: trajectory.id, defect: trajectory.closure_defect.as_f64() });
    }
    let half = S::lit(0.5);
    let mut energy = S::zero();
    let mut area = S::zero();
    for k in 0..trajectory.len().saturating_sub(1) {
        let (t0, t1) = (trajectory.times[k], trajectory.times[k + 1]);
        let (x0, x1) = (trajectory.positions[k], trajectory.positions[k + 1]);
        let h = t1 - t0;
        let f0 = system.value_at(t0, Side::Right, x0);
        let f1 = system.value_at(t1, Side::Left, x1);
        let a0 = x0.cross(system.field_at(t0, Side::Right, x0));
        let a1 = x1.cross(system.field_at(t1, Side::Left, x1));
        energy += half * h * (f0 + f1);
        area += half * h * (a0 + a1);
    }
    Ok(energy + half * area)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionValue<S> {
    pub component: usize,
    pub kind: ComponentKind,
    /// Mean over representatives.
    pub value: S,
    /// Max minus min over representatives.
    pub spread: S,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpectrum<S> {
    pub values: Vec<ActionValue<S>>,
    /// Smallest gap between values of distinct components; `None` with fewer than two.
    pub epsilon: Option<S>,
    /// Components realising `epsilon`.
    pub closest_pair: Option<(usize, usize)>,
}

impl<S: Scalar> ActionSpectrum<S> {
    pub fn sorted_values(&self) -> Vec<S> {
        let mut v: Vec<S> = self.values.iter().map(|a| a.value).collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite actions"));
        v
    }

    /// Number of distinct values, merging values closer than `tol`.
    pub fn distinct_values(&self, tol: S) -> usize {
        let v = self.sorted_values();
        if v.is_empty() {
            return 0;
        }
        1 + v.windows(2).filter(|w| w[1] - w[0] > tol).count()
    }

    fn from_values(values: Vec<ActionValue<S>>) -> Self {
        let mut epsilon: Option<S> = None;
        let mut closest_pair = None;
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                let gap = (a.value - b.value).abs();
                if epsilon.is_none_or(|e| gap < e) {
                    epsilon = Some(gap);
                    closest_pair = Some((a.component, b.component));
                }
            }
        }
        Self { values, epsilon, closest_pair }
    }
}

/// One action value per fixed-set component, from its representatives.
pub fn action_spectrum<S: Scalar>(
    components: &[FixedSetComponent<S>],
    system: &HamiltonianSystem<S>,
    opts: &SpectrumOptions,
) -> Result<ActionSpectrum<S>, SpectrumError> {
    let closure = S::lit(opts.closure_tol);
    let values = components
        .par_iter()
        .map(|c| {
            if c.representatives.is_empty() {
                return Err(SpectrumError::NoRepresentatives(c.id));
            }
            let trajectories = integrate_flow(system, &c.representatives, opts.steps)?;
            let actions =
                trajectories.iter().map(|t| loop_action(t, system, closure)).collect::<Result<Vec<S>, _>>()?;
            let lo = actions.iter().copied().fold(S::infinity(), S::min);
            let hi = actions.iter().copied().fold(S::neg_infinity(), S::max);
            let spread = hi - lo;
            if !(spread < S::lit(opts.spread_tol)) {
                return Err(SpectrumError::NotLocallyConstant { component: c.id, spread: spread.as_f64() });
            }
            let mean = actions.iter().copied().sum::<S>() / S::lit(actions.len() as f64);
            Ok(ActionValue { component: c.id, kind: c.kind, value: mean, spread, samples: actions.len() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ActionSpectrum::from_values(values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityClause {
    pub id: String,
    pub status: ClauseStatus,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub clauses: Vec<AdmissibilityClause>,
    /// True when every evaluated clause passes.
    pub passed: bool,
}

impl AdmissibilityReport {
    pub fn clause(&self, id: &str) -> Option<&AdmissibilityClause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityOptions {
    /// Values closer than this count as one spectrum value.
    pub value_tol: f64,
    /// Distance within which a marked point lies on a point or circle component.
    pub membership_tol: f64,
    /// Smallest distance between representatives of distinct components.
    pub isolation_tol: f64,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        Self { value_tol: 1e-6, membership_tol: 1e-6, isolation_tol: 1e-5 }
    }
}

/// Evaluates the numerically checkable clauses: isolation and local
/// constancy, one component per spectrum value, marked points on distinct
/// isolated points or circles, and positive separation.
pub fn admissibility_check<S: Scalar>(
    components: &[FixedSetComponent<S>],
    spectrum: &ActionSpectrum<S>,
    marked: &[(String, Point2<S>)],
    opts: &AdmissibilityOptions,
) -> AdmissibilityReport {
    let mut clauses = Vec::new();
    let mut push = |id: &str, ok: bool, witness: String| {
        clauses.push(AdmissibilityClause {
            id: id.into(),
            status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
            witness,
        })
    };

    let max_spread = spectrum.values.iter().map(|v| v.spread).fold(S::zero(), S::max);
    let mut min_gap = S::infinity();
    for (i, a) in components.iter().enumerate() {
        for b in &components[i + 1..] {
            for &p in &a.representatives {
                for &q in &b.representatives {
                    min_gap = min_gap.min(p.distance(q));
                }
            }
        }
    }
    let locally_constant = max_spread < S::lit(opts.value_tol);
    let isolated = min_gap > S::lit(opts.isolation_tol);
    push(
        "isolated-locally-constant",
        locally_constant && isolated && spectrum.values.len() == components.len(),
        format!("max action spread {:e}; min distance between components {:e}", max_spread.as_f64(), min_gap.as_f64()),
    );

    let distinct = spectrum.distinct_values(S::lit(opts.value_tol));
    push(
        "one-component-per-value",
        distinct == spectrum.values.len(),
        format!("{} components, {} distinct values", spectrum.values.len(), distinct),
    );

    let mut owners: Vec<Option<usize>> = Vec::new();
    let mut notes = Vec::new();
    for (label, p) in marked {
        let owner = components.iter().find(|c| c.contains(*p, S::lit(opts.membership_tol))).map(|c| c.id);
        match owner {
            Some(id) => notes.push(format!("{label}->{id}")),
            None => notes.push(format!("{label}->none")),
        }
        owners.push(owner);
    }
    let all_found = owners.iter().all(|o| o.is_some());
    let all_distinct = owners.iter().enumerate().all(|(i, o)| o.is_none() || !owners[..i].contains(o));
    push("marked-on-distinct-isolated-components", all_found && all_distinct, notes.join(", "));

    let eps = spectrum.epsilon;
    push(
        "epsilon-separated",
        eps.is_some_and(|e| e > S::lit(opts.value_tol)),
        match (eps, spectrum.closest_pair) {
            (Some(e), Some((a, b))) => format!("epsilon {:e} between components {a} and {b}", e.as_f64()),
            _ => "fewer than two components".into(),
        },
    );

    for id in ["floer-trajectory-clauses", "index-clauses"] {
        clauses.push(AdmissibilityClause {
            id: id.into(),
            status: ClauseStatus::NotEvaluated,
            witness: "requires Floer-theoretic data".into(),
        });
    }
    let passed = clauses.iter().all(|c| c.status != ClauseStatus::Fail);
    AdmissibilityReport { clauses, passed }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoferOptions {
    /// Gauss–Legendre nodes per smooth time piece.
    pub time_nodes: usize,
    /// Spatial grid per axis over the domain's bounding box.
    pub grid: usize,
    /// Grid candidates refined by local search for each extremum.
    pub refine_candidates: usize,
    pub refine_iterations: usize,
}

impl Default for HoferOptions {
    fn default() -> Self {
        Self { time_nodes: 16, grid: 64, refine_candidates: 4, refine_iterations: 80 }
    }
}

fn refine<S: Scalar>(
    f: &impl Fn(Point2<S>) -> S,
    domain: &Domain<S>,
    start: Point2<S>,
    step0: S,
    iters: usize,
    sign: S,
) -> S {
    let mut x = start;
    let mut best = sign * f(x);
    let mut step = step0;
    let dirs = [
        Point2::new(S::one(), S::zero()),
        Point2::new(-S::one(), S::zero()),
        Point2::new(S::zero(), S::one()),
        Point2::new(S::zero(), -S::one()),
    ];
    for _ in 0..iters {
        let mut moved = false;
        for d in dirs {
            let y = x + d * step;
            if !domain.contains(y) {
                continue;
            }
            let v = sign * f(y);
            if v > best {
                best = v;
                x = y;
                moved = true;
            }
        }
        if !moved {
            step *= S::lit(0.5);
            if step < S::lit(1e-10) {
                break;
            }
        }
    }
    sign * best
}

/// `max_x F(t, x) − min_x F(t, x)` over the domain.
pub fn oscillation<S: Scalar>(
    system: &HamiltonianSystem<S>,
    t: S,
    side: Side,
    domain: &Domain<S>,
    opts: &HoferOptions,
) -> S {
    let bbox = domain.bounding_box();
    let n = opts.grid.max(2);
    let f = |x: Point2<S>| system.value_at(t, side, x);
    let mut samples: Vec<(S, Point2<S>)> = (0..n * n)
        .map(|k| bbox.cell_center(k % n, k / n, n, n))
        .filter(|&x| domain.contains(x))
        .map(|x| (f(x), x))
        .collect();
    if samples.is_empty() {
        return S::zero();
    }
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite Hamiltonian"));
    let step = bbox.width().max(bbox.height()) / S::lit(n as f64);
    let m = opts.refine_candidates.max(1).min(samples.len());
    let hi = samples[samples.len() - m..]
        .iter()
        .map(|&(_, x)| refine(&f, domain, x, step, opts.refine_iterations, S::one()))
        .fold(S::neg_infinity(), S::max);
    let lo = samples[..m]
        .iter()
        .map(|&(_, x)| refine(&f, domain, x, step, opts.refine_iterations, -S::one()))
        .fold(S::infinity(), S::min);
    hi - lo
}

/// `∫₀¹ osc F(t, ·) dt`, an upper bound for the Hofer norm of the time-one map.
pub fn hofer_length<S: Scalar>(system: &HamiltonianSystem<S>, domain: &Domain<S>, opts: &HoferOptions) -> S {
    let rule = gauss_legendre(opts.time_nodes.max(1));
    let pieces = time_grid(system, S::zero(), S::one(), 1);
    let nodes: Vec<(S, S)> = pieces
        .iter()
        .flat_map(|&(a, b, _)| {
            let half = (b - a) * S::lit(0.5);
            let mid = (a + b) * S::lit(0.5);
            rule.iter().map(move |&(x, w)| (mid + half * S::lit(x), half * S::lit(w)))
        })
        .collect();
    nodes
        .par_iter()
        .map(|&(t, w)| w * oscillation(system, t, Side::Right, domain, opts))
        .collect::<Vec<S>>()
        .into_iter()
        .sum()
}
