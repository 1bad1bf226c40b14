//! Analytic fixed-set classification for systems built from radial rotations.

use serde::{Deserialize, Serialize};

use super::integrator::time_one_map;
use super::{DynamicsError, HamiltonianSystem, DEFAULT_STEPS};
use crate::geometry::{Point2, Rect};
use crate::profiles::{LevelStructure, RadialProfile};
use crate::scalar::Scalar;

/// The part of the plane in which fixed sets are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain<S> {
    Disk { center: Point2<S>, radius: S },
    Rect { rect: Rect<S> },
}

impl<S: Scalar> Domain<S> {
    pub fn unit_disk() -> Self {
        Domain::Disk { center: Point2::origin(), radius: S::one() }
    }

    pub fn contains(&self, p: Point2<S>) -> bool {
        match *self {
            Domain::Disk { center, radius } => p.distance(center) <= radius,
            Domain::Rect { rect } => rect.contains(p),
        }
    }

    pub fn bounding_box(&self) -> Rect<S> {
        match *self {
            Domain::Disk { center, radius } => Rect::centered(center, radius),
            Domain::Rect { rect } => rect,
        }
    }
}

/// A rotation about one center after merging all concentric primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationFactor<S: Scalar> {
    pub center: Point2<S>,
    pub profile: RadialProfile<S>,
    pub levels: LevelStructure<S>,
}

impl<S: Scalar> RotationFactor<S> {
    fn new(center: Point2<S>, profile: RadialProfile<S>) -> Self {
        let levels = profile.level_structure();
        Self { center, profile, levels }
    }

    pub fn support_radius(&self) -> S {
        self.profile.support_radius()
    }

    /// Integer plateau level at `p`, if the rotation is the identity near `p`.
    pub fn plateau_level_at(&self, p: Point2<S>) -> Option<i64> {
        let r = p.distance(self.center);
        if r >= self.support_radius() {
            return Some(0);
        }
        self.levels.plateaus.iter().find(|pl| pl.contains(r)).map(|pl| pl.level)
    }

    /// True if `p` is moved by this rotation only through an integer number of turns.
    fn acts_trivially_at(&self, p: Point2<S>) -> bool {
        self.plateau_level_at(p).is_some()
    }

    /// Whether the closed disk `{|x − c| ≤ radius}` lies inside one integer plateau.
    fn disk_in_plateau(&self, c: Point2<S>, radius: S) -> bool {
        let d = c.distance(self.center);
        let (lo, hi) = (d - radius, d + radius);
        if lo >= self.support_radius() {
            return true;
        }
        self.levels.plateaus.iter().any(|pl| lo >= pl.from && pl.to.is_none_or(|to| hi <= to))
    }
}

/// Extracts the rotation factors of a system whose time-one map is a
/// composition of commuting radial rotations with separated supports.
pub fn rotation_factors<S: Scalar>(system: &HamiltonianSystem<S>) -> Result<Vec<RotationFactor<S>>, DynamicsError> {
    let same = S::lit(1e-12);
    let mut factors: Vec<RotationFactor<S>> = Vec::new();
    let mut legs: Vec<Vec<RotationFactor<S>>> = Vec::new();
    collect_legs(system, &mut legs)?;
    // Concentric factors commute and their turn counts add.
    for leg in legs {
        for f in leg {
            if let Some(existing) = factors.iter_mut().find(|e| e.center.distance(f.center) < same) {
                *existing = RotationFactor::new(existing.center, existing.profile.sum(&f.profile));
            } else {
                factors.push(f);
            }
        }
    }
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            let disjoint = a.center.distance(b.center) >= a.support_radius() + b.support_radius();
            let nested =
                a.disk_in_plateau(b.center, b.support_radius()) || b.disk_in_plateau(a.center, a.support_radius());
            if !(disjoint || nested) {
                return Err(DynamicsError::Unsupported(format!(
                    "rotations about ({}, {}) and ({}, {}) overlap outside an integer plateau",
                    a.center.x, a.center.y, b.center.x, b.center.y
                )));
            }
        }
    }
    Ok(factors)
}

fn collect_legs<S: Scalar>(
    system: &HamiltonianSystem<S>,
    out: &mut Vec<Vec<RotationFactor<S>>>,
) -> Result<(), DynamicsError> {
    match system {
        HamiltonianSystem::Concat(legs) => {
            for leg in legs {
                collect_legs(&leg.system, out)?;
            }
            Ok(())
        }
        HamiltonianSystem::Reparametrized { inner, .. } => collect_legs(inner, out),
        other => {
            let mut fs = Vec::new();
            collect_autonomous(other, &mut fs)?;
            // Non-concentric summands of one leg must not interact.
            for (i, a) in fs.iter().enumerate() {
                for b in &fs[i + 1..] {
                    let concentric = a.center.distance(b.center) < S::lit(1e-12);
                    let disjoint = a.center.distance(b.center) >= a.support_radius() + b.support_radius();
                    if !concentric && !disjoint {
                        return Err(DynamicsError::Unsupported(
                            "summed rotations with different centers must have disjoint supports".into(),
                        ));
                    }
                }
            }
            out.push(fs);
            Ok(())
        }
    }
}

fn collect_autonomous<S: Scalar>(
    system: &HamiltonianSystem<S>,
    out: &mut Vec<RotationFactor<S>>,
) -> Result<(), DynamicsError> {
    match system {
        HamiltonianSystem::Zero => Ok(()),
        HamiltonianSystem::Radial(h) => {
            out.push(RotationFactor::new(h.center(), h.profile().clone()));
            Ok(())
        }
        HamiltonianSystem::Sum(items) => items.iter().try_for_each(|s| collect_autonomous(s, out)),
        HamiltonianSystem::Concat(_) | HamiltonianSystem::Reparametrized { .. } => {
            Err(DynamicsError::Unsupported("time-dependent term inside a sum".into()))
        }
        HamiltonianSystem::Bump(_) => Err(DynamicsError::Unsupported("bump perturbation is not radial".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    NondegeneratePoint,
    /// Center with an integer, non-plateau turn count.
    DegeneratePoint,
    Circle,
    PlanarRegion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum ComponentGeometry<S> {
    Point {
        at: Point2<S>,
        /// Turns of the rotation about this point.
        turns: S,
    },
    Circle {
        center: Point2<S>,
        radius: S,
        level: i64,
    },
    Region {
        cells: usize,
        /// Grid estimate of the area.
        area: S,
        bbox: Rect<S>,
        /// Plateau level of every factor, in factor order.
        levels: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSetComponent<S> {
    pub id: usize,
    pub kind: ComponentKind,
    pub geometry: ComponentGeometry<S>,
    pub representatives: Vec<Point2<S>>,
}

impl<S: Scalar> FixedSetComponent<S> {
    /// Membership test up to `tol` (regions: cell-level resolution).
    pub fn contains(&self, p: Point2<S>, tol: S) -> bool {
        match &self.geometry {
            ComponentGeometry::Point { at, .. } => at.distance(p) <= tol,
            ComponentGeometry::Circle { center, radius, .. } => (center.distance(p) - *radius).abs() <= tol,
            ComponentGeometry::Region { .. } => false,
        }
    }

    pub fn is_isolated_point_or_circle(&self) -> bool {
        !matches!(self.kind, ComponentKind::PlanarRegion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub resolution: usize,
    pub region_representatives: usize,
    pub circle_representatives: usize,
    /// Samples used to check that a circle is fixed by the other factors.
    pub circle_samples: usize,
    pub margin_cells: usize,
    pub fixed_tol: f64,
    pub steps: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            resolution: 256,
            region_representatives: 20,
            circle_representatives: 8,
            circle_samples: 64,
            margin_cells: 2,
            fixed_tol: 1e-8,
            steps: DEFAULT_STEPS,
        }
    }
}

fn integer_turns<S: Scalar>(v: S) -> bool {
    (v - v.round()).abs() <= S::lit(1e-12) * S::one().max(v.abs())
}

/// Enumerates the fixed set of the time-one map inside `domain` and checks
/// every representative numerically.
pub fn classify_fixed_sets<S: Scalar>(
    system: &HamiltonianSystem<S>,
    domain: &Domain<S>,
    opts: &ClassifyOptions,
) -> Result<Vec<FixedSetComponent<S>>, DynamicsError> {
    let factors = rotation_factors(system)?;
    let others_trivial =
        |skip: usize, p: Point2<S>| factors.iter().enumerate().all(|(j, f)| j == skip || f.acts_trivially_at(p));

    let mut out: Vec<FixedSetComponent<S>> = Vec::new();

    for (i, f) in factors.iter().enumerate() {
        let turns = f.levels.center_value;
        let plateau_at_center = f.levels.plateaus.iter().any(|pl| pl.from == S::zero());
        if plateau_at_center || !domain.contains(f.center) || !others_trivial(i, f.center) {
            continue;
        }
        let kind =
            if integer_turns(turns) { ComponentKind::DegeneratePoint } else { ComponentKind::NondegeneratePoint };
        out.push(FixedSetComponent {
            id: out.len(),
            kind,
            geometry: ComponentGeometry::Point { at: f.center, turns },
            representatives: vec![f.center],
        });
    }

    for (i, f) in factors.iter().enumerate() {
        for &(radius, level) in &f.levels.circles {
            let n = opts.circle_samples.max(opts.circle_representatives).max(1);
            let samples: Vec<Point2<S>> = (0..n)
                .map(|k| {
                    let a = S::two_pi() * S::lit(k as f64) / S::lit(n as f64);
                    f.center + Point2::new(a.cos(), a.sin()) * radius
                })
                .collect();
            let inside = samples.iter().filter(|&&p| domain.contains(p) && others_trivial(i, p)).count();
            if inside == 0 {
                continue;
            }
            if inside < n {
                return Err(DynamicsError::Unsupported(format!(
                    "fixed circle of radius {} about ({}, {}) is only partly fixed",
                    radius.as_f64(),
                    f.center.x.as_f64(),
                    f.center.y.as_f64()
                )));
            }
            let m = opts.circle_representatives.max(1);
            let representatives = (0..m)
                .map(|k| {
                    let a = S::two_pi() * (S::lit(k as f64) + S::lit(0.25)) / S::lit(m as f64);
                    f.center + Point2::new(a.cos(), a.sin()) * radius
                })
                .collect();
            out.push(FixedSetComponent {
                id: out.len(),
                kind: ComponentKind::Circle,
                geometry: ComponentGeometry::Circle { center: f.center, radius, level },
                representatives,
            });
        }
    }

    for region in plateau_regions(&factors, domain, opts) {
        out.push(FixedSetComponent {
            id: out.len(),
            kind: ComponentKind::PlanarRegion,
            geometry: region.0,
            representatives: region.1,
        });
    }

    let tol = S::lit(opts.fixed_tol);
    for c in &out {
        for &p in &c.representatives {
            let q = time_one_map(system, p, opts.steps)?;
            let defect = q.distance(p);
            if !(defect < tol) {
                return Err(DynamicsError::RepresentativeNotFixed {
                    component: c.id,
                    x: p.x.as_f64(),
                    y: p.y.as_f64(),
                    defect: defect.as_f64(),
                });
            }
        }
    }
    Ok(out)
}

/// Flood fill of grid cells on which every factor sits on an integer plateau.
fn plateau_regions<S: Scalar>(
    factors: &[RotationFactor<S>],
    domain: &Domain<S>,
    opts: &ClassifyOptions,
) -> Vec<(ComponentGeometry<S>, Vec<Point2<S>>)> {
    let n = opts.resolution.max(4);
    let bbox = domain.bounding_box();
    let cell_area = bbox.width() * bbox.height() / S::lit((n * n) as f64);
    let label = |p: Point2<S>| -> Option<Vec<i64>> {
        if !domain.contains(p) {
            return None;
        }
        factors.iter().map(|f| f.plateau_level_at(p)).collect()
    };
    let levels: Vec<Option<Vec<i64>>> = (0..n * n).map(|k| label(bbox.cell_center(k % n, k / n, n, n))).collect();

    let mut comp = vec![usize::MAX; n * n];
    let mut regions = Vec::new();
    for start in 0..n * n {
        if levels[start].is_none() || comp[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut cells = Vec::new();
        while let Some(k) = stack.pop() {
            cells.push(k);
            let (i, j) = (k % n, k / n);
            let mut nbrs = Vec::with_capacity(4);
            if i > 0 {
                nbrs.push(k - 1);
            }
            if i + 1 < n {
                nbrs.push(k + 1);
            }
            if j > 0 {
                nbrs.push(k - n);
            }
            if j + 1 < n {
                nbrs.push(k + n);
            }
            for kk in nbrs {
                if comp[kk] == usize::MAX && levels[kk] == levels[start] {
                    comp[kk] = id;
                    stack.push(kk);
                }
            }
        }
        cells.sort_unstable();
        regions.push(cells);
    }

    let margin = opts.margin_cells as isize;
    regions
        .into_iter()
        .enumerate()
        .map(|(id, cells)| {
            let deep: Vec<usize> = cells
                .iter()
                .copied()
                .filter(|&k| {
                    let (i, j) = ((k % n) as isize, (k / n) as isize);
                    (-margin..=margin).all(|di| {
                        (-margin..=margin).all(|dj| {
                            let (ii, jj) = (i + di, j + dj);
                            ii >= 0
                                && jj >= 0
                                && (ii as usize) < n
                                && (jj as usize) < n
                                && comp[jj as usize * n + ii as usize] == id
                        })
                    })
                })
                .collect();
            let pool = if deep.is_empty() { &cells } else { &deep };
            let m = opts.region_representatives.max(1).min(pool.len());
            let representatives = (0..m)
                .map(|q| {
                    let k = pool[(2 * q + 1) * pool.len() / (2 * m)];
                    bbox.cell_center(k % n, k / n, n, n)
                })
                .collect();
            let pts: Vec<Point2<S>> = cells.iter().map(|&k| bbox.cell_center(k % n, k / n, n, n)).collect();
            let (mut lo, mut hi) = (pts[0], pts[0]);
            for p in &pts {
                lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            let lv = levels[cells[0]].clone().unwrap_or_default();
            (
                ComponentGeometry::Region {
                    cells: cells.len(),
                    area: cell_area * S::lit(cells.len() as f64),
                    bbox: Rect::new(lo, hi),
                    levels: lv,
                },
                representatives,
            )
        })
        .collect()
}
