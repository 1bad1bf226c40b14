//! Numerical fixed points of time-one maps.

use rayon::prelude::*;

use super::integrator::time_one_map;
use super::{DynamicsError, HamiltonianSystem, DEFAULT_STEPS};
use crate::geometry::{Point2, Rect};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub fixed_tol: f64,
    pub merge_radius: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    /// Seed displacement from each cell center, as a fraction of the cell size.
    pub seed_offset: f64,
    /// Iterates leaving the search box enlarged by this fraction are discarded.
    pub box_slack: f64,
    pub steps: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            fixed_tol: 1e-8,
            merge_radius: 1e-5,
            max_iter: 40,
            fd_step: 1e-6,
            seed_offset: 0.137,
            box_slack: 0.5,
            steps: DEFAULT_STEPS,
        }
    }
}

/// Connected block of grid seeds that were already fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRegion<S> {
    pub cells: Vec<(usize, usize)>,
    pub representative: Point2<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointSearch<S> {
    /// Isolated fixed points found by Newton iteration, de-duplicated.
    pub points: Vec<Point2<S>>,
    /// Two-dimensional fixed families detected by flood fill over fixed seeds.
    pub regions: Vec<SeedRegion<S>>,
    pub seeds: usize,
    pub fixed_seeds: usize,
}

impl<S> FixedPointSearch<S> {
    pub fn has_region(&self) -> bool {
        !self.regions.is_empty()
    }
}

/// Central finite-difference Jacobian of the time-one map.
pub fn jacobian<S: Scalar>(
    system: &HamiltonianSystem<S>,
    x: Point2<S>,
    h: S,
    steps: usize,
) -> Result<[[S; 2]; 2], DynamicsError> {
    let ex = Point2::new(h, S::zero());
    let ey = Point2::new(S::zero(), h);
    let two_h = h + h;
    let dx = (time_one_map(system, x + ex, steps)? - time_one_map(system, x - ex, steps)?) * (S::one() / two_h);
    let dy = (time_one_map(system, x + ey, steps)? - time_one_map(system, x - ey, steps)?) * (S::one() / two_h);
    Ok([[dx.x, dy.x], [dx.y, dy.y]])
}

/// Levenberg–Marquardt iteration on `φ(x) − x`. Handles the rank-deficient
/// Jacobians of degenerate fixed circles. Returns `None` on divergence.
pub fn refine_fixed_point<S: Scalar>(
    system: &HamiltonianSystem<S>,
    x0: Point2<S>,
    bounds: Option<Rect<S>>,
    opts: &NewtonOptions,
) -> Option<Point2<S>> {
    let tol = S::lit(opts.fixed_tol);
    let h = S::lit(opts.fd_step);
    let residual = |x: Point2<S>| time_one_map(system, x, opts.steps).ok().map(|y| y - x);
    let mut x = x0;
    let mut r = residual(x)?;
    let mut lambda = S::lit(1e-6);
    for _ in 0..opts.max_iter {
        if r.norm() < tol {
            return Some(x);
        }
        let j = jacobian(system, x, h, opts.steps).ok()?;
        // J of the residual map is Dφ − I.
        let a = [[j[0][0] - S::one(), j[0][1]], [j[1][0], j[1][1] - S::one()]];
        let jtj = [
            [a[0][0] * a[0][0] + a[1][0] * a[1][0], a[0][0] * a[0][1] + a[1][0] * a[1][1]],
            [a[0][1] * a[0][0] + a[1][1] * a[1][0], a[0][1] * a[0][1] + a[1][1] * a[1][1]],
        ];
        let jtr = [a[0][0] * r.x + a[1][0] * r.y, a[0][1] * r.x + a[1][1] * r.y];
        let scale = (jtj[0][0] + jtj[1][1]).max(S::lit(1e-30));
        let mut accepted = false;
        for _ in 0..12 {
            let damp = lambda * scale;
            let m = [[jtj[0][0] + damp, jtj[0][1]], [jtj[1][0], jtj[1][1] + damp]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == S::zero() || !det.is_finite() {
                lambda *= S::lit(10.0);
                continue;
            }
            let step =
                Point2::new(-(m[1][1] * jtr[0] - m[0][1] * jtr[1]) / det, -(m[0][0] * jtr[1] - m[1][0] * jtr[0]) / det);
            let candidate = x + step;
            if !candidate.is_finite() {
                return None;
            }
            if let Some(b) = bounds {
                if !b.contains(candidate) {
                    return None;
                }
            }
            let r_new = residual(candidate)?;
            if r_new.norm() < r.norm() {
                x = candidate;
                r = r_new;
                lambda = (lambda * S::lit(0.1)).max(S::lit(1e-15));
                accepted = true;
                break;
            }
            lambda *= S::lit(10.0);
        }
        if !accepted {
            break;
        }
    }
    (r.norm() < tol).then_some(x)
}

/// Grid-seeded search for fixed points of the time-one map inside `region`.
pub fn find_fixed_points<S: Scalar>(
    system: &HamiltonianSystem<S>,
    region: Rect<S>,
    resolution: usize,
    opts: &NewtonOptions,
) -> Result<FixedPointSearch<S>, DynamicsError> {
    if resolution < 32 {
        return Err(DynamicsError::Unsupported(format!("seed grid resolution must be at least 32, got {resolution}")));
    }
    let n = resolution;
    let cell = Point2::new(region.width() / S::lit(n as f64), region.height() / S::lit(n as f64));
    let offset = Point2::new(cell.x * S::lit(opts.seed_offset), cell.y * S::lit(opts.seed_offset * 0.61));
    let slack = S::lit(opts.box_slack);
    let bounds = Rect::new(
        region.min - Point2::new(region.width() * slack, region.height() * slack),
        region.max + Point2::new(region.width() * slack, region.height() * slack),
    );
    let tol = S::lit(opts.fixed_tol);

    let seeds: Vec<(usize, usize, Point2<S>)> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| (i, j, region.cell_center(i, j, n, n) + offset))
        .collect();

    // A seed is already fixed, converges to a point, or is discarded.
    #[derive(Clone, Copy)]
    enum Outcome<S> {
        Fixed,
        Converged(Point2<S>),
        Lost,
    }

    let outcomes: Vec<Outcome<S>> = seeds
        .par_iter()
        .map(|&(_, _, x)| {
            match time_one_map(system, x, opts.steps) {
                Ok(y) if y.distance(x) < tol => return Outcome::Fixed,
                Ok(_) => {}
                Err(_) => return Outcome::Lost,
            }
            match refine_fixed_point(system, x, Some(bounds), opts) {
                Some(p) => Outcome::Converged(p),
                None => Outcome::Lost,
            }
        })
        .collect();

    let mut fixed = vec![false; n * n];
    for (k, o) in outcomes.iter().enumerate() {
        if matches!(o, Outcome::Fixed) {
            fixed[k] = true;
        }
    }
    let fixed_seeds = fixed.iter().filter(|&&f| f).count();

    let mut points: Vec<Point2<S>> = Vec::new();
    let merge = S::lit(opts.merge_radius);
    let push_point = |p: Point2<S>, points: &mut Vec<Point2<S>>| {
        if !points.iter().any(|q| q.distance(p) < merge) {
            points.push(p);
        }
    };

    let mut regions = Vec::new();
    let mut seen = vec![false; n * n];
    for start in 0..n * n {
        if !fixed[start] || seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut cells = Vec::new();
        while let Some(k) = stack.pop() {
            let (i, j) = (k % n, k / n);
            cells.push((i, j));
            let mut visit = |ii: usize, jj: usize| {
                let kk = jj * n + ii;
                if fixed[kk] && !seen[kk] {
                    seen[kk] = true;
                    stack.push(kk);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < n {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < n {
                visit(i, j + 1);
            }
        }
        cells.sort_by_key(|&(i, j)| (j, i));
        if cells.len() == 1 {
            push_point(seeds[start].2, &mut points);
        } else {
            let (i, j) = cells[cells.len() / 2];
            regions.push(SeedRegion { representative: seeds[j * n + i].2, cells });
        }
    }

    for o in &outcomes {
        if let Outcome::Converged(p) = o {
            push_point(*p, &mut points);
        }
    }

    Ok(FixedPointSearch { points, regions, seeds: n * n, fixed_seeds })
}
