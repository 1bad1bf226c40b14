//! Containment order of the disks bounded by autonomous trajectories.

use serde::{Deserialize, Serialize};

use super::{BraidError, Strand, StrandSet};
use crate::geometry::{hausdorff_distance, polygon_is_simple, polygon_winding, Point2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestingOptions {
    /// Strands moving less than this are treated as equilibria.
    pub constant_tol: f64,
    /// Loops closer than this in Hausdorff distance are the same trajectory.
    pub hausdorff_tol: f64,
    pub max_vertices: usize,
}

impl Default for NestingOptions {
    fn default() -> Self {
        Self { constant_tol: 1e-9, hausdorff_tol: 1e-3, max_vertices: 512 }
    }
}

/// Weak partial order on strands: strands with equal trajectories form a
/// class; classes are ordered by containment of their bounded disks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingOrder {
    labels: Vec<String>,
    /// `class_of[i]` is the class index of strand `i`.
    class_of: Vec<usize>,
    /// `below[a][b]`: the disk of class `a` lies strictly inside that of class `b`.
    below: Vec<Vec<bool>>,
}

impl NestingOrder {
    /// Builds an order from class assignments and strict class relations.
    /// The relation is closed transitively; cycles are rejected.
    pub fn from_relations(
        labels: Vec<String>,
        class_of: Vec<usize>,
        relations: &[(usize, usize)],
    ) -> Result<Self, String> {
        if class_of.len() != labels.len() {
            return Err("one class per label required".into());
        }
        let n = class_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut below = vec![vec![false; n]; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(format!("relation ({a}, {b}) names a missing class"));
            }
            below[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if below[i][k] {
                    for j in 0..n {
                        if below[k][j] {
                            below[i][j] = true;
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| below[i][i]) {
            return Err("relations contain a cycle".into());
        }
        Ok(Self { labels, class_of, below })
    }

    /// Total order with `order[0]` innermost.
    pub fn chain(labels: Vec<String>, order: &[usize]) -> Result<Self, String> {
        let mut class_of = vec![0; labels.len()];
        for (rank, &i) in order.iter().enumerate() {
            class_of[i] = rank;
        }
        let rel: Vec<(usize, usize)> = (1..order.len()).map(|r| (r - 1, r)).collect();
        Self::from_relations(labels, class_of, &rel)
    }

    pub fn antichain(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self { class_of: (0..n).collect(), below: vec![vec![false; n]; n], labels }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_count(&self) -> usize {
        self.below.len()
    }

    pub fn same_trajectory(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }

    /// `c_i ≤ c_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.class_of[i], self.class_of[j]);
        a == b || self.below[a][b]
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn is_chain(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|i| (0..n).all(|j| self.comparable(i, j)))
    }

    pub fn is_antichain(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !self.comparable(i, j) || self.same_trajectory(i, j)))
    }
}

/// A strand reduced to its image: one point, or one simple lap.
#[derive(Debug, Clone, PartialEq)]
pub enum StrandLoop<S> {
    Point(Point2<S>),
    Loop(Vec<Point2<S>>),
}

impl<S: Scalar> StrandLoop<S> {
    fn vertices(&self) -> &[Point2<S>] {
        match self {
            StrandLoop::Point(p) => std::slice::from_ref(p),
            StrandLoop::Loop(v) => v,
        }
    }

    fn encloses(&self, p: Point2<S>) -> bool {
        match self {
            StrandLoop::Point(_) => false,
            StrandLoop::Loop(v) => polygon_winding(v, p) != 0,
        }
    }
}

/// Image of a strand as a point or a simple polygon (first lap of a
/// multiply covered loop, downsampled).
pub fn strand_loop<S: Scalar>(strand: &Strand<S>, opts: &NestingOptions) -> Result<StrandLoop<S>, BraidError> {
    let tr = &strand.trajectory;
    if tr.max_displacement() < S::lit(opts.constant_tol) {
        return Ok(StrandLoop::Point(tr.start()));
    }
    let pts = &tr.positions;
    let spacing = pts.windows(2).map(|w| w[0].distance(w[1])).fold(S::zero(), S::max);
    let near = spacing * S::lit(2.0);
    let start = pts[0];
    let mut end = pts.len() - 1;
    let mut left = false;
    for (k, &p) in pts.iter().enumerate().skip(1) {
        let d = p.distance(start);
        if !left && d > near {
            left = true;
        } else if left && d <= near {
            // Pick the closest sample of this return visit.
            let mut best = k;
            for (kk, q) in pts.iter().enumerate().skip(k) {
                if q.distance(start) > near {
                    break;
                }
                if q.distance(start) < pts[best].distance(start) {
                    best = kk;
                }
            }
            end = best;
            break;
        }
    }
    let lap = &pts[..end.max(1)];
    let stride = lap.len().div_ceil(opts.max_vertices.max(3));
    let poly: Vec<Point2<S>> = lap.iter().step_by(stride.max(1)).copied().collect();
    if poly.len() < 3 || !polygon_is_simple(&poly) {
        return Err(BraidError::NotSimple(strand.label.clone()));
    }
    Ok(StrandLoop::Loop(poly))
}

/// Nesting order of the strands of an autonomous flow.
pub fn nesting_order<S: Scalar>(strands: &StrandSet<S>, opts: &NestingOptions) -> Result<NestingOrder, BraidError> {
    let loops: Vec<StrandLoop<S>> = strands.strands().iter().map(|s| strand_loop(s, opts)).collect::<Result<_, _>>()?;
    let n = loops.len();
    let tol = S::lit(opts.hausdorff_tol);

    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let found = reps.iter().position(|&r| hausdorff_distance(loops[r].vertices(), loops[i].vertices()) < tol);
        class_of[i] = match found {
            Some(c) => c,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        };
    }

    let mut relations = Vec::new();
    for (a, &ra) in reps.iter().enumerate() {
        for (b, &rb) in reps.iter().enumerate() {
            if a != b && loops[ra].vertices().iter().all(|&p| loops[rb].encloses(p)) {
                relations.push((a, b));
            }
        }
    }
    NestingOrder::from_relations(strands.labels(), class_of, &relations)
        .map_err(|e| BraidError::Unsupported(format!("inconsistent nesting: {e}")))
}
