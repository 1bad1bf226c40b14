//! Strands of periodic points, their pairwise winding numbers and the nesting
//! order of autonomous trajectories.

mod cover;
mod nesting;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Trajectory;
use crate::scalar::Scalar;

pub use cover::{lift_strand, set_valued_winding, SurfaceModel, DEFAULT_DECK_WINDOW};
pub use nesting::{nesting_order, strand_loop, NestingOptions, NestingOrder, StrandLoop};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BraidError {
    #[error("strand set is empty")]
    Empty,
    #[error("duplicate strand label {0:?}")]
    DuplicateLabel(String),
    #[error("strand {0:?} is not sampled on the common time grid")]
    GridMismatch(String),
    #[error("strand {label:?} does not close up (defect {defect})")]
    NotClosed { label: String, defect: f64 },
    #[error("strands {p:?} and {q:?} collide (distance {distance} at sample {sample})")]
    Collision { p: String, q: String, distance: f64, sample: usize },
    #[error("winding of {p:?} around {q:?} is {value} turns, not close to an integer; refine the time grid")]
    Resolution { p: String, q: String, value: f64 },
    #[error("strand {0:?} is not a point or a simple closed loop")]
    NotSimple(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraidOptions {
    pub collision_tol: f64,
    pub closure_tol: f64,
    /// Largest accepted distance of the total turn count from an integer.
    pub resolution_tol: f64,
}

impl Default for BraidOptions {
    fn default() -> Self {
        Self { collision_tol: 1e-4, closure_tol: 1e-6, resolution_tol: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strand<S> {
    pub label: String,
    pub trajectory: Trajectory<S>,
}

/// Labelled closed strands on a common time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrandSet<S> {
    strands: Vec<Strand<S>>,
}

impl<S: Scalar> StrandSet<S> {
    /// Validates labels, the shared grid, closure and pairwise separation.
    pub fn new(strands: Vec<Strand<S>>, opts: &BraidOptions) -> Result<Self, BraidError> {
        let set = Self::unchecked(strands)?;
        let closure = S::lit(opts.closure_tol);
        for s in &set.strands {
            if !(s.trajectory.closure_defect < closure) {
                return Err(BraidError::NotClosed {
                    label: s.label.clone(),
                    defect: s.trajectory.closure_defect.as_f64(),
                });
            }
        }
        let n = set.strands.len();
        for i in 0..n {
            for j in i + 1..n {
                set.check_separation(i, j, opts)?;
            }
        }
        Ok(set)
    }

    /// Checks labels and the shared grid only.
    pub fn unchecked(strands: Vec<Strand<S>>) -> Result<Self, BraidError> {
        let first = strands.first().ok_or(BraidError::Empty)?;
        for (i, s) in strands.iter().enumerate() {
            if strands[..i].iter().any(|o| o.label == s.label) {
                return Err(BraidError::DuplicateLabel(s.label.clone()));
            }
            if s.trajectory.times != first.trajectory.times || s.trajectory.is_empty() {
                return Err(BraidError::GridMismatch(s.label.clone()));
            }
        }
        Ok(Self { strands })
    }

    /// Pairs labels with trajectories in order.
    pub fn from_trajectories<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        trajectories: Vec<Trajectory<S>>,
        opts: &BraidOptions,
    ) -> Result<Self, BraidError> {
        let strands = labels
            .into_iter()
            .zip(trajectories)
            .map(|(label, trajectory)| Strand { label: label.into(), trajectory })
            .collect();
        Self::new(strands, opts)
    }

    fn check_separation(&self, i: usize, j: usize, opts: &BraidOptions) -> Result<(), BraidError> {
        let (a, b) = (&self.strands[i], &self.strands[j]);
        let (sample, distance) = a
            .trajectory
            .positions
            .iter()
            .zip(&b.trajectory.positions)
            .map(|(&p, &q)| p.distance(q))
            .enumerate()
            .fold((0, S::infinity()), |acc, (k, d)| if d < acc.1 { (k, d) } else { acc });
        if !(distance > S::lit(opts.collision_tol)) {
            return Err(BraidError::Collision {
                p: a.label.clone(),
                q: b.label.clone(),
                distance: distance.as_f64(),
                sample,
            });
        }
        Ok(())
    }

    pub fn strands(&self) -> &[Strand<S>] {
        &self.strands
    }

    pub fn len(&self) -> usize {
        self.strands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.strands.iter().map(|s| s.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.strands.iter().position(|s| s.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&Strand<S>> {
        self.strands.iter().find(|s| s.label == label)
    }
}

/// Total turn count of `p − q` over the period, before rounding.
pub fn winding_turns<S: Scalar>(p: &Trajectory<S>, q: &Trajectory<S>) -> S {
    turn_increments(p, q).0
}

/// Total turns and the largest single-step angle increment (radians).
fn turn_increments<S: Scalar>(p: &Trajectory<S>, q: &Trajectory<S>) -> (S, S) {
    let n = p.positions.len().min(q.positions.len());
    let diff = |k: usize| p.positions[k] - q.positions[k];
    let mut total = S::zero();
    let mut largest = S::zero();
    for k in 0..n {
        let a = diff(k);
        let b = diff((k + 1) % n);
        let step = a.cross(b).atan2(a.dot(b));
        largest = largest.max(step.abs());
        total += step;
    }
    (total / S::two_pi(), largest)
}

/// Degree of the argument of `p(t) − q(t)` over one period.
pub fn winding_number<S: Scalar>(p: &Strand<S>, q: &Strand<S>, opts: &BraidOptions) -> Result<i64, BraidError> {
    let (tp, tq) = (&p.trajectory, &q.trajectory);
    if tp.times != tq.times {
        return Err(BraidError::GridMismatch(q.label.clone()));
    }
    for s in [p, q] {
        if !(s.trajectory.closure_defect < S::lit(opts.closure_tol)) {
            return Err(BraidError::NotClosed { label: s.label.clone(), defect: s.trajectory.closure_defect.as_f64() });
        }
    }
    let pair = StrandSet { strands: vec![p.clone(), q.clone()] };
    pair.check_separation(0, 1, opts)?;
    rounded(tp, tq, &p.label, &q.label, opts)
}

/// Rounds the turn count, rejecting non-integer totals and steps so large
/// that the unwrapped angle may have aliased.
fn rounded<S: Scalar>(
    tp: &Trajectory<S>,
    tq: &Trajectory<S>,
    p: &str,
    q: &str,
    opts: &BraidOptions,
) -> Result<i64, BraidError> {
    let (turns, largest) = turn_increments(tp, tq);
    let r = turns.round();
    if (turns - r).abs() > S::lit(opts.resolution_tol) || !turns.is_finite() || largest > S::FRAC_PI_2() {
        return Err(BraidError::Resolution { p: p.to_string(), q: q.to_string(), value: turns.as_f64() });
    }
    Ok(r.to_i64().expect("finite turn count"))
}

/// Symmetric integer matrix of pairwise windings; the diagonal is undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWindingMatrix", into = "RawWindingMatrix")]
pub struct WindingMatrix {
    labels: Vec<String>,
    entries: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawWindingMatrix {
    labels: Vec<String>,
    /// Rows with `null` on the diagonal.
    rows: Vec<Vec<Option<i64>>>,
}

impl TryFrom<RawWindingMatrix> for WindingMatrix {
    type Error = String;

    fn try_from(raw: RawWindingMatrix) -> Result<Self, String> {
        let k = raw.labels.len();
        if raw.rows.len() != k || raw.rows.iter().any(|r| r.len() != k) {
            return Err(format!("winding matrix must be {k}×{k}"));
        }
        let rows: Vec<Vec<i64>> = raw.rows.iter().map(|r| r.iter().map(|v| v.unwrap_or(0)).collect()).collect();
        WindingMatrix::from_rows(raw.labels, &rows)
    }
}

impl From<WindingMatrix> for RawWindingMatrix {
    fn from(w: WindingMatrix) -> Self {
        let k = w.size();
        let rows = (0..k).map(|i| (0..k).map(|j| w.get(i, j)).collect()).collect();
        RawWindingMatrix { labels: w.labels, rows }
    }
}

impl WindingMatrix {
    /// Builds a matrix from full rows; diagonal entries are ignored.
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<i64>]) -> Result<Self, String> {
        let k = labels.len();
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(format!("winding matrix must be {k}×{k}"));
        }
        for i in 0..k {
            if labels[..i].contains(&labels[i]) {
                return Err(format!("duplicate label {:?}", labels[i]));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(format!(
                        "entries ({}, {}) and ({}, {}) differ",
                        labels[i], labels[j], labels[j], labels[i]
                    ));
                }
            }
        }
        let mut entries = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    entries[i * k + j] = rows[i][j];
                }
            }
        }
        Ok(Self { labels, entries })
    }

    /// Builds a matrix from upper-triangular pairs `(i, j, w)`; missing pairs are 0.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize, i64)]) -> Result<Self, String> {
        let k = labels.len();
        let mut rows = vec![vec![0; k]; k];
        for &(i, j, w) in pairs {
            if i >= k || j >= k || i == j {
                return Err(format!("invalid pair ({i}, {j})"));
            }
            rows[i][j] = w;
            rows[j][i] = w;
        }
        Self::from_rows(labels, &rows)
    }

    pub fn zeros(labels: Vec<String>) -> Self {
        let k = labels.len();
        Self { labels, entries: vec![0; k * k] }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `None` on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        (i != j).then(|| self.entries[i * self.size() + j])
    }

    /// Off-diagonal entry; panics on the diagonal.
    pub fn w(&self, i: usize, j: usize) -> i64 {
        self.get(i, j).expect("winding of a strand with itself is undefined")
    }

    pub fn by_label(&self, p: &str, q: &str) -> Option<i64> {
        self.get(self.index_of(p)?, self.index_of(q)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..k).all(|j| self.entries[i * k + j] == self.entries[j * k + i]))
    }

    /// Restriction to the strands `indices`, in the given order.
    pub fn principal(&self, indices: &[usize]) -> Self {
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let k = indices.len();
        let mut entries = vec![0; k * k];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                if a != b {
                    entries[a * k + b] = self.w(i, j);
                }
            }
        }
        Self { labels, entries }
    }

    /// Entrywise sum; labels must agree.
    pub fn add(&self, other: &Self) -> Option<Self> {
        (self.labels == other.labels).then(|| Self {
            labels: self.labels.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Windings of all pairs of strands.
pub fn winding_matrix<S: Scalar>(strands: &StrandSet<S>, opts: &BraidOptions) -> Result<WindingMatrix, BraidError> {
    let k = strands.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| winding_number(&strands.strands[i], &strands.strands[j], opts).map(|w| (i, j, w)))
        .collect::<Result<Vec<_>, _>>()?;
    let m = WindingMatrix::from_pairs(strands.labels(), &values).expect("pairs built from valid indices");
    debug_assert!(m.is_symmetric());
    Ok(m)
}
