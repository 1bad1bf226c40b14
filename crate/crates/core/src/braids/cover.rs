//! Winding sets over lifts to the universal cover of the annulus and the
//! flat torus.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{rounded, winding_number, BraidError, BraidOptions, Strand};
use crate::dynamics::Trajectory;
use crate::geometry::Point2;
use crate::scalar::Scalar;

pub const DEFAULT_DECK_WINDOW: i64 = 3;

/// Surface chart conventions:
/// - `Disk`: the plane itself.
/// - `Annulus`: `(ℝ/ℤ) × (0, 1)`, covered by `ℝ × (0, 1)` with unit horizontal deck translations.
/// - `Torus`: `ℝ²/ℤ²`, covered by `ℝ²` with the unit lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceModel {
    Disk,
    Annulus,
    Torus,
}

impl SurfaceModel {
    fn periodic(self) -> (bool, bool) {
        match self {
            SurfaceModel::Disk => (false, false),
            SurfaceModel::Annulus => (true, false),
            SurfaceModel::Torus => (true, true),
        }
    }

    /// Deck translations with every coordinate in `[-window, window]`.
    pub fn deck_translations(self, window: i64) -> Vec<(i64, i64)> {
        let w = window.abs();
        match self {
            SurfaceModel::Disk => vec![(0, 0)],
            SurfaceModel::Annulus => (-w..=w).map(|k| (k, 0)).collect(),
            SurfaceModel::Torus => (-w..=w).flat_map(|i| (-w..=w).map(move |j| (i, j))).collect(),
        }
    }
}

/// Lifts a strand given in chart coordinates by unwrapping jumps of more
/// than half a period. Fails if the lift does not close up.
pub fn lift_strand<S: Scalar>(
    model: SurfaceModel,
    strand: &Strand<S>,
    opts: &BraidOptions,
) -> Result<Trajectory<S>, BraidError> {
    let (px, py) = model.periodic();
    let tr = &strand.trajectory;
    let mut positions = Vec::with_capacity(tr.positions.len());
    let mut shift = Point2::origin();
    for (k, &p) in tr.positions.iter().enumerate() {
        if k > 0 {
            let prev = tr.positions[k - 1];
            if px {
                shift.x -= (p.x - prev.x).round();
            }
            if py {
                shift.y -= (p.y - prev.y).round();
            }
        }
        positions.push(p + shift);
    }
    let closure_defect = positions[0].distance(positions[positions.len() - 1]);
    if !(closure_defect < S::lit(opts.closure_tol)) {
        return Err(BraidError::Unsupported(format!(
            "strand {:?} is not contractible in the {model:?} model (lift defect {})",
            strand.label,
            closure_defect.as_f64()
        )));
    }
    Ok(Trajectory { id: tr.id, times: tr.times.clone(), positions, closure_defect })
}

/// Windings of one lift of `p` against all lifts of `q` whose deck
/// translation lies in the window.
pub fn set_valued_winding<S: Scalar>(
    model: SurfaceModel,
    p: &Strand<S>,
    q: &Strand<S>,
    window: i64,
    opts: &BraidOptions,
) -> Result<BTreeSet<i64>, BraidError> {
    if model == SurfaceModel::Disk {
        return Ok(BTreeSet::from([winding_number(p, q, opts)?]));
    }
    if p.trajectory.times != q.trajectory.times {
        return Err(BraidError::GridMismatch(q.label.clone()));
    }
    let lp = lift_strand(model, p, opts)?;
    let lq = lift_strand(model, q, opts)?;
    let mut out = BTreeSet::new();
    for (i, j) in model.deck_translations(window) {
        let d = Point2::new(S::lit(i as f64), S::lit(j as f64));
        let shifted = Trajectory {
            id: lq.id,
            times: lq.times.clone(),
            positions: lq.positions.iter().map(|&x| x + d).collect(),
            closure_defect: lq.closure_defect,
        };
        let distance =
            lp.positions.iter().zip(&shifted.positions).map(|(&a, &b)| a.distance(b)).fold(S::infinity(), S::min);
        if !(distance > S::lit(opts.collision_tol)) {
            return Err(BraidError::Collision {
                p: p.label.clone(),
                q: format!("{}+({i},{j})", q.label),
                distance: distance.as_f64(),
                sample: 0,
            });
        }
        out.insert(rounded(&lp, &shifted, &p.label, &q.label, opts)?);
    }
    Ok(out)
}
