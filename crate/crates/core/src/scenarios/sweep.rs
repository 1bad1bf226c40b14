//! Persistence of the braid under small bump perturbations.

use serde::{Deserialize, Serialize};

use super::{scenario_braid, stage, ScenarioConfig, ScenarioError, Stage};
use crate::braids::{winding_matrix, StrandSet, SurfaceModel, WindingMatrix};
use crate::dynamics::{integrate_flow, refine_fixed_point, BumpPerturbation, HamiltonianSystem, NewtonOptions};
use crate::geometry::Point2;
use crate::spectrum::{hofer_length, HoferOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PersistenceStatus {
    /// Every marked point continued and the winding matrix is unchanged.
    Persisted,
    /// Every marked point continued but some winding changed.
    Changed,
    /// Some marked point could not be continued.
    OrbitLost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingChange {
    pub p: String,
    pub q: String,
    pub before: i64,
    pub after: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceRow {
    pub delta: f64,
    /// Hofer length of the perturbation, bounding the distance to the
    /// unperturbed map.
    pub hofer_bound: f64,
    pub below_half_epsilon: Option<bool>,
    pub status: PersistenceStatus,
    /// Largest distance of a continued point from its unperturbed position.
    pub max_drift: Option<f64>,
    pub points: Vec<Option<Point2<f64>>>,
    pub winding: Option<WindingMatrix>,
    pub changes: Vec<WindingChange>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub baseline: WindingMatrix,
    pub epsilon: Option<f64>,
    pub bump_center: Point2<f64>,
    pub bump_radius: f64,
    pub rows: Vec<PersistenceRow>,
    /// Smallest swept amplitude at which the braid did not persist.
    pub breaking_amplitude: Option<f64>,
}

/// Adds `−δ·bump` to the scenario generator for each `δ` (ascending) and
/// continues the marked fixed points from `δ = 0` in amplitude steps of at
/// most `max_step`. A point lost once stays lost. `epsilon` is the spectral gap of the unperturbed map, if known.
pub fn perturbation_sweep(
    config: &ScenarioConfig,
    deltas: &[f64],
    epsilon: Option<f64>,
) -> Result<PersistenceReport, ScenarioError> {
    if deltas.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(ScenarioError::Invalid("perturbation amplitudes must be finite and non-negative".into()));
    }
    if deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(ScenarioError::Invalid("perturbation amplitudes must be in ascending order".into()));
    }
    let settings = &config.sweep;
    if settings.substeps == 0
        || !(settings.bump_radius > 0.0)
        || !(settings.drift_limit > 0.0)
        || !(settings.max_step > 0.0)
    {
        return Err(ScenarioError::Invalid(
            "sweep needs substeps ≥ 1 and positive radius, step and drift limit".into(),
        ));
    }
    let (built, _, _, baseline) = scenario_braid(config)?;
    let mut center = Point2::new(settings.bump_center[0], settings.bump_center[1]);
    let mut radius = settings.bump_radius;
    if config.model != SurfaceModel::Disk {
        center = config.embedding.apply(center);
        radius *= config.embedding.scale;
    }
    let bump = |amplitude: f64| BumpPerturbation { center, radius, amplitude, envelope: settings.envelope };
    let perturbed =
        |delta: f64| HamiltonianSystem::Sum(vec![built.system.clone(), HamiltonianSystem::Bump(bump(-delta))]);
    let newton = NewtonOptions {
        fixed_tol: config.tolerances.fixed_point,
        steps: config.integrator.steps,
        max_iter: settings.newton_iterations,
        ..NewtonOptions::default()
    };
    let bopts = config.tolerances.braid_options();

    let mut rows = Vec::new();
    let mut current: Vec<Option<Point2<f64>>> = built.points.iter().copied().map(Some).collect();
    let mut current_delta = 0.0;
    for &delta in deltas {
        let hofer_bound = hofer_length(&HamiltonianSystem::Bump(bump(-delta)), &built.domain, &HoferOptions::default());
        let below_half_epsilon = epsilon.map(|e| hofer_bound < e / 2.0);
        let mut points = current.clone();
        let span = delta - current_delta;
        let substeps = settings.substeps.max((span / settings.max_step).ceil() as usize);
        for k in 1..=substeps {
            let d = current_delta + span * k as f64 / substeps as f64;
            let sys = perturbed(d);
            for (p, start) in points.iter_mut().zip(&built.points) {
                *p = p
                    .and_then(|x| refine_fixed_point(&sys, x, None, &newton))
                    .filter(|q| q.distance(*start) <= settings.drift_limit);
            }
        }
        let drifts: Vec<Option<f64>> =
            points.iter().zip(&built.points).map(|(p, s)| p.map(|p| p.distance(*s))).collect();
        let max_drift = drifts.iter().copied().collect::<Option<Vec<f64>>>().map(|v| v.into_iter().fold(0.0, f64::max));

        let mut row = PersistenceRow {
            delta,
            hofer_bound,
            below_half_epsilon,
            status: PersistenceStatus::OrbitLost,
            max_drift,
            points: points.clone(),
            winding: None,
            changes: Vec::new(),
            note: None,
        };
        let lost: Vec<&str> =
            built.labels.iter().zip(&points).filter(|(_, p)| p.is_none()).map(|(l, _)| l.as_str()).collect();
        current = points.clone();
        current_delta = delta;
        if !lost.is_empty() {
            row.note = Some(format!("lost: {}", lost.join(", ")));
            rows.push(row);
            continue;
        }
        let continued: Vec<Point2<f64>> = points.iter().map(|p| p.expect("all continued")).collect();
        let sys = perturbed(delta);
        let trajectories = integrate_flow(&sys, &continued, config.integrator.steps).map_err(stage(Stage::Sweep))?;
        let matrix = StrandSet::from_trajectories(built.labels.clone(), trajectories, &bopts)
            .and_then(|s| winding_matrix(&s, &bopts));
        match matrix {
            Ok(w) => {
                for i in 0..w.size() {
                    for j in 0..i {
                        if w.w(i, j) != baseline.w(i, j) {
                            row.changes.push(WindingChange {
                                p: built.labels[i].clone(),
                                q: built.labels[j].clone(),
                                before: baseline.w(i, j),
                                after: w.w(i, j),
                            });
                        }
                    }
                }
                row.status =
                    if row.changes.is_empty() { PersistenceStatus::Persisted } else { PersistenceStatus::Changed };
                row.winding = Some(w);
            }
            Err(e) => row.note = Some(e.to_string()),
        }
        rows.push(row);
    }
    let breaking_amplitude = rows.iter().find(|r| r.status != PersistenceStatus::Persisted).map(|r| r.delta);
    Ok(PersistenceReport { baseline, epsilon, bump_center: center, bump_radius: radius, rows, breaking_amplitude })
}
