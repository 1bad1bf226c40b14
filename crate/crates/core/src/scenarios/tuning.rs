//! Grid search over the free profile parameters for the widest spectral gap.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ProfileParams, DELTA_CENTER};
use crate::geometry::Point2;
use crate::profiles::{
    hamiltonian_from_profile, validate_profile, AlphaParams, BetaParams, ProfileSpec, RadialProfile, ValidationOptions,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningGrid {
    pub alpha_center: Vec<f64>,
    pub alpha_slope: Vec<f64>,
    pub beta_center: Vec<f64>,
    pub beta_slope: Vec<f64>,
}

fn steps(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl Default for TuningGrid {
    fn default() -> Self {
        Self {
            alpha_center: steps(2.1, 2.5, 9),
            alpha_slope: steps(-30.0, -10.0, 11),
            beta_center: steps(3.1, 3.5, 9),
            beta_slope: steps(-40.0, -10.0, 16),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningCandidate {
    pub profiles: ProfileParams,
    /// Smallest gap between the expected action values.
    pub epsilon: f64,
    pub values: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub best: Option<TuningCandidate>,
    pub evaluated: usize,
    pub rejected: usize,
}

/// Action values of the fixed components of the two-rotation map, from the
/// closed form `H(r) + n·π·r²` on a circle of radius `r` turning `n` times.
pub fn expected_actions(profiles: &ProfileParams) -> Option<Vec<(String, f64)>> {
    let alpha = RadialProfile::alpha(&profiles.alpha);
    let beta = RadialProfile::beta(&profiles.beta);
    let ha = hamiltonian_from_profile(&alpha, Point2::origin()).ok()?;
    let hb = hamiltonian_from_profile(&beta, DELTA_CENTER).ok()?;
    let k = |h: &crate::profiles::RadialHamiltonian<f64>, r: f64, n: i64| h.value_at_radius(r) + n as f64 * PI * r * r;
    let c1 = k(&ha, 0.8, 1);
    let mut values = vec![
        ("s".to_string(), ha.value_at_radius(0.0)),
        ("alpha-circle-2".to_string(), k(&ha, 0.1, 2)),
        ("alpha-plateau-1".to_string(), c1),
        ("outer-region".to_string(), 0.0),
        ("p2".to_string(), c1 + hb.value_at_radius(0.0)),
    ];
    for (r, n) in beta.level_structure().circles {
        values.push((format!("beta-circle-{n}"), c1 + k(&hb, r, n)));
    }
    Some(values)
}

fn min_gap(values: &[(String, f64)]) -> f64 {
    let mut v: Vec<f64> = values.iter().map(|x| x.1).collect();
    v.sort_by(f64::total_cmp);
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// Evaluates every admissible grid point and keeps the largest gap; ties go
/// to the earliest point in grid order.
pub fn tune_profiles(grid: &TuningGrid) -> TuningReport {
    let vopts = ValidationOptions::default();
    let mut best: Option<TuningCandidate> = None;
    let (mut evaluated, mut rejected) = (0, 0);
    for &ac in &grid.alpha_center {
        for &asl in &grid.alpha_slope {
            let alpha = AlphaParams { center_turns: ac, inner_slope: asl };
            if !validate_profile(&RadialProfile::<f64>::alpha(&alpha), ProfileSpec::Alpha, &vopts).is_satisfied() {
                rejected += grid.beta_center.len() * grid.beta_slope.len();
                continue;
            }
            for &bc in &grid.beta_center {
                for &bsl in &grid.beta_slope {
                    let beta = BetaParams { center_turns: bc, inner_slope: bsl };
                    if !validate_profile(&RadialProfile::<f64>::beta(&beta), ProfileSpec::Beta, &vopts).is_satisfied() {
                        rejected += 1;
                        continue;
                    }
                    let profiles = ProfileParams { alpha, beta };
                    let Some(values) = expected_actions(&profiles) else {
                        rejected += 1;
                        continue;
                    };
                    evaluated += 1;
                    let epsilon = min_gap(&values);
                    if best.as_ref().is_none_or(|b| epsilon > b.epsilon) {
                        best = Some(TuningCandidate { profiles, epsilon, values });
                    }
                }
            }
        }
    }
    TuningReport { best, evaluated, rejected }
}
