//! Random autonomous systems, used to check that the obstruction never
//! fires on braids that an autonomous flow actually generates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{stage, ScenarioError, Stage};
use crate::braids::{nesting_order, winding_matrix, BraidOptions, NestingOptions, StrandSet, WindingMatrix};
use crate::dynamics::{integrate_flow, HamiltonianSystem, DEFAULT_STEPS};
use crate::geometry::Point2;
use crate::obstruction::{autonomous_consistency, find_obstruction, ConsistencyReport, ObstructionCertificate};
use crate::profiles::{hamiltonian_from_profile, Knot, RadialProfile};

const MAX_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: Point2<f64>,
    pub support: f64,
    pub profile: RadialProfile<f64>,
}

#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub clusters: Vec<Cluster>,
    pub system: HamiltonianSystem<f64>,
    pub labels: Vec<String>,
    pub points: Vec<Point2<f64>>,
}

/// Staircase profile on `[0, support]` with the given plateau levels, a
/// non-integer center value above the first level and zero slopes at every
/// knot.
fn staircase(support: f64, levels: &[i64], center_frac: f64, sign: f64) -> RadialProfile<f64> {
    let m = levels.len();
    let u = support / (2 * m + 2) as f64;
    let mut knots = vec![Knot::new(0.0, sign * (levels[0] as f64 + center_frac), 0.0)];
    for (i, &l) in levels.iter().enumerate() {
        let lo = (2 * i + 1) as f64 * u;
        knots.push(Knot::new(lo, sign * l as f64, 0.0));
        knots.push(Knot::new(lo + u, sign * l as f64, 0.0));
    }
    knots.push(Knot::new((2 * m + 1) as f64 * u, 0.0, 0.0));
    knots.push(Knot::new(support, 0.0, 0.0));
    RadialProfile::from_knots(knots).expect("increasing staircase knots")
}

/// Draws one to three rotation clusters with disjoint supports and places
/// marked points at the centers, on plateaus and outside all supports.
pub fn random_autonomous_system(rng: &mut impl Rng) -> RandomSystem {
    let n_clusters = rng.gen_range(1..=3);
    let mut clusters: Vec<Cluster> = Vec::new();
    for _ in 0..200 {
        if clusters.len() == n_clusters {
            break;
        }
        let support = rng.gen_range(0.15..0.45);
        let reach = 0.95 - support;
        let center = Point2::new(rng.gen_range(-reach..reach), rng.gen_range(-reach..reach));
        if center.norm() > reach || clusters.iter().any(|c| c.center.distance(center) < c.support + support + 0.02) {
            continue;
        }
        let n_levels = rng.gen_range(1..=3);
        let mut levels: Vec<i64> = Vec::new();
        while levels.len() < n_levels {
            let l = rng.gen_range(1..=4);
            if !levels.contains(&l) {
                levels.push(l);
            }
        }
        levels.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if rng.gen_bool(0.3) { -1.0 } else { 1.0 };
        let profile = staircase(support, &levels, rng.gen_range(0.2..0.5), sign);
        clusters.push(Cluster { center, support, profile });
    }

    let mut points = Vec::new();
    for c in &clusters {
        points.push(c.center);
        let plateaus = c.profile.level_structure().plateaus;
        for p in plateaus.iter().filter(|p| p.level != 0) {
            let Some(to) = p.to else { continue };
            let r = 0.5 * (p.from + to);
            let copies = if rng.gen_bool(0.3) { 2 } else { 1 };
            for _ in 0..copies {
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                points.push(c.center + Point2::new(a.cos(), a.sin()) * r);
            }
        }
    }
    for _ in 0..50 {
        let p = Point2::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
        if p.norm() < 0.9 && clusters.iter().all(|c| c.center.distance(p) > c.support + 0.02) {
            points.push(p);
            break;
        }
    }
    points.truncate(MAX_POINTS);
    // Copies on one circle may land too close together; keep well separated points.
    let mut kept: Vec<Point2<f64>> = Vec::new();
    for p in points {
        if kept.iter().all(|q| q.distance(p) > 1e-2) {
            kept.push(p);
        }
    }

    let parts: Vec<HamiltonianSystem<f64>> = clusters
        .iter()
        .map(|c| HamiltonianSystem::radial(hamiltonian_from_profile(&c.profile, c.center).expect("finite staircase")))
        .collect();
    let system = if parts.len() == 1 { parts[0].clone() } else { HamiltonianSystem::Sum(parts) };
    let labels = (0..kept.len()).map(|i| format!("x{i}")).collect();
    RandomSystem { clusters, system, labels, points: kept }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineCase {
    pub index: usize,
    pub seed: u64,
    pub clusters: usize,
    pub winding: WindingMatrix,
    pub nesting_classes: usize,
    pub consistency: ConsistencyReport,
    pub obstruction: Option<ObstructionCertificate>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSuiteReport {
    pub seed: u64,
    pub cases: Vec<BaselineCase>,
    pub all_passed: bool,
}

/// Runs `n` random autonomous cases; case `i` draws from a generator seeded
/// with `seed + i`. A case passes when windings agree with the nesting order
/// and no obstruction certificate is produced.
pub fn autonomous_baseline_suite(seed: u64, n: usize) -> Result<BaselineSuiteReport, ScenarioError> {
    let opts = BraidOptions::default();
    let mut cases = Vec::with_capacity(n);
    for index in 0..n {
        let case_seed = seed.wrapping_add(index as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
        let rs = random_autonomous_system(&mut rng);
        let trajectories = integrate_flow(&rs.system, &rs.points, DEFAULT_STEPS).map_err(stage(Stage::Baseline))?;
        let strands =
            StrandSet::from_trajectories(rs.labels.clone(), trajectories, &opts).map_err(stage(Stage::Baseline))?;
        let winding = winding_matrix(&strands, &opts).map_err(stage(Stage::Baseline))?;
        let order = nesting_order(&strands, &NestingOptions::default()).map_err(stage(Stage::Baseline))?;
        let consistency = autonomous_consistency(&winding, &order)
            .map_err(|e| ScenarioError::Stage { stage: Stage::Baseline, source: super::StageError::Other(e) })?;
        let obstruction = find_obstruction(&winding).map_err(stage(Stage::Baseline))?;
        let passed = consistency.is_consistent() && obstruction.is_none();
        cases.push(BaselineCase {
            index,
            seed: case_seed,
            clusters: rs.clusters.len(),
            winding,
            nesting_classes: order.class_count(),
            consistency,
            obstruction,
            passed,
        });
    }
    let all_passed = cases.iter().all(|c| c.passed);
    Ok(BaselineSuiteReport { seed, cases, all_passed })
}
