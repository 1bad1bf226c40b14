use std::collections::BTreeMap;

use braidflow::braids::{nesting_order, winding_matrix, BraidOptions, NestingOptions, StrandSet, SurfaceModel};
use braidflow::dynamics::{integrate_flow, ComponentKind, HamiltonianSystem, DEFAULT_STEPS};
use braidflow::geometry::Point2;
use braidflow::obstruction::autonomous_consistency;
use braidflow::profiles::{hamiltonian_from_profile, Knot, RadialProfile};
use braidflow::scenarios::{
    annulus_embedding_scenario, autonomous_baseline_suite, perturbation_sweep, run_scenario, set_valued_with_window,
    tune_profiles, MarkedPoint, PersistenceStatus, ProfileParams, ScenarioConfig, ScenarioError, TuningGrid,
};
use braidflow::spectrum::ClauseStatus;

/// Spectral gap of the two-rotation map with the default profiles, frozen from the
/// closed-form action oracle.
const EPSILON_GOLDEN: f64 = 0.009_110_618_695;

/// First non-persisting amplitude of the default sweep.
const BREAKING_AMPLITUDE_GOLDEN: f64 = 0.1;

fn b_na_rows() -> Vec<Vec<i64>> {
    vec![vec![0, 2, 1, 1], vec![2, 0, 1, 1], vec![1, 1, 0, 3], vec![1, 1, 3, 0]]
}

fn rows(w: &braidflow::WindingMatrix) -> Vec<Vec<i64>> {
    (0..w.size()).map(|i| (0..w.size()).map(|j| if i == j { 0 } else { w.w(i, j) }).collect()).collect()
}

#[test]
fn paper_disk_reproduces_the_non_autonomous_braid() {
    let res = run_scenario(&ScenarioConfig::paper_disk(ProfileParams::default())).unwrap();
    assert_eq!(res.winding.labels(), ["s", "p1", "p2", "m"]);
    assert_eq!(rows(&res.winding), b_na_rows());
    let cert = res.obstruction.unwrap();
    assert_eq!(cert.subset, ["s", "p1", "p2", "m"]);
    assert!(res.admissibility.passed);
    for c in &res.admissibility.clauses {
        assert_ne!(c.status, ClauseStatus::Fail, "{}", c.id);
    }
    for v in &res.spectrum.values {
        assert!(v.spread < 1e-6);
    }
    assert!((res.spectrum.epsilon.unwrap() - EPSILON_GOLDEN).abs() < 1e-9);
}

#[test]
fn moon_alternatives_are_reported_with_their_windings() {
    let res = run_scenario(&ScenarioConfig::paper_disk(ProfileParams::default())).unwrap();
    let by_label: BTreeMap<&str, Vec<Option<i64>>> =
        res.auxiliary.iter().map(|a| (a.label.as_str(), a.windings.iter().map(|w| w.winding).collect())).collect();
    // On the β = 3 circle the moon picks up one extra turn about p2 from the α leg.
    assert_eq!(by_label["m-beta3"][..3], [Some(1), Some(1), Some(4)]);
    assert_eq!(by_label["m-printed"][..3], [Some(1), Some(1), Some(1)]);
    for a in &res.auxiliary {
        assert!(a.fixed_defect < 1e-8, "{} is not fixed", a.label);
    }
}

#[test]
fn winding_matrix_is_stable_under_finer_steps() {
    for steps in [DEFAULT_STEPS, 2 * DEFAULT_STEPS, 4 * DEFAULT_STEPS] {
        let mut c = ScenarioConfig::paper_disk(ProfileParams::default());
        c.integrator.steps = steps;
        let (_, _, _, w) = braidflow::scenarios::scenario_braid(&c).unwrap();
        assert_eq!(rows(&w), b_na_rows(), "steps {steps}");
    }
}

#[test]
fn epsilon_is_stable_under_resolution_doubling() {
    let base = run_scenario(&ScenarioConfig::paper_disk(ProfileParams::default())).unwrap();
    let mut c = ScenarioConfig::paper_disk(ProfileParams::default());
    c.integrator.steps *= 2;
    c.classify.resolution *= 2;
    let fine = run_scenario(&c).unwrap();
    let (e0, e1) = (base.spectrum.epsilon.unwrap(), fine.spectrum.epsilon.unwrap());
    assert!((e1 - e0).abs() <= 0.1 * e0);
}

#[test]
fn runs_are_deterministic() {
    let c = ScenarioConfig::paper_disk(ProfileParams::default());
    let a = run_scenario(&c).unwrap();
    let b = run_scenario(&c).unwrap();
    assert_eq!(a.winding, b.winding);
    assert_eq!(a.components, b.components);
    assert_eq!(a.spectrum, b.spectrum);
    assert_eq!(a.strands, b.strands);
}

#[test]
fn identity_scenario_is_trivial() {
    let res = run_scenario(&ScenarioConfig::identity()).unwrap();
    assert!(res.winding.is_zero());
    assert!(res.obstruction.is_none());
    assert_eq!(res.spectrum.sorted_values(), vec![0.0]);
    assert_eq!(res.components.len(), 1);
    assert_eq!(res.components[0].kind, ComponentKind::PlanarRegion);
    // Every marked point sits on the same planar family.
    let c = res.admissibility.clause("marked-on-distinct-isolated-components").unwrap();
    assert_eq!(c.status, ClauseStatus::Fail);
}

#[test]
fn single_rotation_has_no_certificate() {
    let res = run_scenario(&ScenarioConfig::single_rotation()).unwrap();
    assert!(res.obstruction.is_none());
    assert_eq!(rows(&res.winding), vec![vec![0, 2, 1, 1], vec![2, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]]);
    let kinds: Vec<ComponentKind> = res.components.iter().map(|c| c.kind).collect();
    assert_eq!(
        kinds,
        [
            ComponentKind::NondegeneratePoint,
            ComponentKind::Circle,
            ComponentKind::PlanarRegion,
            ComponentKind::PlanarRegion
        ]
    );
    assert_eq!(res.spectrum.values.len(), 4);
    assert!(res.spectrum.epsilon.unwrap() > 0.0);
}

#[test]
fn annulus_embedding_gives_set_valued_windings() {
    let res = annulus_embedding_scenario(ProfileParams::default()).unwrap();
    let got: BTreeMap<(String, String), Vec<i64>> =
        res.set_valued.iter().map(|e| ((e.p.clone(), e.q.clone()), e.values.clone())).collect();
    let want = [("p1", "s", 2), ("p2", "s", 1), ("p2", "p1", 1), ("m", "s", 1), ("m", "p1", 1), ("m", "p2", 3)];
    for (p, q, w) in want {
        assert_eq!(got[&(p.to_string(), q.to_string())], vec![w, 0], "{p},{q}");
    }
    assert_eq!(rows(&res.winding), b_na_rows());
    assert_eq!(res.spectrum.values.len(), 8);

    let singletons = set_valued_with_window(&res.strands, SurfaceModel::Annulus, 0, &BraidOptions::default()).unwrap();
    for e in singletons {
        let (i, j) = (res.winding.index_of(&e.p).unwrap(), res.winding.index_of(&e.q).unwrap());
        assert_eq!(e.values, vec![res.winding.w(i, j)]);
    }
}

#[test]
fn torus_embedding_gives_set_valued_windings() {
    let res = run_scenario(&ScenarioConfig::paper_torus()).unwrap();
    let mp2 = res.set_valued.iter().find(|e| e.p == "m" && e.q == "p2").unwrap();
    assert_eq!(mp2.values, vec![3, 0]);
}

#[test]
fn sweep_persists_below_epsilon_and_breaks_later() {
    let c = ScenarioConfig::paper_disk(ProfileParams::default());
    let report = perturbation_sweep(&c, &c.sweep.deltas, Some(EPSILON_GOLDEN)).unwrap();
    for row in &report.rows {
        assert!((row.hofer_bound - row.delta).abs() <= 1e-6 * row.delta.max(1e-3));
        if row.delta <= 1e-3 {
            assert_eq!(row.status, PersistenceStatus::Persisted, "delta {}", row.delta);
            assert_eq!(row.winding.as_ref(), Some(&report.baseline));
            assert_eq!(row.below_half_epsilon, Some(true));
        }
    }
    assert_eq!(report.breaking_amplitude, Some(BREAKING_AMPLITUDE_GOLDEN));
}

#[test]
fn sweep_rejects_negative_amplitudes() {
    let c = ScenarioConfig::paper_disk(ProfileParams::default());
    assert!(matches!(perturbation_sweep(&c, &[-1e-3], None), Err(ScenarioError::Invalid(_))));
}

#[test]
fn baseline_suite_of_fifty_passes() {
    let report = autonomous_baseline_suite(0, 50).unwrap();
    assert_eq!(report.cases.len(), 50);
    for case in &report.cases {
        assert!(case.passed, "seed {} failed: {:?}", case.seed, case.consistency.violations);
    }
}

fn rotation(knots: &[(f64, f64)], center: Point2<f64>) -> HamiltonianSystem<f64> {
    let p = RadialProfile::from_knots(knots.iter().map(|&(r, v)| Knot::new(r, v, 0.0)).collect()).unwrap();
    HamiltonianSystem::radial(hamiltonian_from_profile(&p, center).unwrap())
}

fn matrix_and_order(
    sys: &HamiltonianSystem<f64>,
    pts: &[Point2<f64>],
) -> (braidflow::WindingMatrix, braidflow::braids::NestingOrder) {
    let opts = BraidOptions::default();
    let labels: Vec<String> = (0..pts.len()).map(|i| format!("x{i}")).collect();
    let set = StrandSet::from_trajectories(labels, integrate_flow(sys, pts, DEFAULT_STEPS).unwrap(), &opts).unwrap();
    (winding_matrix(&set, &opts).unwrap(), nesting_order(&set, &NestingOptions::default()).unwrap())
}

#[test]
fn nested_points_of_one_rotation_wind_by_the_outer_level() {
    let sys = rotation(
        &[(0.0, 3.4), (0.1, 3.0), (0.2, 3.0), (0.3, 2.0), (0.4, 2.0), (0.5, 1.0), (0.6, 1.0), (0.7, 0.0), (1.0, 0.0)],
        Point2::origin(),
    );
    let pts = [Point2::new(0.0, 0.15), Point2::new(0.35, 0.0), Point2::new(-0.55, 0.0)];
    let (w, order) = matrix_and_order(&sys, &pts);
    assert_eq!((w.w(0, 1), w.w(0, 2), w.w(1, 2)), (2, 1, 1));
    assert!(order.is_chain());
    assert!(autonomous_consistency(&w, &order).unwrap().is_consistent());
    assert!(braidflow::find_obstruction(&w).unwrap().is_none());
}

#[test]
fn disjoint_rotations_are_incomparable() {
    let knots = [(0.0, 2.3), (0.1, 2.0), (0.2, 2.0), (0.3, 0.0), (0.35, 0.0)];
    let sys =
        HamiltonianSystem::Sum(vec![rotation(&knots, Point2::new(-0.5, 0.0)), rotation(&knots, Point2::new(0.5, 0.0))]);
    let pts = [Point2::new(-0.35, 0.0), Point2::new(0.5, 0.15)];
    let (w, order) = matrix_and_order(&sys, &pts);
    assert_eq!(w.w(0, 1), 0);
    assert!(!order.comparable(0, 1));
}

#[test]
fn two_points_on_one_circle_wind_non_trivially() {
    let sys = rotation(&[(0.0, 1.5), (0.1, 1.0), (0.5, 1.0), (0.6, 0.0), (1.0, 0.0)], Point2::origin());
    let pts = [Point2::new(0.3, 0.0), Point2::new(-0.3, 0.0)];
    let (w, order) = matrix_and_order(&sys, &pts);
    assert!(order.same_trajectory(0, 1));
    assert_eq!(w.w(0, 1), 1);
    assert!(autonomous_consistency(&w, &order).unwrap().is_consistent());
}

#[test]
fn tuned_defaults_are_the_grid_optimum() {
    let report = tune_profiles(&TuningGrid::default());
    let best = report.best.unwrap();
    assert_eq!(best.profiles, ProfileParams::default());
    assert!((best.epsilon - EPSILON_GOLDEN).abs() < 1e-9);
}

#[test]
fn unfixed_marked_point_is_a_validation_error() {
    let mut c = ScenarioConfig::paper_disk(ProfileParams::default());
    c.points.push(MarkedPoint::at("stray", 0.15, 0.0));
    let err = run_scenario(&c).unwrap_err();
    assert!(err.is_validation());
    assert!(matches!(err, ScenarioError::NotFixed { ref label, .. } if label == "stray"));
}
