use std::f64::consts::TAU;

use braidflow::braids::{nesting_order, winding_matrix, BraidOptions, NestingOptions, StrandSet, WindingMatrix};
use braidflow::dynamics::{
    integrate_flow, BumpPerturbation, Domain, HamiltonianSystem, TimeEnvelope, TimeWarp, DEFAULT_STEPS,
};
use braidflow::geometry::Point2;
use braidflow::obstruction::{autonomous_consistency, find_obstruction};
use braidflow::profiles::{hamiltonian_from_profile, AlphaParams, BetaParams, Knot, RadialProfile};
use braidflow::scenarios::{random_autonomous_system, DELTA_CENTER};
use braidflow::spectrum::{hofer_length, HoferOptions};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alpha_system() -> HamiltonianSystem<f64> {
    let p = RadialProfile::alpha(&AlphaParams::default());
    HamiltonianSystem::radial(hamiltonian_from_profile(&p, Point2::origin()).unwrap())
}

fn beta_system() -> HamiltonianSystem<f64> {
    let p = RadialProfile::beta(&BetaParams::default());
    HamiltonianSystem::radial(hamiltonian_from_profile(&p, DELTA_CENTER).unwrap())
}

fn matrix_for(system: &HamiltonianSystem<f64>, pts: &[Point2<f64>], steps: usize) -> WindingMatrix {
    let opts = BraidOptions::default();
    let labels: Vec<String> = (0..pts.len()).map(|i| format!("x{i}")).collect();
    let set = StrandSet::from_trajectories(labels, integrate_flow(system, pts, steps).unwrap(), &opts).unwrap();
    winding_matrix(&set, &opts).unwrap()
}

/// Fixed points of the α rotation: the center, the α = 2 circle and the plateau.
fn alpha_fixed_points() -> impl Strategy<Value = Vec<Point2<f64>>> {
    (0.0..TAU, 0.0..TAU, 0.0..TAU, 0.25..0.75f64).prop_map(|(a, b, c, r)| {
        vec![
            Point2::origin(),
            Point2::new(0.1 * a.cos(), 0.1 * a.sin()),
            Point2::new(r * b.cos(), r * b.sin()),
            Point2::new(0.95 * c.cos(), 0.95 * c.sin()),
        ]
    })
}

fn symmetric_matrix(max_k: usize) -> impl Strategy<Value = WindingMatrix> {
    (1..=max_k).prop_flat_map(|k| (Just(k), proptest::collection::vec(-3i64..=3, k * (k - 1) / 2))).prop_map(
        |(k, vals)| {
            let mut pairs = Vec::new();
            let mut it = vals.into_iter();
            for i in 0..k {
                for j in 0..i {
                    pairs.push((i, j, it.next().unwrap()));
                }
            }
            WindingMatrix::from_pairs((0..k).map(|i| format!("v{i}")).collect(), &pairs).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn winding_is_symmetric_and_additive(pts in alpha_fixed_points()) {
        let a = alpha_system();
        let w1 = matrix_for(&a, &pts, DEFAULT_STEPS);
        prop_assert!(w1.is_symmetric());
        let twice = HamiltonianSystem::concat_equal(vec![a.clone(), a]).unwrap();
        let w2 = matrix_for(&twice, &pts, DEFAULT_STEPS);
        prop_assert_eq!(w2, w1.add(&w1).unwrap());
    }

    #[test]
    fn winding_ignores_reparametrization_and_resolution(pts in alpha_fixed_points(), amp in -0.9..0.9f64) {
        let a = alpha_system();
        let base = matrix_for(&a, &pts, DEFAULT_STEPS);
        let warped = a.clone().reparametrized(TimeWarp::sine(amp).unwrap());
        prop_assert_eq!(&matrix_for(&warped, &pts, DEFAULT_STEPS), &base);
        prop_assert_eq!(&matrix_for(&a, &pts, 2 * DEFAULT_STEPS), &base);
    }

    #[test]
    fn hofer_length_ignores_reparametrization(amp in -0.9..0.9f64, delta in 1e-4..1.0f64) {
        let opts = HoferOptions::default();
        let d = Domain::unit_disk();
        let a = alpha_system();
        let la = hofer_length(&a, &d, &opts);
        let lw = hofer_length(&a.reparametrized(TimeWarp::sine(amp).unwrap()), &d, &opts);
        prop_assert!((la - lw).abs() < 1e-6 * la, "{} vs {}", la, lw);
        let bump = HamiltonianSystem::Bump(BumpPerturbation {
            center: Point2::new(0.2, -0.1),
            radius: 0.3,
            amplitude: delta,
            envelope: TimeEnvelope::SineSquared,
        });
        let lb = hofer_length(&bump, &d, &opts);
        let lbw = hofer_length(&bump.reparametrized(TimeWarp::sine(amp).unwrap()), &d, &opts);
        prop_assert!((lb - lbw).abs() < 1e-3 * lb, "{} vs {}", lb, lbw);
    }

    #[test]
    fn hofer_length_of_concat_is_subadditive(amp in 1e-3..1.0f64) {
        let opts = HoferOptions::default();
        let d = Domain::unit_disk();
        let bump = HamiltonianSystem::Bump(BumpPerturbation {
            center: Point2::new(-0.3, 0.2),
            radius: 0.4,
            amplitude: amp,
            envelope: TimeEnvelope::Constant,
        });
        for (x, y) in [(alpha_system(), beta_system()), (beta_system(), bump.clone()), (bump, alpha_system())] {
            let lx = hofer_length(&x, &d, &opts);
            let ly = hofer_length(&y, &d, &opts);
            let lc = hofer_length(&HamiltonianSystem::concat_equal(vec![x, y]).unwrap(), &d, &opts);
            prop_assert!(lc <= lx + ly + 1e-9, "{} > {} + {}", lc, lx, ly);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn certificates_always_verify_and_survive_relabeling(w in symmetric_matrix(8), seed in any::<u64>()) {
        let found = find_obstruction(&w).unwrap();
        if let Some(c) = &found {
            prop_assert!(c.subset.len() >= 3);
            prop_assert!(braidflow::obstruction::verify_certificate(&w, &c.subset));
        }
        let k = w.size();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut state = seed;
        for i in (1..k).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let labels: Vec<String> = perm.iter().map(|&i| w.labels()[i].clone()).collect();
        let rows: Vec<Vec<i64>> = perm.iter().map(|&i| perm.iter().map(|&j| if i == j { 0 } else { w.w(i, j) }).collect()).collect();
        let permuted = WindingMatrix::from_rows(labels, &rows).unwrap();
        prop_assert_eq!(find_obstruction(&permuted).unwrap().is_some(), found.is_some());
    }

    #[test]
    fn winding_matrix_json_round_trip(w in symmetric_matrix(6)) {
        let json = serde_json::to_string(&w).unwrap();
        let back: WindingMatrix = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn profiles_are_monotone_staircases(levels in proptest::collection::btree_set(1i64..6, 1..4), frac in 0.05..0.95f64) {
        let levels: Vec<i64> = levels.into_iter().rev().collect();
        let m = levels.len();
        let u = 1.0 / (2 * m + 2) as f64;
        let mut knots = vec![Knot::new(0.0, levels[0] as f64 + frac, 0.0)];
        for (i, &l) in levels.iter().enumerate() {
            knots.push(Knot::new((2 * i + 1) as f64 * u, l as f64, 0.0));
            knots.push(Knot::new((2 * i + 2) as f64 * u, l as f64, 0.0));
        }
        knots.push(Knot::new((2 * m + 1) as f64 * u, 0.0, 0.0));
        knots.push(Knot::new(1.0, 0.0, 0.0));
        let p = RadialProfile::from_knots(knots).unwrap();
        prop_assert!(p.max_derivative_on(0.0, 1.0) <= 1e-12);
        let ls = p.level_structure();
        let plateau_levels: Vec<i64> = ls.plateaus.iter().map(|q| q.level).filter(|&l| l != 0).collect();
        prop_assert_eq!(&plateau_levels, &levels);
        let mut steps = levels.clone();
        steps.push(0);
        let crossings: i64 = steps.windows(2).map(|w| w[0] - w[1] - 1).sum();
        prop_assert_eq!(ls.circles.len() as i64, crossings);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_autonomous_systems_obey_the_order_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs = random_autonomous_system(&mut rng);
        let opts = BraidOptions::default();
        let set = StrandSet::from_trajectories(rs.labels.clone(), integrate_flow(&rs.system, &rs.points, DEFAULT_STEPS).unwrap(), &opts).unwrap();
        let w = winding_matrix(&set, &opts).unwrap();
        let order = nesting_order(&set, &NestingOptions::default()).unwrap();
        let report = autonomous_consistency(&w, &order).unwrap();
        prop_assert!(report.is_consistent(), "{:?}", report.violations);
        prop_assert!(find_obstruction(&w).unwrap().is_none());
    }
}
