//! Independent closed-form and brute-force oracles for the numerical core.

use std::f64::consts::{PI, TAU};

use braidflow::braids::{winding_matrix, BraidOptions, StrandSet, WindingMatrix};
use braidflow::dynamics::{
    flow_between, integrate_flow, integrate_point, jacobian, time_one_map, HamiltonianSystem, DEFAULT_STEPS,
};
use braidflow::geometry::Point2;
use braidflow::obstruction::{find_obstruction, verify_certificate};
use braidflow::profiles::{hamiltonian_from_profile, AlphaParams, BetaParams, RadialProfile};
use braidflow::scenarios::{run_scenario, ProfileParams, ScenarioConfig, DELTA_CENTER};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alpha() -> RadialProfile<f64> {
    RadialProfile::alpha(&AlphaParams::default())
}

fn beta() -> RadialProfile<f64> {
    RadialProfile::beta(&BetaParams::default())
}

fn radial(p: &RadialProfile<f64>, c: Point2<f64>) -> HamiltonianSystem<f64> {
    HamiltonianSystem::radial(hamiltonian_from_profile(p, c).unwrap())
}

/// `2π ∫_r^{r_max} s·prof(s) ds` by Richardson-extrapolated trapezoid sums.
fn h_oracle(p: &RadialProfile<f64>, r: f64) -> f64 {
    let trap = |n: usize| {
        let (a, b) = (r, p.r_max());
        let h = (b - a) / n as f64;
        let f = |s: f64| s * p.value(s);
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
        h * (0.5 * f(a) + inner + 0.5 * f(b))
    };
    let (t1, t2) = (trap(6000), trap(12000));
    TAU * (t2 + (t2 - t1) / 3.0)
}

fn wrap_angle(a: f64) -> f64 {
    let x = a.rem_euclid(TAU);
    if x > PI {
        x - TAU
    } else {
        x
    }
}

#[test]
fn hamiltonian_at_center_matches_richardson_trapezoid() {
    for (p, c) in [(alpha(), Point2::origin()), (beta(), DELTA_CENTER)] {
        let h = hamiltonian_from_profile(&p, c).unwrap();
        for r in [0.0, 0.05, 0.1, 0.15, 0.2] {
            let want = h_oracle(&p, r);
            assert!((h.value_at_radius(r) - want).abs() < 1e-10, "r={r}: {} vs {want}", h.value_at_radius(r));
        }
    }
}

#[test]
fn rotation_angle_matches_profile_at_hundred_radii() {
    for (p, c) in [(alpha(), Point2::origin()), (beta(), DELTA_CENTER)] {
        let sys = radial(&p, c);
        for i in 1..=100 {
            let r = p.r_max() * i as f64 / 101.0;
            let x = c + Point2::new(r, 0.0);
            let y = time_one_map(&sys, x, 1000).unwrap();
            let d = y - c;
            let got = d.y.atan2(d.x);
            let err = wrap_angle(got - TAU * p.value(r));
            assert!(err.abs() < 1e-6, "r={r}: angle error {err:e}");
        }
    }
}

#[test]
fn energy_is_conserved_on_autonomous_legs() {
    let p = alpha();
    let sys = radial(&p, Point2::origin());
    let h = hamiltonian_from_profile(&p, Point2::origin()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let r = rng.gen_range(0.0..0.95);
        let a = rng.gen_range(0.0..TAU);
        let tr = integrate_point(&sys, 0, Point2::new(r * a.cos(), r * a.sin()), DEFAULT_STEPS).unwrap();
        let e0 = h.value(tr.start());
        let drift = tr.positions.iter().map(|&x| (h.value(x) - e0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "drift {drift:e}");
    }
}

#[test]
fn time_one_map_preserves_area() {
    let cfg = ScenarioConfig::paper_disk(ProfileParams::default());
    let sys = braidflow::scenarios::build_scenario(&cfg).unwrap().system;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let x = loop {
            let p = Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if p.norm() < 1.0 {
                break p;
            }
        };
        let j = jacobian(&sys, x, 1e-6, DEFAULT_STEPS).unwrap();
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        assert!((det - 1.0).abs() < 1e-5, "det {det} at {x:?}");
    }
}

#[test]
fn flow_property_and_concat_composition() {
    let a = radial(&alpha(), Point2::origin());
    let b = radial(&beta(), DELTA_CENTER);
    let g = HamiltonianSystem::concat_equal(vec![a.clone(), b.clone()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x = Point2::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
        let t = rng.gen_range(0.05..0.95);
        let mid = flow_between(&g, x, 0.0, t, DEFAULT_STEPS).unwrap();
        let two_step = flow_between(&g, mid, t, 1.0, DEFAULT_STEPS).unwrap();
        let direct = time_one_map(&g, x, DEFAULT_STEPS).unwrap();
        assert!(two_step.distance(direct) < 1e-8);

        let composed = time_one_map(&b, time_one_map(&a, x, DEFAULT_STEPS).unwrap(), DEFAULT_STEPS).unwrap();
        assert!(composed.distance(direct) < 1e-8, "{:e}", composed.distance(direct));
    }
}

/// Points on integer plateaus and level circles of `prof`, with their levels.
fn integer_points(prof: &RadialProfile<f64>) -> Vec<(f64, i64)> {
    let ls = prof.level_structure();
    let mut out: Vec<(f64, i64)> = ls.circles.clone();
    for p in &ls.plateaus {
        let to = p.to.unwrap_or(prof.r_max() + 0.05);
        if p.level != 0 || p.to.is_some() {
            out.push((0.5 * (p.from + to), p.level));
        }
    }
    out
}

#[test]
fn single_rotation_windings_match_radial_oracle() {
    let opts = BraidOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (prof, c) in [(alpha(), Point2::origin()), (beta(), DELTA_CENTER)] {
        let sys = radial(&prof, c);
        let candidates = integer_points(&prof);
        for _ in 0..10 {
            // The center is always fixed; its level is the non-integer center value, so it
            // contributes the partner's level.
            let mut chosen: Vec<(f64, i64)> = vec![(0.0, i64::MIN)];
            for &cand in &candidates {
                if rng.gen_bool(0.7) {
                    chosen.push(cand);
                }
            }
            let pts: Vec<Point2<f64>> = chosen
                .iter()
                .map(|&(r, _)| {
                    let a = rng.gen_range(0.0..TAU);
                    c + Point2::new(a.cos(), a.sin()) * r
                })
                .collect();
            let labels: Vec<String> = (0..pts.len()).map(|i| format!("q{i}")).collect();
            let trs = integrate_flow(&sys, &pts, DEFAULT_STEPS).unwrap();
            let set = StrandSet::from_trajectories(labels, trs, &opts).unwrap();
            let w = winding_matrix(&set, &opts).unwrap();
            for i in 0..chosen.len() {
                for j in 0..i {
                    let outer = if chosen[i].0 >= chosen[j].0 { chosen[i] } else { chosen[j] };
                    assert_eq!(w.w(i, j), outer.1, "radii {} {}", chosen[i].0, chosen[j].0);
                }
            }
        }
    }
}

#[test]
fn radial_plateau_actions_match_closed_form() {
    let spectrum = run_scenario(&ScenarioConfig::paper_disk(ProfileParams::default())).unwrap().spectrum;
    let (a, b) = (alpha(), beta());
    let rho2 = b.level_radius(2).unwrap();
    let rho1 = b.level_radius(1).unwrap();
    let c1 = h_oracle(&a, 0.8) + PI * 0.64;
    let mut want = vec![
        h_oracle(&a, 0.0),
        h_oracle(&a, 0.1) + 2.0 * PI * 0.01,
        c1,
        0.0,
        c1 + h_oracle(&b, 0.0),
        c1 + h_oracle(&b, 0.1) + 3.0 * PI * 0.01,
        c1 + h_oracle(&b, rho2) + 2.0 * PI * rho2 * rho2,
        c1 + h_oracle(&b, rho1) + PI * rho1 * rho1,
    ];
    want.sort_by(f64::total_cmp);
    let got = spectrum.sorted_values();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-8, "{g} vs {w}");
    }
    let gap = want.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    assert!((spectrum.epsilon.unwrap() - gap).abs() < 1e-8);
}

/// First certificate by brute force over bitmasks, ordered by size and then
/// lexicographically by index list.
fn brute_force(w: &WindingMatrix) -> Option<Vec<usize>> {
    let k = w.size();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << k) {
        let s: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if s.len() < 3 {
            continue;
        }
        let nonzero = s.iter().all(|&i| s.iter().all(|&j| i == j || w.w(i, j) != 0));
        let no_max = s.iter().all(|&i| {
            let row: Vec<i64> = s.iter().filter(|&&j| j != i).map(|&j| w.w(i, j)).collect();
            row.iter().any(|&v| v != row[0])
        });
        if nonzero && no_max {
            found.push(s);
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found.into_iter().next()
}

fn random_matrix(rng: &mut ChaCha8Rng, k: usize) -> WindingMatrix {
    let labels: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let zero_bias = rng.gen_range(0.0..0.6);
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..i {
            let v = if rng.gen_bool(zero_bias) { 0 } else { rng.gen_range(-3..=3) };
            pairs.push((i, j, v));
        }
    }
    WindingMatrix::from_pairs(labels, &pairs).unwrap()
}

#[test]
fn obstruction_search_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut certified = 0;
    for _ in 0..3000 {
        let k = rng.gen_range(1..=8);
        let w = random_matrix(&mut rng, k);
        let fast = find_obstruction(&w).unwrap();
        let slow = brute_force(&w);
        match (&fast, &slow) {
            (None, None) => {}
            (Some(c), Some(s)) => {
                let idx: Vec<usize> = c.subset.iter().map(|l| w.index_of(l).unwrap()).collect();
                assert_eq!(&idx, s);
                assert!(verify_certificate(&w, &c.subset));
                certified += 1;
            }
            _ => panic!("disagreement on {w:?}: {fast:?} vs {slow:?}"),
        }
    }
    assert!(certified > 100, "corpus too easy: {certified}");
}

#[test]
fn f32_core_reproduces_the_rotation() {
    let p: RadialProfile<f32> = RadialProfile::alpha(&AlphaParams::default());
    let sys = HamiltonianSystem::radial(hamiltonian_from_profile(&p, Point2::origin()).unwrap());
    let y = time_one_map(&sys, Point2::new(0.5f32, 0.0), 1000).unwrap();
    assert!(y.distance(Point2::new(0.5, 0.0)) < 1e-4);
    let y = time_one_map(&sys, Point2::new(0.15f32, 0.0), 1000).unwrap();
    let want = TAU * p.value(0.15) as f64;
    assert!(wrap_angle(y.y.atan2(y.x) as f64 - want).abs() < 1e-3);
}
