//! Checks of each computation against an independent route: finite
//! differences, plain recursion, power iteration, long orbits.

use pielou_core::equilibria::{solve_positive_via, RootRoute, G, H};
use pielou_core::model::eval_map;
use pielou_core::orbit::{comparison_closed_form, comparison_recursion};
use pielou_core::stability::eigenvalues;
use pielou_core::{
    equilibrium_bracket, iterate, jacobian_at, solve_positive, spectral_radius, step, Jacobian2,
    Params, State,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_params(rng: &mut ChaCha8Rng) -> Params {
    Params::new(
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.05..3.0),
    )
    .unwrap()
}

/// Positive-equilibrium parameters with `a, b < 1` and `ab/pq` in `ratio`.
fn random_existing(rng: &mut ChaCha8Rng, ratio: std::ops::Range<f64>) -> Params {
    let a = rng.gen_range(0.2..0.99);
    let b = rng.gen_range(0.2..0.99);
    let r = rng.gen_range(ratio);
    let pq = a * b / r;
    let p = pq.sqrt() * rng.gen_range(0.5..2.0);
    Params::new(a, b, p, pq / p).unwrap()
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = rng(1);
    let h = 1e-6;
    for i in 0..1000 {
        let params = if i % 2 == 0 {
            Params::new(0.8, 0.9, 0.6, 0.5).unwrap()
        } else {
            random_params(&mut rng)
        };
        let s = State::new(rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0)).unwrap();
        let j = jacobian_at(&params, s);
        let (yp, zp) = eval_map(&params, s.y + h, s.z);
        let (ym, zm) = eval_map(&params, s.y - h, s.z);
        let (yq, zq) = eval_map(&params, s.y, s.z + h);
        let (yr, zr) = eval_map(&params, s.y, s.z - h);
        let fd = Jacobian2::new(
            (yp - ym) / (2.0 * h),
            (yq - yr) / (2.0 * h),
            (zp - zm) / (2.0 * h),
            (zq - zr) / (2.0 * h),
        );
        for (got, want) in [
            (j.m11, fd.m11),
            (j.m12, fd.m12),
            (j.m21, fd.m21),
            (j.m22, fd.m22),
        ] {
            assert!(
                (got - want).abs() < 1e-5,
                "{params:?} {s:?}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn jacobian_example_point_matches_differences() {
    let params = Params::new(0.8, 0.9, 0.6, 0.5).unwrap();
    let s = State::new(0.1, 0.1).unwrap();
    let j = jacobian_at(&params, s);
    let h = 1e-6;
    let d = |dy: f64, dz: f64| eval_map(&params, s.y + dy, s.z + dz);
    assert!((j.m11 - (d(h, 0.0).0 - d(-h, 0.0).0) / (2.0 * h)).abs() < 1e-6);
    assert!((j.m12 - (d(0.0, h).0 - d(0.0, -h).0) / (2.0 * h)).abs() < 1e-6);
    assert!((j.m21 - (d(h, 0.0).1 - d(-h, 0.0).1) / (2.0 * h)).abs() < 1e-6);
    assert!((j.m22 - (d(0.0, h).1 - d(0.0, -h).1) / (2.0 * h)).abs() < 1e-6);
}

#[test]
fn closed_form_matches_recursion() {
    let mut rng = rng(2);
    let mut checked = 0;
    while checked < 50 {
        let params = random_params(&mut rng);
        // keep away from the resonant surface ab = pq
        if (params.ratio() - 1.0).abs() < 0.1 {
            continue;
        }
        let x0 = rng.gen_range(0.01..3.0);
        let w0 = rng.gen_range(0.01..3.0);
        let (xr, wr) = comparison_recursion(&params, x0, w0, 100).unwrap();
        let (xc, wc) = comparison_closed_form(&params, x0, w0, 100).unwrap();
        for n in 0..=100 {
            let rx = ((xc[n] - xr[n]) / xr[n]).abs();
            let rw = ((wc[n] - wr[n]) / wr[n]).abs();
            assert!(rx < 1e-10 && rw < 1e-10, "{params:?} n={n}: {rx:e} {rw:e}");
        }
        checked += 1;
    }
}

#[test]
fn comparison_orbit_dominates_true_orbit() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let params = random_params(&mut rng);
        let y0 = rng.gen_range(0.01..3.0);
        let z0 = rng.gen_range(0.01..3.0);
        let (xs, ws) = comparison_recursion(&params, y0, z0, 200).unwrap();
        let mut s = State::new(y0, z0).unwrap();
        for n in 0..=200 {
            assert!(xs[n] >= s.y && ws[n] >= s.z, "n={n}");
            s = step(&params, s);
        }
    }
}

fn power_method(j: &Jacobian2, iterations: usize) -> f64 {
    let mut v = [0.6, 0.8];
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let w = j.apply(v);
        let norm = w[0].hypot(w[1]);
        if norm == 0.0 {
            return 0.0;
        }
        estimate = norm / v[0].hypot(v[1]);
        v = [w[0] / norm, w[1] / norm];
    }
    estimate
}

#[test]
fn spectral_radius_matches_power_method() {
    let mut rng = rng(4);
    for _ in 0..100 {
        // V·diag(l1, l2)·V^{-1} with a clear spectral gap
        let l1 = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let l2 = l1 * rng.gen_range(-0.6..0.6);
        let (v11, v12, v21, v22): (f64, f64, f64, f64) = (
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.5..2.0),
        );
        let det = v11 * v22 - v12 * v21;
        if det.abs() < 0.3 {
            continue;
        }
        let (i11, i12, i21, i22) = (v22 / det, -v12 / det, -v21 / det, v11 / det);
        let j = Jacobian2::new(
            v11 * l1 * i11 + v12 * l2 * i21,
            v11 * l1 * i12 + v12 * l2 * i22,
            v21 * l1 * i11 + v22 * l2 * i21,
            v21 * l1 * i12 + v22 * l2 * i22,
        );
        let want = power_method(&j, 60);
        let got = spectral_radius(&j);
        assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
        assert!((got - l1.abs()).abs() < 1e-10);
        let moduli = eigenvalues(&j).map(|e| e.modulus());
        assert!((moduli[0].max(moduli[1]) - got).abs() < 1e-12);
    }
}

#[test]
fn zero_linearization_radius_is_exact() {
    let mut rng = rng(5);
    for _ in 0..200 {
        let params = random_params(&mut rng);
        let rho = spectral_radius(&jacobian_at(&params, State::ORIGIN));
        let want = params.ratio().sqrt();
        assert!(((rho - want) / want).abs() < 1e-12);
    }
}

#[test]
fn solver_agrees_with_long_orbits() {
    let mut rng = rng(6);
    for _ in 0..25 {
        let params = random_existing(&mut rng, 1.1..3.0);
        let eq = solve_positive(&params, 1e-12).unwrap();
        let s0 = State::new(rng.gen_range(0.01..2.0), rng.gen_range(0.01..2.0)).unwrap();
        let orbit = iterate(&params, s0, 1_000_000, 1e-15).unwrap();
        let last = orbit.last().unwrap();
        let target = State::new(eq.y_bar, eq.z_bar).unwrap();
        assert!(
            last.distance(&target) < 1e-7,
            "{params:?}: orbit {last:?} vs solver {target:?}"
        );
    }
}

#[test]
fn example_41_solver_matches_million_step_orbit() {
    let params = Params::new(0.8, 0.9, 0.6, 0.5).unwrap();
    let eq = solve_positive(&params, 1e-12).unwrap();
    let mut s = State::new(0.35, 0.26).unwrap();
    for _ in 0..1_000_000 {
        s = step(&params, s);
    }
    assert!((s.y - eq.y_bar).abs() < 1e-8);
    assert!((s.z - eq.z_bar).abs() < 1e-8);
}

#[test]
fn g_and_h_routes_agree() {
    let mut rng = rng(7);
    for _ in 0..100 {
        let params = random_existing(&mut rng, 1.05..10.0);
        let via_g = solve_positive_via(&params, 1e-12, RootRoute::G).unwrap();
        let via_h = solve_positive_via(&params, 1e-12, RootRoute::H).unwrap();
        assert!((via_g.y_bar - via_h.y_bar).abs() < 1e-8);
        assert!((via_g.z_bar - via_h.z_bar).abs() < 1e-8);
    }
}

fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut prev: Option<f64> = None;
    let mut changes = 0;
    for v in values {
        if let Some(p) = prev {
            if (p < 0.0) != (v < 0.0) {
                changes += 1;
            }
        }
        prev = Some(v);
    }
    changes
}

#[test]
fn g_has_a_single_sign_change() {
    let mut rng = rng(8);
    for _ in 0..30 {
        let params = random_existing(&mut rng, 1.05..10.0);
        let yhat = pielou_core::equilibria::domain_endpoint(params.a());
        let n = 10_000;
        let grid = (1..n).map(|i| yhat * i as f64 / n as f64);
        let g = grid.clone().map(|y| G(&params, y).unwrap());
        assert_eq!(sign_changes(g), 1, "{params:?}");
        let zhat = pielou_core::equilibria::domain_endpoint(params.b());
        let h = (1..n).map(|i| H(&params, zhat * i as f64 / n as f64).unwrap());
        assert_eq!(sign_changes(h), 1, "{params:?}");
    }
}

#[test]
fn g_and_h_increase_on_grids() {
    let mut rng = rng(9);
    for _ in 0..30 {
        let params = random_existing(&mut rng, 1.05..10.0);
        for (cap, f) in [
            (
                params.a(),
                G as fn(&Params, f64) -> pielou_core::Result<f64>,
            ),
            (params.b(), H),
        ] {
            let end = pielou_core::equilibria::domain_endpoint(cap);
            let mut prev = f64::NEG_INFINITY;
            for i in 1..2000 {
                let v = f(&params, end * i as f64 / 2000.0).unwrap();
                assert!(v > prev, "{params:?} at {i}");
                prev = v;
            }
        }
    }
}

#[test]
fn g_increases_on_random_pairs() {
    let params = Params::new(0.8, 0.9, 0.6, 0.5).unwrap();
    let yhat = pielou_core::equilibria::domain_endpoint(0.8);
    let mut rng = rng(10);
    for _ in 0..100 {
        let u: f64 = rng.gen_range(1e-6..yhat * 0.999_999);
        let v: f64 = rng.gen_range(1e-6..yhat * 0.999_999);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if lo == hi {
            continue;
        }
        assert!(G(&params, hi).unwrap() > G(&params, lo).unwrap());
    }
}

#[test]
fn orbits_stay_in_envelope_and_reach_bracket() {
    let params = Params::new(0.8, 0.9, 0.6, 0.5).unwrap();
    let bracket = equilibrium_bracket(&params).unwrap();
    let mut rng = rng(11);
    for k in 0..101 {
        let s0 = if k == 0 {
            State::new(0.35, 0.26).unwrap()
        } else {
            State::new(rng.gen_range(1e-3..10.0), rng.gen_range(1e-3..10.0)).unwrap()
        };
        let orbit = iterate(&params, s0, 100_000, 1e-13).unwrap();
        for s in &orbit.states[1..] {
            assert!(s.y >= 0.0 && s.y < params.a() && s.z >= 0.0 && s.z < params.b());
        }
        assert!(orbit.converged);
        let lim = orbit.limit_estimate.unwrap();
        assert!(bracket.contains_strictly(lim.y, lim.z));
    }
}
