use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use hlmono::monotonicity::{
    bernstein_check, check_scalar_facts, classical_monotonicity, density_curve, dirichlet_sigma,
    k10_balance, k10_balance_with_theta, lemma_density_bound, linear_intercept, main_theorem_check,
    make_cutoff, theta0, theta0_with, weight, CutoffKind, Theta0Params,
};
use hlmono::zoo::{self, ClassicalKind, PolarResolution, Potential, STANDARD_BASIS};
use hlmono::{HeisenbergPoint, SurfaceMesh};
use proptest::prelude::*;

fn plane(extent: f64, n: usize) -> SurfaceMesh {
    zoo::make_plane(
        STANDARD_BASIS,
        None,
        extent,
        PolarResolution::with_angular(n),
    )
    .unwrap()
}

fn offset_plane(n: usize) -> SurfaceMesh {
    let a = HeisenbergPoint::new([0.0, 0.3, 0.0, 0.1], 0.2);
    zoo::make_plane(
        STANDARD_BASIS,
        Some(a),
        4.0,
        PolarResolution::with_angular(n),
    )
    .unwrap()
}

fn cone(p: u32, q: u32, n: usize) -> SurfaceMesh {
    zoo::make_sw_cone(
        p,
        q,
        1.0 / 64.0,
        2.5,
        PolarResolution::with_angular(n),
        true,
    )
    .unwrap()
}

/// Polygonal fan with `n` spokes: contour integral of `∂_ν𝔯/𝔯` is `2n·tan(π/n)`.
fn fan_value(n: usize, scale: f64) -> f64 {
    2.0 * n as f64 * (PI / n as f64).tan() * scale
}

#[test]
fn main_cutoff_invariants() {
    let c = make_cutoff(CutoffKind::Main).unwrap();
    let n = 10_000;
    let h = 1.0 / n as f64;
    let mut integral = 0.0;
    for i in 0..n {
        let t = 1.0 + (i as f64 + 0.5) * h;
        assert!(c.d1(t) <= 0.0);
        integral += c.d1(t) * h;
    }
    assert!((integral + 1.0).abs() < 1e-9, "{integral}");
    assert_eq!(c.chi(0.5), 1.0);
    assert_eq!(c.chi(2.5), 0.0);
    for t in [1.25, 1.4, 1.6, 1.75] {
        assert!((c.d1(t) + 1.5).abs() < 1e-14);
    }
    // χ is the antiderivative of χ′.
    for t in [1.05, 1.2, 1.5, 1.8, 1.95] {
        let d = (c.chi(t + 1e-6) - c.chi(t - 1e-6)) / 2e-6;
        assert!((d - c.d1(t)).abs() < 1e-7);
        let d2 = (c.d1(t + 1e-6) - c.d1(t - 1e-6)) / 2e-6;
        assert!((d2 - c.d2(t)).abs() < 1e-5);
    }
}

#[test]
fn epsilon_cutoff_invariants() {
    for eps in [0.01, 0.05, 0.1, 0.2] {
        let c = make_cutoff(CutoffKind::Epsilon { eps }).unwrap();
        assert!(c.max_slope() <= 2.0, "{eps}");
        for i in 0..=100 {
            let t = 1.0 + eps + (1.0 - 2.0 * eps) * i as f64 / 100.0;
            assert!((c.d1(t) + 1.0).abs() < 1e-12);
        }
        assert!(c.chi(2.0).abs() < 1e-12);
    }
    assert!(make_cutoff(CutoffKind::Epsilon { eps: 0.3 }).is_err());
    assert!(make_cutoff(CutoffKind::Epsilon { eps: 0.0 }).is_err());
}

#[test]
fn scalar_weight_facts_hold_on_a_million_points() {
    let facts = check_scalar_facts(1_000_000, 1e6);
    assert!(facts.holds(1e-6), "{facts:?}");
    assert_eq!(weight(0.0), 1.0);
    assert!((weight(1e8) - FRAC_PI_2).abs() < 1e-7);
}

#[test]
fn plane_density_is_pi() {
    let m = plane(2.5, 128);
    let radii: Vec<f64> = (1..=20).map(|k| 0.1 * k as f64).collect();
    let d = density_curve(&m, &radii).unwrap();
    for (r, v) in radii.iter().zip(&d.density) {
        assert!((v / PI - 1.0).abs() < 2e-3, "{r}: {v}");
    }
    assert!(d.reliable.iter().all(|&b| b));
    let far = density_curve(&m, &[3.0]).unwrap();
    assert!(!far.reliable[0]);
    assert!(density_curve(&m, &[1.0, 0.5]).is_err());
}

#[test]
fn theta0_on_the_plane_matches_the_fan_polygon() {
    let m = plane(1.0, 48);
    let p = m.origin_preimages()[0];
    let t = theta0_with(&m, p, &Theta0Params::default()).unwrap();
    assert_eq!(t.samples.len(), 5);
    assert!((t.value - fan_value(48, 1.0)).abs() < 1e-9, "{}", t.value);
    assert!((theta0(&plane(2.5, 128), p).unwrap() / TAU - 1.0).abs() < 5e-3);
}

#[test]
fn theta0_on_cones_matches_the_cone_weight() {
    for (p, q) in [(2, 1), (3, 2)] {
        let m = cone(p, q, 128);
        let w = TAU * ((p * q) as f64).sqrt();
        let t = theta0(&m, m.origin_preimages()[0]).unwrap();
        assert!((t.abs() / w - 1.0).abs() < 1e-2, "({p},{q}): {t}");
    }
}

#[test]
fn theta0_rejects_unmarked_nodes_and_oversized_levels() {
    let m = plane(1.0, 32);
    assert!(theta0(&m, 5).is_err());
    let p = m.origin_preimages()[0];
    let params = Theta0Params {
        t0: Some(0.9),
        ..Default::default()
    };
    assert!(theta0_with(&m, p, &params).is_err());
}

#[test]
fn intercept_of_an_exact_line() {
    let s: Vec<(f64, f64)> = (0..5)
        .map(|k| (0.5f64.powi(k), 3.0 - 2.0 * 0.5f64.powi(k)))
        .collect();
    assert!((linear_intercept(&s) - 3.0).abs() < 1e-12);
}

#[test]
fn lemma_ratio_is_two_thirds() {
    for m in [plane(2.5, 128), cone(2, 1, 128)] {
        let l = lemma_density_bound(&m).unwrap();
        assert!((l.ratio / (2.0 / 3.0) - 1.0).abs() < 1e-2, "{l:?}");
    }
    assert!(lemma_density_bound(&plane(1.5, 32)).is_err());
}

#[test]
fn phase_dirichlet_energy_vanishes_on_planes_and_cones() {
    assert_eq!(dirichlet_sigma(&plane(2.5, 32), 1.0).unwrap().phase, 0.0);
    // Zero at the nodes; the in-element phase is a discretization effect.
    let (a, b) = (
        dirichlet_sigma(&cone(2, 1, 32), 1.0).unwrap().phase,
        dirichlet_sigma(&cone(2, 1, 64), 1.0).unwrap().phase,
    );
    assert!(b < 2e-3 && a / b > 8.0, "{a} {b}");
    let d = dirichlet_sigma(&offset_plane(64), 1.0).unwrap();
    assert!(d.phase > 1.0 && d.discrepancy < 1e-10 * d.phase, "{d:?}");
}

#[test]
fn balance_law_on_plane_and_cone() {
    let cut = make_cutoff(CutoffKind::Main).unwrap();
    let res = |m: &SurfaceMesh| k10_balance(m, 1.0, &cut).unwrap().residual;
    let (a, b) = (res(&plane(2.5, 64)), res(&plane(2.5, 128)));
    assert!(b < a / 1.7 && b < 1e-3, "{a} {b}");
    let (a, b) = (res(&cone(2, 1, 64)), res(&cone(2, 1, 128)));
    assert!(b < a / 1.7 && b < 1e-2, "{a} {b}");
}

#[test]
fn balance_law_with_nonzero_phase() {
    let cut = make_cutoff(CutoffKind::Main).unwrap();
    let k = k10_balance(&offset_plane(128), 1.0, &cut).unwrap();
    for v in [k.dirichlet_slope, k.curvature, k.cross, k.phase] {
        assert!(v.abs() > 0.1, "{k:?}");
    }
    assert_eq!(k.theta0, 0.0);
    assert!(k.residual < 1e-3, "{k:?}");
    // The balance detects a wrong origin weight.
    let wrong = k10_balance_with_theta(&offset_plane(128), 1.0, &cut, 1.0).unwrap();
    assert!(wrong.residual > 0.05);
}

#[test]
fn balance_law_needs_coverage() {
    let cut = make_cutoff(CutoffKind::Main).unwrap();
    assert!(k10_balance(&plane(1.5, 32), 1.0, &cut).is_err());
}

#[test]
fn main_theorem_ratios_are_finite() {
    let radii = [0.1, 0.2, 0.4, 0.8];
    for m in [plane(2.5, 64), cone(2, 1, 64)] {
        let c = main_theorem_check(&m, &radii).unwrap();
        assert!(c.bounded, "{c:?}");
        // Cones and planes have constant density, and the annulus area is 15/4 of the
        // unit-scale density.
        for (u, l) in c.c_upper.iter().zip(&c.c_lower) {
            assert!((u * 15.0 / 4.0 - 1.0).abs() < 2e-2, "{u}");
            assert!((l - 2.0).abs() < 3e-2, "{l}");
        }
    }
    assert!(main_theorem_check(&plane(2.5, 32), &[0.5, 1.5]).is_err());
}

#[test]
fn classical_monotonicity_on_euclidean_zoo() {
    let radii: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let res = PolarResolution::with_angular(96);
    for (kind, ext, card) in [
        (ClassicalKind::Plane, 5.5, 1),
        (ClassicalKind::TwoPlanes, 5.5, 2),
        (ClassicalKind::Catenoid { neck: 1.0 }, 2.5, 0),
    ] {
        let m = zoo::make_classical_minimal(kind, ext, res).unwrap();
        let c = classical_monotonicity(&m, &radii).unwrap();
        assert_eq!(c.cardinality, card);
        assert!(c.max_residual < 1e-2, "{kind:?}: {c:?}");
        assert!(c.monotone, "{kind:?}");
    }
}

#[test]
fn classical_monotonicity_rejects_non_minimal_and_heisenberg_meshes() {
    let g = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, 16).unwrap();
    assert!(classical_monotonicity(&g, &[0.5]).is_err());
    assert!(classical_monotonicity(&g.euclidean_projection(), &[0.5]).is_err());
}

#[test]
fn bernstein_plane_and_cone() {
    let radii = [0.1, 0.2, 0.4, 0.8];
    let b = bernstein_check(&plane(2.5, 128), &radii).unwrap();
    assert!(
        b.f.iter().all(|f| (f / TAU - 1.0).abs() < 1e-2),
        "{:?}",
        b.f
    );
    assert!(b.s.iter().all(|s| *s < 1e-12));
    assert!(b.plane_like);
    assert_eq!(b.conclusion, Some(0.0));
    assert_eq!(b.conclusion_holds, Some(true));
    assert!(b.terms.iter().all(|t| t.curvature == 0.0 && t.cross == 0.0));
    let c = bernstein_check(&cone(2, 1, 128), &radii).unwrap();
    assert!(
        c.f.iter().all(|f| (f / (TAU * SQRT_2) - 1.0).abs() < 1e-2),
        "{:?}",
        c.f
    );
    assert!(!c.plane_like);
    assert_eq!(c.conclusion, None);
}

#[test]
fn bernstein_balance_converges_with_nonzero_phase() {
    let res = |n| bernstein_check(&offset_plane(n), &[1.0]).unwrap().terms[0].residual;
    let (a, b) = (res(128), res(256));
    assert!(b < 1e-3 && b < a, "{a} {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn epsilon_cutoff_is_monotone(eps in 0.01f64..0.24, t in 0.0f64..3.0) {
        let c = make_cutoff(CutoffKind::Epsilon { eps }).unwrap();
        prop_assert!(c.d1(t) <= 0.0);
        prop_assert!((0.0..=1.0).contains(&c.chi(t)));
    }

    #[test]
    fn weight_stays_between_one_and_half_pi(s in -1e9f64..1e9) {
        let w = weight(s);
        prop_assert!((1.0..=FRAC_PI_2).contains(&w), "{}", w);
        prop_assert_eq!(w, weight(-s));
    }

    #[test]
    fn plane_density_is_scale_free(r in 0.1f64..2.0) {
        let m = plane(2.5, 48);
        let d = density_curve(&m, &[r]).unwrap().density[0];
        prop_assert!((d / PI - 1.0).abs() < 1e-2);
    }
}
