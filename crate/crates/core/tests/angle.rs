use std::f64::consts::{FRAC_1_SQRT_2, PI};

use hlmono::angle::{
    det_angle, divergence_form_residual, el_residual, lagrangian_angle_form, maslov_index, wrap,
    AngleForm,
};
use hlmono::calculus::WeakOperatorContext;
use hlmono::vector::{self, from4};
use hlmono::zoo::{self, PolarResolution, Potential, STANDARD_BASIS};
use hlmono::SurfaceMesh;
use proptest::prelude::*;

fn plane(n: usize) -> SurfaceMesh {
    zoo::make_plane(STANDARD_BASIS, None, 1.0, PolarResolution::with_angular(n)).unwrap()
}

fn cone(p: u32, q: u32, n: usize) -> SurfaceMesh {
    zoo::make_sw_cone(p, q, 0.125, 1.0, PolarResolution::with_angular(n), true).unwrap()
}

/// Empirical order; residuals already at round-off count as converged.
fn order(coarse: f64, fine: f64) -> f64 {
    if fine < 1e-10 {
        f64::INFINITY
    } else {
        (coarse / fine).log2()
    }
}

#[test]
fn plane_angle_is_constant() {
    let m = plane(32);
    let f = lagrangian_angle_form(&m).unwrap();
    assert!(f.dbeta.iter().all(|d| d.abs() < 1e-12));
    assert!(f.beta_branch.iter().all(|b| b.abs() < 1e-12));
}

#[test]
fn non_lagrangian_plane_is_rejected() {
    let mut m = plane(8);
    for p in &mut m.positions {
        // (x₁, 0, x₂, 0) ↦ (x₁, x₂, 0, 0)
        p.swap(1, 2);
    }
    assert!(lagrangian_angle_form(&m).is_err());
}

#[test]
fn cone_element_angle_matches_analytic_branch() {
    let (p, q) = (2, 1);
    let m = cone(p, q, 128);
    let f = lagrangian_angle_form(&m).unwrap();
    let chart = m.chart.as_ref().unwrap();
    let mut worst: f64 = 0.0;
    for (t, tri) in m.triangles.iter().enumerate() {
        let Some(c) = chart.element_coords(tri) else {
            continue;
        };
        let tc = (c[0][1] + c[1][1] + c[2][1]) / 3.0;
        let exact = (p - q) as f64 * tc - PI / 2.0;
        worst = worst.max(wrap(f.beta_branch[t] - exact).abs());
    }
    assert!(worst < 0.05, "{worst}");
}

#[test]
fn cone_increment_along_angular_direction() {
    let (p, q, n) = (3, 2, 64);
    let m = cone(p, q, n);
    let f = lagrangian_angle_form(&m).unwrap();
    let ring = m.rings.unwrap().ring(5);
    for j in 0..n {
        let d = f.increment(ring[j], ring[(j + 1) % n]).unwrap();
        assert!(
            (d - (p - q) as f64 * 2.0 * PI / n as f64).abs() < 1e-3,
            "{d}"
        );
    }
    assert_eq!(
        f.increment(ring[1], ring[0]),
        f.increment(ring[0], ring[1]).map(|d| -d)
    );
}

#[test]
fn maslov_index_around_cone_tips() {
    for (p, q) in [(2, 1), (3, 2)] {
        let m = cone(p, q, 64);
        let f = lagrangian_angle_form(&m).unwrap();
        let ring = m.rings.unwrap().ring(3);
        let idx = maslov_index(&m, &f, &ring).unwrap();
        assert_eq!(idx.index, (p - q) as i64);
        assert!(idx.rounding_residual < 1e-8);
        let fan = m.link_loop(0).unwrap();
        assert_eq!(
            f.circulation(&fan).map(|c| (c / (2.0 * PI)).round()),
            Some((p - q) as f64)
        );
    }
}

#[test]
fn maslov_index_on_plane_and_forbidden_loops() {
    let m = plane(32);
    let f = lagrangian_angle_form(&m).unwrap();
    let ring = m.rings.unwrap().ring(10);
    assert_eq!(maslov_index(&m, &f, &ring).unwrap().index, 0);
    let through_origin = vec![0, ring[0], ring[1]];
    assert!(maslov_index(&m, &f, &through_origin).is_err());
}

fn fan_cycle_defect(m: &SurfaceMesh, f: &AngleForm) -> f64 {
    let ctx = WeakOperatorContext::new(m);
    let origins = m.origin_preimages();
    (0..m.node_count())
        .filter(|i| ctx.interior[*i] && !origins.contains(i))
        .filter_map(|v| m.link_loop(v))
        .filter(|lp| !lp.iter().any(|i| origins.contains(i)))
        .map(|lp| f.circulation(&lp).unwrap().abs())
        .fold(0.0, f64::max)
}

#[test]
fn angle_form_is_closed_away_from_tips() {
    let m = cone(2, 1, 48);
    let f = lagrangian_angle_form(&m).unwrap();
    assert!(fan_cycle_defect(&m, &f) < 1e-8);
    let g = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, 12).unwrap();
    let fg = lagrangian_angle_form(&g).unwrap();
    assert!(fan_cycle_defect(&g, &fg) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn det_angle_is_frame_independent(theta in -3.0f64..3.0, rot in -3.0f64..3.0, t in 0usize..500) {
        // Unitary image of the standard plane, then rotate its frame by `rot`.
        let (c, s) = (theta.cos(), theta.sin());
        let m = zoo::make_plane(
            [[c, s, 0.0, 0.0], [0.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]],
            None,
            1.0,
            PolarResolution::with_angular(16),
        )
        .unwrap();
        let ctx = WeakOperatorContext::new(&m);
        let t = t % m.triangle_count();
        let [u1, u2] = ctx.frames[t];
        let (cr, sr) = (rot.cos(), rot.sin());
        let v1 = vector::axpy(&vector::scale(&u1, cr), sr, &u2);
        let v2 = vector::axpy(&vector::scale(&u1, -sr), cr, &u2);
        prop_assert!(wrap(det_angle(&u1, &u2) - det_angle(&v1, &v2)).abs() < 1e-10);
    }
}

#[test]
fn j_rotates_the_determinant_angle() {
    let e1 = from4([1.0, 0.0, 0.0, 0.0]);
    let e3 = from4([0.0, 0.0, 1.0, 0.0]);
    assert!(det_angle(&e1, &e3).abs() < 1e-15);
    let b = det_angle(&vector::apply_j(&e1), &e3);
    assert!((b - PI / 2.0).abs() < 1e-15);
}

#[test]
fn el_residual_vanishes_on_plane() {
    let m = plane(32);
    let f = lagrangian_angle_form(&m).unwrap();
    let r = el_residual(&m, &f).unwrap();
    assert!(r.el_norm < 1e-12 && r.harmonic_norm < 1e-12, "{r:?}");
    assert!(r.nodes > 0);
}

#[test]
fn el_residual_converges_on_cone() {
    let run = |n| {
        let m = cone(2, 1, n);
        let f = lagrangian_angle_form(&m).unwrap();
        (
            el_residual(&m, &f).unwrap(),
            divergence_form_residual(&m, &f).unwrap(),
        )
    };
    let ((a, da), (b, db)) = (run(32), run(64));
    assert!(order(a.el_norm, b.el_norm) >= 1.5, "{a:?} {b:?}");
    assert!(
        order(a.harmonic_norm, b.harmonic_norm) >= 0.8,
        "{a:?} {b:?}"
    );
    let (oe, od) = (order(a.el_norm, b.el_norm), order(da, db));
    assert!(
        od >= 0.8 && (oe - od).abs() < 1.0,
        "el order {oe}, divergence-form order {od}"
    );
}

#[test]
fn cubic_graph_is_a_negative_control() {
    let g = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, 16).unwrap();
    let r = el_residual(&g, &lagrangian_angle_form(&g).unwrap()).unwrap();
    let finer = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, 32).unwrap();
    let rf = el_residual(&finer, &lagrangian_angle_form(&finer).unwrap()).unwrap();
    // iΔG + ∇β·∇G = 0 is kinematic and converges on any Lagrangian; Δβ = 0 fails.
    assert!(order(r.el_norm, rf.el_norm) > 1.5, "{r:?} {rf:?}");
    assert!(
        r.harmonic_norm > 1.0 && rf.harmonic_norm > 0.9 * r.harmonic_norm,
        "{r:?} {rf:?}"
    );
    let p = plane(64);
    let rp = el_residual(&p, &lagrangian_angle_form(&p).unwrap()).unwrap();
    assert!(rf.total() >= 10.0 * rp.total().max(1e-12));
}

#[test]
fn quadratic_graph_is_a_plane() {
    let g = zoo::make_lagrangian_graph(Potential::Quadratic { amp: 1.0 }, 1.0, 8).unwrap();
    let r = el_residual(&g, &lagrangian_angle_form(&g).unwrap()).unwrap();
    assert!(r.el_norm < 1e-10 && r.harmonic_norm < 1e-10, "{r:?}");
}

#[test]
fn el_residual_requires_chart() {
    let mut m = plane(8);
    let f = lagrangian_angle_form(&m).unwrap();
    m.chart = None;
    assert!(el_residual(&m, &f).is_err());
}
