use std::f64::consts::{PI, SQRT_2};

use hlmono::mesh::{self, area, legendrian_defect, legendrian_lift, Region, RegionScalar};
use hlmono::zoo::{self, PolarResolution, Potential, STANDARD_BASIS};
use hlmono::{Ambient, SurfaceMesh};
use proptest::prelude::*;

fn plane(n: usize) -> SurfaceMesh {
    zoo::make_plane(STANDARD_BASIS, None, 2.5, PolarResolution::with_angular(n)).unwrap()
}

fn cone(p: u32, q: u32, n: usize) -> SurfaceMesh {
    zoo::make_sw_cone(
        p,
        q,
        1.0 / 64.0,
        2.0,
        PolarResolution::with_angular(n),
        true,
    )
    .unwrap()
}

#[test]
fn plane_disk_areas() {
    let m = plane(128);
    for r in [0.3, 1.0, 2.0] {
        let a = area(&m, RegionScalar::Gauge, Region::Below(r));
        assert!((a / (PI * r * r) - 1.0).abs() < 1e-3, "r = {r}: {a}");
    }
    let band = area(&m, RegionScalar::Gauge, Region::Band(1.0, 2.0));
    assert!((band / (3.0 * PI) - 1.0).abs() < 1e-3);
}

#[test]
fn cone_area_matches_closed_form() {
    let m = cone(2, 1, 128);
    for r in [0.25, 1.0] {
        let a = area(&m, RegionScalar::Gauge, Region::Below(r));
        let exact = PI * SQRT_2 * r * r;
        assert!((a / exact - 1.0).abs() < 1e-2, "r = {r}: {a} vs {exact}");
    }
}

#[test]
fn area_error_drops_under_refinement() {
    let err = |n| {
        let m = cone(2, 1, n);
        (area(&m, RegionScalar::Gauge, Region::Below(1.0)) / (PI * SQRT_2) - 1.0).abs()
    };
    let (coarse, fine) = (err(32), err(64));
    assert!(coarse / fine >= 3.0, "{coarse} -> {fine}");
}

#[test]
fn induced_metric_area_sums_to_clipped_total() {
    let m = plane(64);
    let total: f64 = mesh::induced_metric(&m)
        .unwrap()
        .iter()
        .zip(&m.triangles)
        .map(|(g, t)| {
            let [a, b, c] = t.map(|i| m.params[i]);
            0.5 * g.area_element * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        })
        .sum();
    let clipped = area(&m, RegionScalar::Gauge, Region::All);
    assert!((total - clipped).abs() < 1e-10 * clipped);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn clipped_area_is_additive(a in 0.05f64..1.0, d in 0.01f64..1.2) {
        let m = cone(3, 2, 48);
        let b = a + d;
        let lo = area(&m, RegionScalar::Gauge, Region::Below(a));
        let mid = area(&m, RegionScalar::Gauge, Region::Band(a, b));
        let hi = area(&m, RegionScalar::Gauge, Region::Below(b));
        prop_assert!((lo + mid - hi).abs() < 1e-12 * hi);
    }
}

#[test]
fn plane_lift_is_zero() {
    let mut m =
        zoo::make_plane(STANDARD_BASIS, None, 1.0, PolarResolution::with_angular(32)).unwrap();
    m.phi.iter_mut().for_each(|p| *p = 1.0);
    let rep = legendrian_lift(&mut m, 1e-12).unwrap();
    assert_eq!(rep.loop_defect, 0.0);
    assert!(m.phi.iter().all(|&p| p == 0.0));
}

#[test]
fn cone_lift_is_small_and_converges() {
    let lift_max = |n| {
        let mut m = cone(2, 1, n);
        legendrian_lift(&mut m, 1e-6).unwrap();
        m.phi.iter().map(|p| p.abs()).fold(0.0, f64::max)
    };
    let (a, b) = (lift_max(64), lift_max(128));
    assert!(a < 2e-2, "{a}");
    assert!(a / b > 3.0, "{a} -> {b}");
}

#[test]
fn non_lagrangian_positions_have_loop_defect() {
    // G = (x₁, x₂, 0, 0): circulation of x₁dx₂ − x₂dx₁ is twice the enclosed area.
    let mut m = zoo::make_classical_minimal(
        zoo::ClassicalKind::Plane,
        1.0,
        PolarResolution::with_angular(16),
    )
    .unwrap();
    m.ambient = Ambient::Heisenberg2;
    let rep = legendrian_lift(&mut m, 1e-9).unwrap();
    assert!(!rep.exact);
    let smallest_cell = m
        .triangles
        .iter()
        .map(|t| {
            let [a, b, c] = t.map(|i| m.params[i]);
            0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        })
        .fold(f64::INFINITY, f64::min);
    assert!(rep.loop_defect >= 2.0 * smallest_cell * 0.999);
}

#[test]
fn lift_is_idempotent_up_to_a_constant() {
    let mut m = zoo::make_lagrangian_graph(Potential::CubicSum { amp: 0.1 }, 1.0, 12).unwrap();
    let before = m.phi.clone();
    legendrian_lift(&mut m, 1e-10).unwrap();
    let c = m.phi[0] - before[0];
    let dev = m
        .phi
        .iter()
        .zip(&before)
        .map(|(a, b)| (a - b - c).abs())
        .fold(0.0, f64::max);
    assert!(dev <= 1e-12, "{dev}");
}

#[test]
fn disconnected_mesh_cannot_be_lifted() {
    let two = zoo::make_classical_minimal(
        zoo::ClassicalKind::TwoPlanes,
        1.0,
        PolarResolution::with_angular(8),
    )
    .unwrap();
    let mut m = two;
    m.ambient = Ambient::Heisenberg2;
    assert!(legendrian_lift(&mut m, 1.0).is_err());
}

#[test]
fn defects_of_zoo_surfaces() {
    let d = legendrian_defect(&plane(32)).unwrap();
    assert!(d.max_contact < 1e-14 && d.max_lagrangian < 1e-14);

    let g = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, 10).unwrap();
    let d = legendrian_defect(&g).unwrap();
    assert!(d.max_contact < 1e-12 && d.max_lagrangian < 1e-12, "{d:?}");

    let (a, b) = (
        legendrian_defect(&cone(2, 1, 32)).unwrap(),
        legendrian_defect(&cone(2, 1, 64)).unwrap(),
    );
    assert!(a.max_contact / b.max_contact > 3.5, "{a:?} {b:?}");
    assert!(a.max_lagrangian / b.max_lagrangian > 3.5, "{a:?} {b:?}");
}

#[test]
fn zoo_plane_round_trips_through_hlmesh() {
    let m = plane(16);
    let text = mesh::write_mesh(&m);
    let back = mesh::parse_mesh(&text).unwrap();
    assert_eq!(mesh::write_mesh(&back), text);
    assert_eq!(back.positions, m.positions);
    assert_eq!(back.phi, m.phi);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.hlmesh");
    mesh::save_mesh(&m, &path).unwrap();
    let loaded = mesh::load_mesh(&path).unwrap();
    assert_eq!(loaded.triangles, m.triangles);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn cone_circle_length() {
    let (r1, r2) = zoo::sw_radii(2, 1);
    // |γ'|² = p² r₁² + q² r₂² = pq.
    let speed2 = 4.0 * r1 * r1 + r2 * r2;
    assert!((speed2 - 2.0).abs() < 1e-14);
    let m = cone(2, 1, 256);
    let ring = m.rings.unwrap();
    let k = (0..ring.rings)
        .find(|&k| (hlmono::vector::norm(&m.positions[ring.ring(k)[0]]) - 1.0).abs() < 1e-12)
        .unwrap();
    let nodes = ring.ring(k);
    let len: f64 = (0..nodes.len())
        .map(|j| {
            let (a, b) = (
                m.positions[nodes[j]],
                m.positions[nodes[(j + 1) % nodes.len()]],
            );
            hlmono::vector::norm(&hlmono::vector::sub(&a, &b))
        })
        .sum();
    assert!((len / (2.0 * PI * SQRT_2) - 1.0).abs() < 1e-4);
}

#[test]
fn unit_cone_is_a_plane() {
    let m = cone(1, 1, 16);
    // Positions span a real 2-plane: every vector is a combination of two of them.
    let n = m.node_count();
    let a = m.positions[1];
    let b = m.positions[1 + 4];
    for i in 0..n {
        let x = m.positions[i];
        let c = hlmono::vector::wedge_norm2(&a, &b);
        let proj_a = hlmono::vector::dot(&x, &a);
        let proj_b = hlmono::vector::dot(&x, &b);
        let (aa, ab, bb) = (
            hlmono::vector::norm2(&a),
            hlmono::vector::dot(&a, &b),
            hlmono::vector::norm2(&b),
        );
        let ca = (proj_a * bb - proj_b * ab) / c;
        let cb = (proj_b * aa - proj_a * ab) / c;
        let r = hlmono::vector::sub(
            &x,
            &hlmono::vector::axpy(&hlmono::vector::scale(&a, ca), cb, &b),
        );
        assert!(hlmono::vector::norm(&r) < 1e-12);
    }
}
