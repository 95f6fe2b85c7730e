//! Sub-level and band quadrature by exact linear clipping.
//!
//! Each triangle is cut by the linear interpolant of a nodal scalar; the
//! retained polygon is fanned into triangles which are integrated with the
//! three-edge-midpoint rule (exact for quadratics, never samples a corner).

use super::SurfaceMesh;
use crate::parallel;
use crate::vector::{self, Vector, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    All,
    Below(f64),
    Above(f64),
    /// `a < level < b`
    Band(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionScalar {
    Gauge,
    Rho,
}

pub fn level_field(mesh: &SurfaceMesh, scalar: RegionScalar) -> Vec<f64> {
    match scalar {
        RegionScalar::Gauge => mesh.gauge_field(),
        RegionScalar::Rho => mesh.rho_field(),
    }
}

/// A quadrature point.
#[derive(Clone, Copy, Debug)]
pub struct Sample {
    pub element: usize,
    pub bary: [f64; 3],
    pub point: Vector,
    pub phi: f64,
    pub weight: f64,
}

type Poly = Vec<[f64; 3]>;

/// Keeps the part of `poly` where `s·(value − level) ≤ 0`.
fn clip(poly: &Poly, vals: [f64; 3], level: f64, s: f64) -> Poly {
    let f = |b: &[f64; 3]| s * (b[0] * vals[0] + b[1] * vals[1] + b[2] * vals[2] - level);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
        let (fp, fq) = (f(&p), f(&q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(std::array::from_fn(|i| p[i] + t * (q[i] - p[i])));
        }
    }
    out
}

fn inside(v: f64, region: Region) -> bool {
    match region {
        Region::All => true,
        Region::Below(r) => v <= r,
        Region::Above(r) => v >= r,
        Region::Band(a, b) => v >= a && v <= b,
    }
}

/// Visits the quadrature points of element `t` restricted to `region`.
pub(crate) fn element_samples(
    mesh: &SurfaceMesh,
    level: &[f64],
    region: Region,
    t: usize,
    area: f64,
    mut visit: impl FnMut(&Sample),
) {
    let tri = mesh.triangles[t];
    let vals = if region == Region::All {
        [0.0; 3]
    } else {
        tri.map(|i| level[i])
    };
    let full = vals.iter().all(|&v| inside(v, region));
    let poly: Poly = if full {
        vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    } else {
        if matches!(region, Region::Below(r) if vals.iter().all(|&v| v >= r))
            || matches!(region, Region::Above(r) if vals.iter().all(|&v| v <= r))
        {
            return;
        }
        let mut p: Poly = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        match region {
            Region::All => {}
            Region::Below(r) => p = clip(&p, vals, r, 1.0),
            Region::Above(r) => p = clip(&p, vals, r, -1.0),
            Region::Band(a, b) => {
                p = clip(&p, vals, b, 1.0);
                p = clip(&p, vals, a, -1.0);
            }
        }
        p
    };
    if poly.len() < 3 {
        return;
    }
    let pos = tri.map(|i| mesh.positions[i]);
    let phi = tri.map(|i| mesh.phi[i]);
    for k in 1..poly.len() - 1 {
        let (b0, b1, b2) = (poly[0], poly[k], poly[k + 1]);
        let frac = ((b1[1] - b0[1]) * (b2[2] - b0[2]) - (b1[2] - b0[2]) * (b2[1] - b0[1])).abs();
        if frac == 0.0 {
            continue;
        }
        let w = area * frac / 3.0;
        for (p, q) in [(b0, b1), (b1, b2), (b2, b0)] {
            let bary: [f64; 3] = std::array::from_fn(|i| 0.5 * (p[i] + q[i]));
            let mut point = ZERO;
            for c in 0..3 {
                point = vector::axpy(&point, bary[c], &pos[c]);
            }
            let s = Sample {
                element: t,
                bary,
                point,
                phi: bary[0] * phi[0] + bary[1] * phi[1] + bary[2] * phi[2],
                weight: w,
            };
            visit(&s);
        }
    }
}

/// Image area of every element.
pub(crate) fn element_areas(mesh: &SurfaceMesh) -> Vec<f64> {
    parallel::map_indexed(mesh.triangle_count(), |t| {
        let [a, b, c] = mesh.triangles[t].map(|i| mesh.positions[i]);
        0.5 * vector::wedge_norm2(&vector::sub(&b, &a), &vector::sub(&c, &a)).sqrt()
    })
}

/// `∫_region f dvol`, with the region cut out of each element along the
/// linear interpolant of the nodal `level` values.
pub fn integrate<F>(mesh: &SurfaceMesh, level: &[f64], region: Region, f: F) -> f64
where
    F: Fn(&Sample) -> f64 + Sync,
{
    let areas = element_areas(mesh);
    integrate_with_areas(mesh, &areas, level, region, f)
}

pub(crate) fn integrate_with_areas<F>(
    mesh: &SurfaceMesh,
    areas: &[f64],
    level: &[f64],
    region: Region,
    f: F,
) -> f64
where
    F: Fn(&Sample) -> f64 + Sync,
{
    parallel::sum_indexed(mesh.triangle_count(), |t| {
        let mut acc = 0.0;
        element_samples(mesh, level, region, t, areas[t], |s| acc += s.weight * f(s));
        acc
    })
}

pub fn area(mesh: &SurfaceMesh, scalar: RegionScalar, region: Region) -> f64 {
    integrate(mesh, &level_field(mesh, scalar), region, |_| 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::unit_triangle;

    #[test]
    fn full_triangle_area() {
        let m = unit_triangle();
        assert!((area(&m, RegionScalar::Rho, Region::All) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clipped_area_of_corner() {
        // level x + y on the unit triangle: {x + y < 1/2} has area 1/8.
        let m = unit_triangle();
        let level = vec![0.0, 1.0, 1.0];
        let a = integrate(&m, &level, Region::Below(0.5), |_| 1.0);
        assert!((a - 0.125).abs() < 1e-15);
        let b = integrate(&m, &level, Region::Band(0.5, 2.0), |_| 1.0);
        assert!((a + b - 0.5).abs() < 1e-15);
        let c = integrate(&m, &level, Region::Above(0.5), |_| 1.0);
        assert!((b - c).abs() < 1e-15);
    }

    #[test]
    fn midpoint_rule_is_exact_for_quadratics() {
        let m = unit_triangle();
        // ∫ x² over the unit triangle = 1/12.
        let v = integrate(&m, &[0.0; 3], Region::All, |s| s.point[0] * s.point[0]);
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
    }
}
