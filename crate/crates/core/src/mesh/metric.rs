use super::SurfaceMesh;
use crate::error::{Error, Result};
use crate::vector::{self, Vector};

/// First fundamental form of the affine interpolant in parameter coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricTensor {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub area_element: f64,
}

/// Parameter-space Jacobian columns `(∂₁, ∂₂)` of element `t`.
pub(crate) fn element_jacobian(mesh: &SurfaceMesh, t: usize) -> Option<(Vector, Vector)> {
    let [a, b, c] = mesh.triangles[t];
    let (pa, pb, pc) = (mesh.params[a], mesh.params[b], mesh.params[c]);
    let (u1, u2) = (
        [pb[0] - pa[0], pb[1] - pa[1]],
        [pc[0] - pa[0], pc[1] - pa[1]],
    );
    let det = u1[0] * u2[1] - u1[1] * u2[0];
    if det == 0.0 {
        return None;
    }
    let e1 = vector::sub(&mesh.positions[b], &mesh.positions[a]);
    let e2 = vector::sub(&mesh.positions[c], &mesh.positions[a]);
    // [e1 e2] = D [u1 u2]  =>  D = [e1 e2] [u1 u2]^-1
    let inv = [[u2[1] / det, -u2[0] / det], [-u1[1] / det, u1[0] / det]];
    let d1 = vector::axpy(&vector::scale(&e1, inv[0][0]), inv[1][0], &e2);
    let d2 = vector::axpy(&vector::scale(&e1, inv[0][1]), inv[1][1], &e2);
    Some((d1, d2))
}

pub fn induced_metric(mesh: &SurfaceMesh) -> Result<Vec<MetricTensor>> {
    (0..mesh.triangle_count())
        .map(|t| {
            let degenerate = || Error::InvalidTriangle {
                triangle: t,
                reason: "degenerate element".into(),
            };
            let (d1, d2) = element_jacobian(mesh, t).ok_or_else(degenerate)?;
            let (g11, g12, g22) = (
                vector::norm2(&d1),
                vector::dot(&d1, &d2),
                vector::norm2(&d2),
            );
            let det = g11 * g22 - g12 * g12;
            if !(det > 0.0) {
                return Err(degenerate());
            }
            Ok(MetricTensor {
                g11,
                g12,
                g22,
                area_element: det.sqrt(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::unit_triangle;

    #[test]
    fn isometric_triangle_has_identity_metric() {
        let g = induced_metric(&unit_triangle()).unwrap();
        assert_eq!(g.len(), 1);
        let m = g[0];
        assert!((m.g11 - 1.0).abs() < 1e-15 && m.g12.abs() < 1e-15 && (m.g22 - 1.0).abs() < 1e-15);
        assert!((m.area_element - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_image_scales_metric() {
        let mut m = unit_triangle();
        for p in &mut m.positions {
            *p = vector::scale(p, 3.0);
        }
        let g = induced_metric(&m).unwrap()[0];
        assert!((g.area_element - 9.0).abs() < 1e-12);
    }
}
