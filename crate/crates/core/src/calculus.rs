//! Discrete surface calculus on P1 triangles.
//!
//! Gradients are piecewise constant, the Laplace–Beltrami operator is the
//! cotangent Laplacian over lumped (barycentric) masses, and the sign is fixed
//! so that `Δρ² = 4` on a flat disk.

use crate::error::{Error, Result};
use crate::mesh::{self, Region, Sample, SurfaceMesh};
use crate::parallel;
use crate::vector::{self, Vector, ZERO};

/// One value per node.
pub type ScalarField = Vec<f64>;
/// One ambient vector per element.
pub type TangentField = Vec<Vector>;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
const GAUSS5: [(f64, f64); 5] = [
    (0.04691007703066802, 0.11846344252809456),
    (0.23076534494715845, 0.23931433524968326),
    (0.5, 0.28444444444444444),
    (0.7692346550528415, 0.23931433524968326),
    (0.9530899229693319, 0.11846344252809456),
];

pub struct WeakOperatorContext<'a> {
    pub mesh: &'a SurfaceMesh,
    pub areas: Vec<f64>,
    pub masses: Vec<f64>,
    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// `½(cot α + cot β)` per entry of `edges`.
    pub cot_weights: Vec<f64>,
    /// Orthonormal tangent frame per element (Gram–Schmidt on the edges
    /// leaving the first corner).
    pub frames: Vec<[Vector; 2]>,
    /// Gradients of the three hat functions per element.
    pub hat_gradients: Vec<[Vector; 3]>,
    pub boundary: Vec<bool>,
    /// Nodes not on the boundary and not adjacent to it.
    pub interior: Vec<bool>,
}

fn hat_gradients(x: [Vector; 3]) -> [Vector; 3] {
    let e1 = vector::sub(&x[1], &x[0]);
    let e2 = vector::sub(&x[2], &x[0]);
    let (g11, g12, g22) = (
        vector::norm2(&e1),
        vector::dot(&e1, &e2),
        vector::norm2(&e2),
    );
    let det = g11 * g22 - g12 * g12;
    // ∇λ₁ = a e1 + b e2 with G[a,b] = [1,0]; likewise ∇λ₂ with [0,1].
    let l1 = vector::axpy(&vector::scale(&e1, g22 / det), -g12 / det, &e2);
    let l2 = vector::axpy(&vector::scale(&e1, -g12 / det), g11 / det, &e2);
    let l0 = vector::scale(&vector::add(&l1, &l2), -1.0);
    [l0, l1, l2]
}

fn frame(x: [Vector; 3]) -> [Vector; 2] {
    let e1 = vector::sub(&x[1], &x[0]);
    let e2 = vector::sub(&x[2], &x[0]);
    let u1 = vector::scale(&e1, 1.0 / vector::norm(&e1));
    let v = vector::axpy(&e2, -vector::dot(&e2, &u1), &u1);
    [u1, vector::scale(&v, 1.0 / vector::norm(&v))]
}

impl<'a> WeakOperatorContext<'a> {
    pub fn new(mesh: &'a SurfaceMesh) -> Self {
        let nt = mesh.triangle_count();
        let corners = |t: usize| mesh.triangles[t].map(|i| mesh.positions[i]);
        let areas = mesh::clip_element_areas(mesh);
        let frames = parallel::map_indexed(nt, |t| frame(corners(t)));
        let hat = parallel::map_indexed(nt, |t| hat_gradients(corners(t)));

        let mut masses = vec![0.0; mesh.node_count()];
        let edges = mesh.edges();
        let mut cot_weights = vec![0.0; edges.len()];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let x = corners(t);
            for k in 0..3 {
                masses[tri[k]] += areas[t] / 3.0;
                let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                let a = vector::sub(&x[i], &x[k]);
                let b = vector::sub(&x[j], &x[k]);
                let cot = vector::dot(&a, &b) / vector::wedge_norm2(&a, &b).sqrt();
                let key = (tri[i].min(tri[j]), tri[i].max(tri[j]));
                let e = edges.binary_search(&key).expect("edge list is complete");
                cot_weights[e] += 0.5 * cot;
            }
        }
        let boundary = mesh.boundary_nodes();
        let mut interior: Vec<bool> = boundary.iter().map(|b| !b).collect();
        for &(i, j) in &edges {
            if boundary[i] {
                interior[j] = false;
            }
            if boundary[j] {
                interior[i] = false;
            }
        }
        WeakOperatorContext {
            mesh,
            areas,
            masses,
            edges,
            cot_weights,
            frames,
            hat_gradients: hat,
            boundary,
            interior,
        }
    }

    pub fn total_area(&self) -> f64 {
        parallel::pairwise_sum(&self.areas)
    }

    /// Gradient on element `t` of the affine interpolant of `f`.
    pub fn element_gradient(&self, t: usize, f: &[f64]) -> Vector {
        let tri = self.mesh.triangles[t];
        let g = &self.hat_gradients[t];
        let mut out = ZERO;
        for k in 0..3 {
            out = vector::axpy(&out, f[tri[k]], &g[k]);
        }
        out
    }

    /// Orthogonal projection onto the tangent plane of element `t`.
    pub fn project(&self, t: usize, w: &Vector) -> Vector {
        let [u1, u2] = &self.frames[t];
        vector::axpy(
            &vector::scale(u1, vector::dot(w, u1)),
            vector::dot(w, u2),
            u2,
        )
    }

    /// Visits the three edge-midpoint quadrature points of element `t`.
    pub fn samples(&self, t: usize, visit: impl FnMut(&Sample)) {
        mesh::clip_element_samples(self.mesh, &[], Region::All, t, self.areas[t], visit);
    }

    /// Duffy-collapsed 5×5 Gauss rule on element `t`, collapsing at corner
    /// `apex` (local index). Integrands with a `1/r` singularity at that
    /// corner become smooth.
    pub fn singular_samples(&self, t: usize, apex: usize, mut visit: impl FnMut(&Sample)) {
        let tri = self.mesh.triangles[t];
        let (b, c) = ((apex + 1) % 3, (apex + 2) % 3);
        let phi = |k: usize| self.mesh.phi.get(tri[k]).copied().unwrap_or(0.0);
        for (u, wu) in GAUSS5 {
            for (v, wv) in GAUSS5 {
                let mut bary = [0.0; 3];
                bary[apex] = 1.0 - u;
                bary[b] = u * (1.0 - v);
                bary[c] = u * v;
                let mut point = ZERO;
                for k in 0..3 {
                    point = vector::axpy(&point, bary[k], &self.mesh.positions[tri[k]]);
                }
                visit(&Sample {
                    element: t,
                    bary,
                    point,
                    phi: (0..3).map(|k| bary[k] * phi(k)).sum(),
                    weight: 2.0 * self.areas[t] * u * wu * wv,
                });
            }
        }
    }

    /// Element samples, switching to [`Self::singular_samples`] on elements
    /// with a corner in `apexes`.
    pub fn samples_avoiding(&self, t: usize, apexes: &[usize], visit: impl FnMut(&Sample)) {
        match self.mesh.triangles[t]
            .iter()
            .position(|i| apexes.contains(i))
        {
            Some(k) => self.singular_samples(t, k, visit),
            None => self.samples(t, visit),
        }
    }

    /// `Σ_T Σ_q w_q f(q)` over all elements, element-parallel with a fixed
    /// reduction order.
    pub fn integrate(&self, f: impl Fn(&Sample) -> f64 + Sync) -> f64 {
        parallel::sum_indexed(self.mesh.triangle_count(), |t| {
            let mut acc = 0.0;
            self.samples(t, |s| acc += s.weight * f(s));
            acc
        })
    }

    /// Fails if `test` is non-zero on a boundary node.
    pub fn check_test_support(&self, test: &[f64]) -> Result<()> {
        match (0..test.len()).find(|&i| self.boundary[i] && test[i] != 0.0) {
            Some(i) => Err(Error::Precondition(format!(
                "test function is non-zero on boundary node {i}"
            ))),
            None => Ok(()),
        }
    }
}

pub fn surface_gradient(ctx: &WeakOperatorContext, f: &[f64]) -> TangentField {
    parallel::map_indexed(ctx.mesh.triangle_count(), |t| ctx.element_gradient(t, f))
}

/// Cotangent Laplacian over lumped masses. Values at nodes outside
/// `ctx.interior` are computed but not certified.
pub fn laplace_beltrami(ctx: &WeakOperatorContext, f: &[f64]) -> ScalarField {
    let mut acc = vec![0.0; f.len()];
    for (&(i, j), &w) in ctx.edges.iter().zip(&ctx.cot_weights) {
        let d = w * (f[j] - f[i]);
        acc[i] += d;
        acc[j] -= d;
    }
    acc.iter().zip(&ctx.masses).map(|(a, m)| a / m).collect()
}

/// Splits `w` into its part in the tangent plane of `element` and the
/// orthogonal remainder.
pub fn tangent_normal_split(
    ctx: &WeakOperatorContext,
    element: usize,
    w: &Vector,
) -> (Vector, Vector) {
    let tan = ctx.project(element, w);
    (tan, vector::sub(w, &tan))
}

/// `−∫∇test·V − ∫test·s − Σ test(p) w(p)` with `V` element-constant and `s`
/// interpolated linearly. Zero when `div V = s + Σ w δ_p` weakly.
pub fn weak_divergence_residual(
    ctx: &WeakOperatorContext,
    v: &[Vector],
    s: &[f64],
    point_weights: &[(usize, f64)],
    test: &[f64],
) -> Result<f64> {
    ctx.check_test_support(test)?;
    let tris = &ctx.mesh.triangles;
    let flux = parallel::sum_indexed(tris.len(), |t| {
        ctx.areas[t] * vector::dot(&ctx.element_gradient(t, test), &v[t])
    });
    let source = ctx.integrate(|q| {
        let tri = tris[q.element];
        let interp = |f: &[f64]| (0..3).map(|k| q.bary[k] * f[tri[k]]).sum::<f64>();
        interp(test) * interp(s)
    });
    let dirac: f64 = point_weights.iter().map(|&(p, w)| test[p] * w).sum();
    Ok(-flux - source - dirac)
}
