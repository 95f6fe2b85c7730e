//! Lagrangian angle.
//!
//! On every element `β = arg det_ℂ(u₁, u₂)` for the Gram–Schmidt frame of the
//! edges leaving the first corner, read as two vectors of ℂ². Nodal values are
//! area-weighted circular means, and the 1-form is stored on oriented edges as
//! the wrapped difference of nodal values. With this normalization a
//! Hamiltonian-stationary surface satisfies `iΔG + ∇β·∇G = 0` in conformal
//! charts and `div(e^{−iβ}∇G) = 0`.

use std::f64::consts::{PI, TAU};

use crate::calculus::WeakOperatorContext;
use crate::error::{Error, Result};
use crate::mesh::{self, SurfaceMesh};
use crate::parallel;
use crate::vector::{self, Vector, ZERO};

/// Default bound on the per-element Lagrangian defect accepted by
/// [`lagrangian_angle_form`].
pub const LAGRANGIAN_TOLERANCE: f64 = 0.1;

/// Wraps an angle into `(−π, π]`.
pub fn wrap(x: f64) -> f64 {
    let y = x - TAU * (x / TAU).round();
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// `arg det_ℂ(u, v)` with `u, v ∈ ℂ²` stored as `(re, im, re, im)`.
pub fn det_angle(u: &Vector, v: &Vector) -> f64 {
    let re = u[0] * v[2] - u[1] * v[3] - (u[2] * v[0] - u[3] * v[1]);
    let im = u[0] * v[3] + u[1] * v[2] - (u[2] * v[1] + u[3] * v[0]);
    im.atan2(re)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleForm {
    /// Undirected edges `(i, j)`, `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Increment of β from `i` to `j` for each entry of `edges`, in `(−π, π]`.
    pub dbeta: Vec<f64>,
    /// Per-element branch value of β.
    pub beta_branch: Vec<f64>,
    /// Per-node circular mean of the incident element values.
    pub node_beta: Vec<f64>,
}

impl AngleForm {
    /// Increment of β along the oriented edge `i → j`.
    pub fn increment(&self, i: usize, j: usize) -> Option<f64> {
        let key = (i.min(j), i.max(j));
        let k = self.edges.binary_search(&key).ok()?;
        Some(if i < j { self.dbeta[k] } else { -self.dbeta[k] })
    }

    /// Sum of increments around a closed node cycle.
    pub fn circulation(&self, cycle: &[usize]) -> Option<f64> {
        (0..cycle.len())
            .map(|k| self.increment(cycle[k], cycle[(k + 1) % cycle.len()]))
            .sum()
    }
}

pub fn lagrangian_angle_form(mesh: &SurfaceMesh) -> Result<AngleForm> {
    lagrangian_angle_form_with_tolerance(mesh, LAGRANGIAN_TOLERANCE)
}

pub fn lagrangian_angle_form_with_tolerance(
    mesh: &SurfaceMesh,
    tolerance: f64,
) -> Result<AngleForm> {
    let defect = mesh::legendrian_defect(&mesh.clone_as_heisenberg())?;
    if defect.max_lagrangian > tolerance {
        return Err(Error::Precondition(format!(
            "mesh is not Lagrangian: defect {:.3e} exceeds {tolerance:.1e}",
            defect.max_lagrangian
        )));
    }
    let ctx = WeakOperatorContext::new(mesh);
    let beta_branch = parallel::map_indexed(mesh.triangle_count(), |t| {
        let [u1, u2] = &ctx.frames[t];
        det_angle(u1, u2)
    });
    let mut acc = vec![(0.0, 0.0); mesh.node_count()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (s, c) = beta_branch[t].sin_cos();
        for &i in tri {
            acc[i].0 += ctx.areas[t] * s;
            acc[i].1 += ctx.areas[t] * c;
        }
    }
    let node_beta: Vec<f64> = acc.iter().map(|(s, c)| s.atan2(*c)).collect();
    let edges = ctx.edges.clone();
    let dbeta = edges
        .iter()
        .map(|&(i, j)| wrap(node_beta[j] - node_beta[i]))
        .collect();
    Ok(AngleForm {
        edges,
        dbeta,
        beta_branch,
        node_beta,
    })
}

impl SurfaceMesh {
    /// Euclidean ℝ⁴ meshes are read as Lagrangian candidates in ℂ².
    fn clone_as_heisenberg(&self) -> SurfaceMesh {
        let mut m = self.clone();
        if m.dim() == 4 {
            m.ambient = crate::mesh::Ambient::Heisenberg2;
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaslovIndex {
    pub index: i64,
    /// Distance of `circulation / 2π` to the nearest integer.
    pub rounding_residual: f64,
}

/// `(1/2π) ∮ dβ` around `cycle`, which must avoid origin preimages.
pub fn maslov_index(mesh: &SurfaceMesh, form: &AngleForm, cycle: &[usize]) -> Result<MaslovIndex> {
    let origins = mesh.origin_preimages();
    if let Some(p) = cycle.iter().find(|i| origins.contains(i)) {
        return Err(Error::Precondition(format!(
            "loop passes through origin preimage {p}"
        )));
    }
    let c = form.circulation(cycle).ok_or_else(|| {
        Error::Precondition("loop uses a pair of nodes that is not an edge".into())
    })?;
    let w = c / TAU;
    let index = w.round();
    let rounding_residual = (w - index).abs();
    if rounding_residual >= 0.1 {
        return Err(Error::Precondition(format!(
            "Maslov circulation {w:.4} is not close to an integer"
        )));
    }
    Ok(MaslovIndex {
        index: index as i64,
        rounding_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElResidual {
    /// Mass-weighted L² norm of `iΔG + ∇β·∇G` in the conformal chart.
    pub el_norm: f64,
    /// Mass-weighted L² norm of `Δβ`.
    pub harmonic_norm: f64,
    /// Number of certified nodes.
    pub nodes: usize,
}

impl ElResidual {
    /// Residual of the whole system: the first equation holds on every
    /// Lagrangian surface, stationarity is carried by `Δβ = 0`.
    pub fn total(&self) -> f64 {
        self.el_norm + self.harmonic_norm
    }
}

struct ChartElement {
    /// Chart gradients of the hat functions.
    grad: [[f64; 2]; 3],
    area: f64,
    /// `½ cot` of the chart angle opposite each corner's next edge
    /// (edge `k+1 → k+2`).
    half_cot: [f64; 3],
}

fn chart_element(c: [[f64; 2]; 3]) -> Option<ChartElement> {
    let det = (c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[1][1] - c[0][1]) * (c[2][0] - c[0][0]);
    if !(det.abs() > 0.0) {
        return None;
    }
    let grad = std::array::from_fn(|k| {
        let (a, b) = (c[(k + 1) % 3], c[(k + 2) % 3]);
        [(a[1] - b[1]) / det, (b[0] - a[0]) / det]
    });
    let half_cot = std::array::from_fn(|k| {
        let (a, b) = (c[(k + 1) % 3], c[(k + 2) % 3]);
        let u = [a[0] - c[k][0], a[1] - c[k][1]];
        let v = [b[0] - c[k][0], b[1] - c[k][1]];
        0.5 * (u[0] * v[0] + u[1] * v[1]) / (u[0] * v[1] - u[1] * v[0]).abs()
    });
    Some(ChartElement {
        grad,
        area: 0.5 * det.abs(),
        half_cot,
    })
}

/// Nodes whose whole star lies in the chart, away from the boundary ring and
/// from origin preimages.
fn certified_nodes(ctx: &WeakOperatorContext, chart_ok: &[bool]) -> Vec<bool> {
    let mesh = ctx.mesh;
    let mut ok = ctx.interior.clone();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if !chart_ok[t] {
            for &i in tri {
                ok[i] = false;
            }
        }
    }
    for o in mesh.origin_preimages() {
        ok[o] = false;
    }
    ok
}

fn weighted_l2(values: &[f64], weights: &[f64], mask: &[bool]) -> f64 {
    let num: Vec<f64> = (0..values.len())
        .map(|i| if mask[i] { weights[i] * values[i] } else { 0.0 })
        .collect();
    let den: Vec<f64> = (0..values.len())
        .map(|i| if mask[i] { weights[i] } else { 0.0 })
        .collect();
    (parallel::pairwise_sum(&num) / parallel::pairwise_sum(&den)).sqrt()
}

/// Euler–Lagrange residuals of Hamiltonian stationarity.
pub fn el_residual(mesh: &SurfaceMesh, form: &AngleForm) -> Result<ElResidual> {
    let chart = mesh
        .chart
        .as_ref()
        .ok_or_else(|| Error::Precondition("EL residual needs a conformal chart".into()))?;
    let ctx = WeakOperatorContext::new(mesh);
    let nt = mesh.triangle_count();
    let elems: Vec<Option<ChartElement>> = parallel::map_indexed(nt, |t| {
        chart
            .element_coords(&mesh.triangles[t])
            .and_then(chart_element)
    });
    let chart_ok: Vec<bool> = elems.iter().map(Option::is_some).collect();
    let mask = certified_nodes(&ctx, &chart_ok);
    let n = mesh.node_count();

    // Chart Laplacian of G and chart-area-weighted nodal gradients.
    let mut lap = vec![ZERO; n];
    let mut chart_mass = vec![0.0; n];
    let mut grad_g = vec![[ZERO; 2]; n];
    let mut grad_b = vec![[0.0; 2]; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let Some(e) = &elems[t] else { continue };
        let g = tri.map(|i| mesh.positions[i]);
        let b0 = form.node_beta[tri[0]];
        let b = [
            0.0,
            wrap(form.node_beta[tri[1]] - b0),
            wrap(form.node_beta[tri[2]] - b0),
        ];
        let mut dg = [ZERO; 2];
        let mut db = [0.0; 2];
        for k in 0..3 {
            for a in 0..2 {
                dg[a] = vector::axpy(&dg[a], e.grad[k][a], &g[k]);
                db[a] += e.grad[k][a] * b[k];
            }
            let (i, j) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let d = vector::scale(
                &vector::sub(&g[(k + 2) % 3], &g[(k + 1) % 3]),
                e.half_cot[k],
            );
            lap[i] = vector::add(&lap[i], &d);
            lap[j] = vector::sub(&lap[j], &d);
        }
        for &i in tri {
            chart_mass[i] += e.area / 3.0;
            for a in 0..2 {
                grad_g[i][a] = vector::axpy(&grad_g[i][a], e.area, &dg[a]);
                grad_b[i][a] += e.area * db[a];
            }
        }
    }
    let el_sq: Vec<f64> = (0..n)
        .map(|i| {
            if !mask[i] {
                return 0.0;
            }
            let m = chart_mass[i];
            let i_lap = vector::apply_j(&vector::scale(&lap[i], 1.0 / m));
            // nodal gradients are averages over the star, whose chart area is 3m
            let w = 1.0 / (3.0 * m);
            let bg = vector::axpy(
                &vector::scale(&grad_g[i][0], grad_b[i][0] * w * w),
                grad_b[i][1] * w * w,
                &grad_g[i][1],
            );
            vector::norm2(&vector::add(&i_lap, &bg))
        })
        .collect();

    // Surface Laplacian of β from the edge form.
    let mut acc = vec![0.0; n];
    for (k, &(i, j)) in ctx.edges.iter().enumerate() {
        let d = ctx.cot_weights[k] * form.dbeta[k];
        acc[i] += d;
        acc[j] -= d;
    }
    let harm_sq: Vec<f64> = (0..n).map(|i| (acc[i] / ctx.masses[i]).powi(2)).collect();

    Ok(ElResidual {
        el_norm: weighted_l2(&el_sq, &ctx.masses, &mask),
        harmonic_norm: weighted_l2(&harm_sq, &ctx.masses, &mask),
        nodes: mask.iter().filter(|&&b| b).count(),
    })
}

/// Mass-weighted L² norm of the nodal values of `div(e^{−iβ}∇G)`, tested
/// against the hat function of every certified node.
pub fn divergence_form_residual(mesh: &SurfaceMesh, form: &AngleForm) -> Result<f64> {
    let ctx = WeakOperatorContext::new(mesh);
    let n = mesh.node_count();
    let mut r = vec![ZERO; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (s, c) = form.beta_branch[t].sin_cos();
        let grads = &ctx.hat_gradients[t];
        for (k, &i) in tri.iter().enumerate() {
            // ∇λ_i·∇G = Σ_l (∇λ_i·∇λ_l) G_l
            let mut v = ZERO;
            for (l, &j) in tri.iter().enumerate() {
                v = vector::axpy(&v, vector::dot(&grads[k], &grads[l]), &mesh.positions[j]);
            }
            let rot = vector::axpy(&vector::scale(&v, c), -s, &vector::apply_j(&v));
            r[i] = vector::axpy(&r[i], ctx.areas[t], &rot);
        }
    }
    let chart_ok = vec![true; mesh.triangle_count()];
    let mask = certified_nodes(&ctx, &chart_ok);
    let sq: Vec<f64> = (0..n)
        .map(|i| vector::norm2(&r[i]) / ctx.masses[i].powi(2))
        .collect();
    Ok(weighted_l2(&sq, &ctx.masses, &mask))
}
