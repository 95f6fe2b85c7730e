//! Density curves, origin weights, the Dirichlet energy of the phase, the
//! integrated balance law with cutoffs, and the Euclidean and Bernstein
//! comparisons built on them.

mod cutoff;
mod scalar;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use cutoff::{make_cutoff, CutoffKind, CutoffSpec};
pub use scalar::{check_scalar_facts, sinh_grid, weight, weight_derivative, ScalarFacts};

use crate::calculus::{laplace_beltrami, WeakOperatorContext};
use crate::error::{Error, Result};
use crate::identities::PointFields;
use crate::mesh::{self, level_field, Region, RegionScalar, Sample, SurfaceMesh};
use crate::parallel;
use crate::vector::{self, Vector};

/// Sub-level scalar: 𝔯 on Heisenberg meshes, ρ on Euclidean ones.
fn gauge_scalar(mesh: &SurfaceMesh) -> RegionScalar {
    if mesh.ambient.is_heisenberg() {
        RegionScalar::Gauge
    } else {
        RegionScalar::Rho
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub radii: Vec<f64>,
    /// `r⁻²·area{𝔯 < r}`
    pub density: Vec<f64>,
    pub area: Vec<f64>,
    /// False where the sub-level set reaches the mesh boundary.
    pub reliable: Vec<bool>,
    pub theta0: BTreeMap<usize, f64>,
    pub dirichlet_sigma: Option<f64>,
    pub c_upper: Vec<f64>,
    pub c_lower: Vec<f64>,
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty()
        || radii.iter().any(|r| !(*r > 0.0))
        || radii.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::Precondition(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn density_curve(mesh: &SurfaceMesh, radii: &[f64]) -> Result<DensityReport> {
    check_radii(radii)?;
    let level = level_field(mesh, gauge_scalar(mesh));
    let support = support_radius(mesh, &level);
    let area: Vec<f64> = radii
        .iter()
        .map(|&r| mesh::integrate(mesh, &level, Region::Below(r), |_| 1.0))
        .collect();
    Ok(DensityReport {
        radii: radii.to_vec(),
        density: radii.iter().zip(&area).map(|(r, a)| a / (r * r)).collect(),
        area,
        reliable: radii.iter().map(|&r| r <= support).collect(),
        ..Default::default()
    })
}

/// Smallest level value on the boundary.
fn support_radius(mesh: &SurfaceMesh, level: &[f64]) -> f64 {
    let b = mesh.boundary_nodes();
    level
        .iter()
        .zip(&b)
        .filter(|(_, &on)| on)
        .map(|(v, _)| *v)
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theta0Params {
    pub levels: usize,
    /// Largest level; default: half the smallest level value on the rim of
    /// the parameter ball.
    pub t0: Option<f64>,
    /// Parameter radius of the ball around the origin preimage; default:
    /// half the distance to the boundary or to another origin preimage.
    pub ball: Option<f64>,
}

impl Default for Theta0Params {
    fn default() -> Self {
        Theta0Params {
            levels: 5,
            t0: None,
            ball: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theta0 {
    /// Extrapolated value at `t → 0`.
    pub value: f64,
    /// `(t_k, contour integral)` pairs.
    pub samples: Vec<(f64, f64)>,
}

pub fn theta0(mesh: &SurfaceMesh, p: usize) -> Result<f64> {
    theta0_with(mesh, p, &Theta0Params::default()).map(|t| t.value)
}

fn param_dist(mesh: &SurfaceMesh, a: usize, b: usize) -> f64 {
    let (p, q) = (mesh.params[a], mesh.params[b]);
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Contour integrals of `∂_ν𝔯/𝔯` over `{𝔯 = t_k}`, `t_k = t₀·2^{−k}`, with a
/// least-squares line through `(t_k, value)` evaluated at `t = 0`.
pub fn theta0_with(mesh: &SurfaceMesh, p: usize, params: &Theta0Params) -> Result<Theta0> {
    let origins = mesh.origin_preimages();
    if !origins.contains(&p) {
        return Err(Error::Precondition(format!(
            "node {p} is not a marked origin preimage"
        )));
    }
    if params.levels < 2 {
        return Err(Error::Precondition(
            "theta0 needs at least two levels".into(),
        ));
    }
    let level = level_field(mesh, gauge_scalar(mesh));
    let adj = mesh.adjacency();
    let reach = connected(&adj, p, |_| true);
    let boundary = mesh.boundary_nodes();
    let ball = params.ball.unwrap_or_else(|| {
        let d = (0..mesh.node_count())
            .filter(|&i| reach[i] && (boundary[i] || (origins.contains(&i) && i != p)))
            .map(|i| param_dist(mesh, p, i))
            .fold(f64::INFINITY, f64::min);
        0.5 * d
    });
    let inside: Vec<bool> = (0..mesh.node_count())
        .map(|i| reach[i] && param_dist(mesh, p, i) < ball)
        .collect();
    let t0 = match params.t0 {
        Some(t) => t,
        None => {
            let rim = (0..mesh.node_count())
                .filter(|&i| reach[i] && !inside[i] && adj[i].iter().any(|&j| inside[j]))
                .map(|i| level[i])
                .fold(f64::INFINITY, f64::min);
            0.5 * rim
        }
    };
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::Precondition(
            "no positive level available around the origin preimage".into(),
        ));
    }
    let tri_of = mesh.node_triangles();
    let mut samples = Vec::with_capacity(params.levels);
    for k in 0..params.levels {
        let t = t0 / 2f64.powi(k as i32);
        let comp = connected(&adj, p, |i| level[i] < t);
        if (0..mesh.node_count()).any(|i| comp[i] && !inside[i]) {
            return Err(Error::Precondition(format!(
                "level {t} leaves the parameter ball of radius {ball}"
            )));
        }
        let mut tris: Vec<usize> = (0..mesh.node_count())
            .filter(|&i| comp[i])
            .flat_map(|i| tri_of[i].iter().copied())
            .collect();
        tris.sort_unstable();
        tris.dedup();
        let parts: Vec<f64> = tris
            .iter()
            .map(|&tr| contour_piece(mesh, &level, tr, t))
            .collect();
        samples.push((t, parallel::pairwise_sum(&parts) / t));
    }
    Ok(Theta0 {
        value: linear_intercept(&samples),
        samples,
    })
}

/// Nodes connected to `start` through nodes satisfying `keep`.
fn connected(adj: &[Vec<usize>], start: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !seen[j] && keep(j) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

/// `length · |∇𝔯_h|` of the piece of `{𝔯_h = t}` inside triangle `tr`.
fn contour_piece(mesh: &SurfaceMesh, level: &[f64], tr: usize, t: f64) -> f64 {
    let tri = mesh.triangles[tr];
    let mut pts: Vec<Vector> = Vec::with_capacity(2);
    for k in 0..3 {
        let (a, b) = (tri[k], tri[(k + 1) % 3]);
        let (ga, gb) = (level[a], level[b]);
        if (ga < t) != (gb < t) {
            let s = (t - ga) / (gb - ga);
            let (pa, pb) = (mesh.positions[a], mesh.positions[b]);
            pts.push(vector::axpy(&pa, s, &vector::sub(&pb, &pa)));
        }
    }
    if pts.len() != 2 {
        return 0.0;
    }
    let [a, b, c] = tri.map(|i| mesh.positions[i]);
    let (e1, e2) = (vector::sub(&b, &a), vector::sub(&c, &a));
    let (d1, d2) = (level[tri[1]] - level[tri[0]], level[tri[2]] - level[tri[0]]);
    // |∇f|² for the affine f with increments d1, d2 along e1, e2.
    let (g11, g12, g22) = (
        vector::dot(&e1, &e1),
        vector::dot(&e1, &e2),
        vector::dot(&e2, &e2),
    );
    let det = g11 * g22 - g12 * g12;
    let grad2 = (d1 * d1 * g22 - 2.0 * d1 * d2 * g12 + d2 * d2 * g11) / det;
    vector::norm(&vector::sub(&pts[1], &pts[0])) * grad2.sqrt()
}

/// Intercept at `t = 0` of the least-squares line through the samples.
pub fn linear_intercept(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let mt = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mv = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let stt: f64 = samples.iter().map(|s| (s.0 - mt).powi(2)).sum();
    let stv: f64 = samples.iter().map(|s| (s.0 - mt) * (s.1 - mv)).sum();
    mv - stv / stt * mt
}

/// Sum of θ₀ over all origin preimages.
pub fn total_theta0(mesh: &SurfaceMesh) -> Result<BTreeMap<usize, f64>> {
    mesh.origin_preimages()
        .into_iter()
        .map(|p| theta0(mesh, p).map(|v| (p, v)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletSigma {
    /// `∫ |∇σ/(1+σ²)|²`
    pub phase: f64,
    /// `4∫ |(∇𝔯)^⊥|²/𝔯²`
    pub normal: f64,
    pub discrepancy: f64,
}

fn region_integral2(
    mesh: &SurfaceMesh,
    ctx: &WeakOperatorContext,
    region: Region,
    f: impl Fn(&Sample, &PointFields) -> [f64; 2] + Sync,
) -> [f64; 2] {
    let level = level_field(mesh, RegionScalar::Gauge);
    let parts = |k: usize| {
        mesh::integrate(mesh, &level, region, |s| {
            PointFields::of_sample(ctx, s).map_or(0.0, |p| f(s, &p)[k])
        })
    };
    [parts(0), parts(1)]
}

/// Both Dirichlet expressions over `{𝔯 < radius}`.
pub fn dirichlet_sigma(mesh: &SurfaceMesh, radius: f64) -> Result<DirichletSigma> {
    dirichlet_sigma_in(mesh, Region::Below(radius))
}

pub fn dirichlet_sigma_in(mesh: &SurfaceMesh, region: Region) -> Result<DirichletSigma> {
    if !mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "the phase is defined on Heisenberg meshes only".into(),
        ));
    }
    let ctx = WeakOperatorContext::new(mesh);
    let [phase, normal] = region_integral2(mesh, &ctx, region, |_, p| {
        let w = 1.0 + p.sigma * p.sigma;
        [
            vector::norm2(&p.grad_sigma) / (w * w),
            4.0 * vector::norm2(&p.gauge_normal) / (p.gauge * p.gauge),
        ]
    });
    Ok(DirichletSigma {
        phase,
        normal,
        discrepancy: (phase - normal).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaBound {
    pub lhs: f64,
    pub rhs_area: f64,
    pub ratio: f64,
}

/// `Σθ₀ + ∫_{𝔯<1}|∇σ/(1+σ²)|²` against `area{1 < 𝔯 < 2}`.
pub fn lemma_density_bound(mesh: &SurfaceMesh) -> Result<LemmaBound> {
    let level = level_field(mesh, gauge_scalar(mesh));
    let support = support_radius(mesh, &level);
    if support < 2.0 {
        return Err(Error::Precondition(format!(
            "mesh covers only gauge < {support:.4}, need < 2"
        )));
    }
    let theta: f64 = total_theta0(mesh)?.values().sum();
    let dir = if mesh.ambient.is_heisenberg() {
        dirichlet_sigma(mesh, 1.0)?.phase
    } else {
        0.0
    };
    let lhs = theta + dir;
    let rhs_area = mesh::integrate(mesh, &level, Region::Band(1.0, 2.0), |_| 1.0);
    Ok(LemmaBound {
        lhs,
        rhs_area,
        ratio: lhs / rhs_area,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceTerms {
    pub radius: f64,
    /// `∫|∇σ|²/(1+σ²)² · 𝔯χ′/4`
    pub dirichlet_slope: f64,
    /// `¼∫arctanσ·χ″·𝔯·∇𝔯·∇σ/(1+σ²)`
    pub curvature: f64,
    /// `−¾∫arctanσ·χ′·∇𝔯·∇σ/(1+σ²)`
    pub cross: f64,
    /// `−∫arctanσ·χ′/𝔯·σ/√(1+σ²)`
    pub phase: f64,
    /// `−∫χ′|∇𝔯|²/𝔯`
    pub gradient: f64,
    /// `4∫χ|(∇𝔯)^⊥|²/𝔯²`
    pub normal: f64,
    pub theta0: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs|/(|lhs| + |rhs| + 1)`
    pub residual: f64,
}

/// The five cutoff integrals with `χ(𝔯/r)` against `4∫χ|(∇𝔯)^⊥|²/𝔯² + Σθ₀`.
/// The angle form enters only through the identity it certifies, so it is
/// not needed here; `theta0` is measured from contours.
pub fn k10_balance(mesh: &SurfaceMesh, r: f64, cutoff: &CutoffSpec) -> Result<BalanceTerms> {
    let theta: f64 = total_theta0(mesh)?.values().sum();
    k10_balance_with_theta(mesh, r, cutoff, theta)
}

pub fn k10_balance_with_theta(
    mesh: &SurfaceMesh,
    r: f64,
    cutoff: &CutoffSpec,
    theta0: f64,
) -> Result<BalanceTerms> {
    if !mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "the balance law needs a Heisenberg mesh".into(),
        ));
    }
    let level = level_field(mesh, RegionScalar::Gauge);
    if support_radius(mesh, &level) < 2.0 * r {
        return Err(Error::Precondition(format!(
            "mesh does not cover gauge < {}",
            2.0 * r
        )));
    }
    let ctx = WeakOperatorContext::new(mesh);
    let terms = parallel::map_indexed(mesh.triangle_count(), |t| {
        let mut acc = [0.0; 6];
        ctx.samples(t, |s| {
            let Some(p) = PointFields::of_sample(&ctx, s) else {
                return;
            };
            let g = p.gauge;
            let x = g / r;
            let (chi, d1, d2) = (cutoff.chi(x), cutoff.d1(x) / r, cutoff.d2(x) / (r * r));
            let w = 1.0 + p.sigma * p.sigma;
            let at = p.sigma.atan();
            let gs = vector::scale(&p.grad_sigma, 1.0 / w);
            let cross = vector::dot(&p.grad_gauge, &gs);
            let vals = [
                vector::norm2(&gs) * g * d1 / 4.0,
                0.25 * at * d2 * g * cross,
                -0.75 * at * d1 * cross,
                -at * d1 / g * p.sigma / w.sqrt(),
                -d1 * vector::norm2(&p.grad_gauge) / g,
                4.0 * chi * vector::norm2(&p.gauge_normal) / (g * g),
            ];
            for k in 0..6 {
                acc[k] += s.weight * vals[k];
            }
        });
        acc
    });
    let col = |k: usize| parallel::pairwise_sum(&terms.iter().map(|a| a[k]).collect::<Vec<_>>());
    let [a, b, c, d, e, n] = std::array::from_fn(col);
    let lhs = a + b + c + d + e;
    let rhs = n + theta0;
    Ok(BalanceTerms {
        radius: r,
        dirichlet_slope: a,
        curvature: b,
        cross: c,
        phase: d,
        gradient: e,
        normal: n,
        theta0,
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub radii: Vec<f64>,
    pub density: Vec<f64>,
    /// `density(r)/area{½ < 𝔯 < 2}`
    pub c_upper: Vec<f64>,
    /// `(Σθ₀ + ∫_{𝔯<r/2}|∇σ/(1+σ²)|²)/density(r)`
    pub c_lower: Vec<f64>,
    /// `sup_r C_upper·max(1, C_lower)`
    pub sup_product: f64,
    pub bounded: bool,
}

pub fn main_theorem_check(mesh: &SurfaceMesh, radii: &[f64]) -> Result<TheoremCheck> {
    check_radii(radii)?;
    if radii.iter().any(|&r| r >= 1.0) {
        return Err(Error::Precondition(
            "theorem radii must lie in (0, 1)".into(),
        ));
    }
    let level = level_field(mesh, gauge_scalar(mesh));
    if support_radius(mesh, &level) < 2.0 {
        return Err(Error::Precondition("mesh must cover gauge < 2".into()));
    }
    let annulus = mesh::integrate(mesh, &level, Region::Band(0.5, 2.0), |_| 1.0);
    let theta: f64 = total_theta0(mesh)?.values().sum();
    let curve = density_curve(mesh, radii)?;
    let mut c_lower = Vec::with_capacity(radii.len());
    for (&r, &d) in radii.iter().zip(&curve.density) {
        let dir = if mesh.ambient.is_heisenberg() {
            dirichlet_sigma(mesh, r / 2.0)?.phase
        } else {
            0.0
        };
        c_lower.push((theta + dir) / d);
    }
    let c_upper: Vec<f64> = curve.density.iter().map(|d| d / annulus).collect();
    let sup_product = c_upper
        .iter()
        .zip(&c_lower)
        .map(|(u, l)| u * l.max(1.0))
        .fold(0.0, f64::max);
    let bounded = sup_product.is_finite()
        && c_lower
            .iter()
            .chain(&c_upper)
            .all(|v| v.is_finite() && *v > 0.0);
    Ok(TheoremCheck {
        radii: radii.to_vec(),
        density: curve.density,
        c_upper,
        c_lower,
        sup_product,
        bounded,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCheck {
    pub radii: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub cardinality: usize,
    /// `max |lhs − rhs|/lhs`
    pub max_residual: f64,
    pub monotone: bool,
    /// Interior `max|Δ^ΣΦ|` times the mesh diameter.
    pub minimality_defect: f64,
}

/// Default gate on the scale-free coordinate Laplacian.
pub const MINIMALITY_GATE: f64 = 0.5;

/// Relative slack allowed in the monotonicity assertion.
pub const MONOTONE_SLACK: f64 = 1e-3;

pub fn classical_monotonicity(mesh: &SurfaceMesh, radii: &[f64]) -> Result<ClassicalCheck> {
    classical_monotonicity_with_gate(mesh, radii, MINIMALITY_GATE)
}

pub fn classical_monotonicity_with_gate(
    mesh: &SurfaceMesh,
    radii: &[f64],
    gate: f64,
) -> Result<ClassicalCheck> {
    check_radii(radii)?;
    if mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "classical monotonicity needs a Euclidean mesh".into(),
        ));
    }
    let ctx = WeakOperatorContext::new(mesh);
    let diam = mesh.positions.iter().map(vector::norm).fold(0.0, f64::max);
    let adj = mesh.adjacency();
    let mut defect: f64 = 0.0;
    for k in 0..mesh.dim() {
        let f: Vec<f64> = mesh.positions.iter().map(|p| p[k]).collect();
        let lap = laplace_beltrami(&ctx, &f);
        // The ring-0 stars of polar fans are excluded like the fan tip.
        let worst = (0..mesh.node_count())
            .filter(|&i| ctx.interior[i] && !mesh.origins.contains(&i))
            .filter(|&i| !adj[i].iter().any(|j| mesh.origins.contains(j)))
            .map(|i| lap[i].abs())
            .fold(0.0, f64::max);
        defect = defect.max(worst * diam);
    }
    if defect > gate {
        return Err(Error::Precondition(format!(
            "surface is not minimal: coordinate Laplacian defect {defect:.3e}"
        )));
    }
    let level = level_field(mesh, RegionScalar::Rho);
    if support_radius(mesh, &level) < radii[radii.len() - 1] {
        return Err(Error::Precondition(
            "largest radius exceeds the meshed ball".into(),
        ));
    }
    let card = mesh.origin_preimages().len();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &r in radii {
        lhs.push(mesh::integrate(mesh, &level, Region::Below(r), |_| 1.0) / (r * r));
        let normal = mesh::integrate(mesh, &level, Region::Below(r), |s| {
            let rho2 = vector::norm2(&s.point);
            if rho2 == 0.0 {
                return 0.0;
            }
            let tan = ctx.project(s.element, &s.point);
            (rho2 - vector::norm2(&tan)) / (rho2 * rho2)
        });
        rhs.push(normal + std::f64::consts::PI * card as f64);
    }
    let max_residual = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| (l - r).abs() / l.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let monotone = lhs
        .windows(2)
        .all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK));
    Ok(ClassicalCheck {
        radii: radii.to_vec(),
        lhs,
        rhs,
        cardinality: card,
        max_residual,
        monotone,
        minimality_defect: defect,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinTerms {
    /// `¼∫arctanσ·r⁻²χ″·𝔯·∇𝔯·∇σ/(1+σ²)`
    pub curvature: f64,
    /// `−¾∫arctanσ·r⁻¹χ′·∇𝔯·∇σ/(1+σ²)`
    pub cross: f64,
    /// `−∫χ′/(r𝔯)·(σarctanσ + 1)/√(1+σ²)`
    pub weight: f64,
    /// `∫χ|∇σ|²/(1+σ²)²`
    pub dirichlet: f64,
    /// `−∫χ′·𝔯/(4r)·|∇σ|²/(1+σ²)²`, entering twice on the right.
    pub shell: f64,
    /// `|lhs − rhs|/(|lhs| + |rhs| + 1)` with `rhs = dirichlet + 2·shell + Σθ₀`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinCheck {
    pub radii: Vec<f64>,
    /// `r⁻¹∫_{r<𝔯<2r}𝔯⁻¹`
    pub f: Vec<f64>,
    /// `sup_{r<𝔯<2r}|ρ/𝔯 − 1|` over nodes.
    pub s: Vec<f64>,
    /// `∫_{r<𝔯<2r}|∇σ/(1+σ²)|²`
    pub d: Vec<f64>,
    pub terms: Vec<BernsteinTerms>,
    pub plane_like: bool,
    /// `∫|∇σ/(1+σ²)|²` over the meshed range, when the hypotheses hold.
    pub conclusion: Option<f64>,
    pub conclusion_holds: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinTolerances {
    /// Relative tolerance for `F(r) → 2π`.
    pub f: f64,
    pub s: f64,
    pub conclusion: f64,
    pub eps: f64,
}

impl Default for BernsteinTolerances {
    fn default() -> Self {
        BernsteinTolerances {
            f: 1e-2,
            s: 1e-2,
            conclusion: 1e-6,
            eps: 0.1,
        }
    }
}

pub fn bernstein_check(mesh: &SurfaceMesh, radii: &[f64]) -> Result<BernsteinCheck> {
    bernstein_check_with(mesh, radii, &BernsteinTolerances::default())
}

pub fn bernstein_check_with(
    mesh: &SurfaceMesh,
    radii: &[f64],
    tol: &BernsteinTolerances,
) -> Result<BernsteinCheck> {
    check_radii(radii)?;
    if !mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "the Bernstein check needs a Heisenberg mesh".into(),
        ));
    }
    let level = level_field(mesh, RegionScalar::Gauge);
    if support_radius(mesh, &level) < 2.0 * radii[radii.len() - 1] {
        return Err(Error::Precondition(
            "largest annulus exceeds the meshed range".into(),
        ));
    }
    let cut = make_cutoff(CutoffKind::Epsilon { eps: tol.eps })?;
    let theta: f64 = total_theta0(mesh)?.values().sum();
    let ctx = WeakOperatorContext::new(mesh);
    let rho = mesh.rho_field();
    let mut out = BernsteinCheck {
        radii: radii.to_vec(),
        f: Vec::new(),
        s: Vec::new(),
        d: Vec::new(),
        terms: Vec::new(),
        plane_like: false,
        conclusion: None,
        conclusion_holds: None,
    };
    for &r in radii {
        let band = Region::Band(r, 2.0 * r);
        let f = mesh::integrate(mesh, &level, band, |s| {
            let g = crate::HeisenbergPoint::new(vector::to4(&s.point), s.phi).gauge();
            1.0 / g
        }) / r;
        let s = (0..mesh.node_count())
            .filter(|&i| level[i] > r && level[i] < 2.0 * r)
            .map(|i| (rho[i] / level[i] - 1.0).abs())
            .fold(0.0, f64::max);
        let d = dirichlet_sigma_in(mesh, band)?.phase;
        let parts = parallel::map_indexed(mesh.triangle_count(), |t| {
            let mut acc = [0.0; 5];
            ctx.samples(t, |smp| {
                let Some(p) = PointFields::of_sample(&ctx, smp) else {
                    return;
                };
                let g = p.gauge;
                let x = g / r;
                let (chi, d1, d2) = (cut.chi(x), cut.d1(x), cut.d2(x));
                let w = 1.0 + p.sigma * p.sigma;
                let at = p.sigma.atan();
                let gs = vector::scale(&p.grad_sigma, 1.0 / w);
                let cross = vector::dot(&p.grad_gauge, &gs);
                let e = vector::norm2(&gs);
                let vals = [
                    0.25 * at * d2 / (r * r) * g * cross,
                    -0.75 * at * d1 / r * cross,
                    -d1 / (r * g) * weight(p.sigma),
                    chi * e,
                    -d1 * g / (4.0 * r) * e,
                ];
                for k in 0..5 {
                    acc[k] += smp.weight * vals[k];
                }
            });
            acc
        });
        let col =
            |k: usize| parallel::pairwise_sum(&parts.iter().map(|a| a[k]).collect::<Vec<_>>());
        let (lhs, rhs) = (col(0) + col(1) + col(2), col(3) + 2.0 * col(4) + theta);
        out.terms.push(BernsteinTerms {
            curvature: col(0),
            cross: col(1),
            weight: col(2),
            dirichlet: col(3),
            shell: col(4),
            residual: (lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1.0),
        });
        out.f.push(f);
        out.s.push(s);
        out.d.push(d);
    }
    let two_pi = std::f64::consts::TAU;
    out.plane_like = out.f.iter().all(|f| (f / two_pi - 1.0).abs() <= tol.f)
        && out.s.iter().all(|s| *s <= tol.s);
    if out.plane_like && theta >= two_pi * (1.0 - tol.f) {
        let total = dirichlet_sigma_in(mesh, Region::All)?.phase;
        out.conclusion = Some(total);
        out.conclusion_holds = Some(total <= tol.conclusion);
    }
    Ok(out)
}

/// Radii `r₀·2^{k/2}`, `k = 0..count`.
pub fn geometric_radii(r0: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| r0 * 2f64.powf(k as f64 / 2.0)).collect()
}
