//! Numerical checks of the pointwise and weak identities satisfied by
//! Legendrian surfaces of the Heisenberg group.
//!
//! All formulas use the crate conventions (`β = arg det_ℂ`, `dφ = ⟨Jz, dz⟩`):
//!
//! * `|∇ρ|² + ρ⁻²|∇φ|² = 1`
//! * `½∇β·∇ρ² = Δφ` and `½∇β·∇φ = 1 − ¼Δρ²`
//! * `|∇σ/(1+σ²)|² ≤ 16/𝔯²`
//! * `(∇𝔯)^⊥/𝔯 = −½J(∇σ/(1+σ²))`
//! * `𝔯³∇β·∇𝔯 = 2𝔯²σ/√(1+σ²) + ½div(𝔯⁴∇σ/(1+σ²))`
//! * `div(½·arctanσ·∇β + ∇log𝔯) = 4|(∇𝔯)^⊥|²/𝔯² + Σ w_p δ_p`
//!
//! Gradients of ambient functions are tangential projections of their
//! horizontal gradients, evaluated at the quadrature points of each element.
//! β enters through the element gradient of its edge increments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angle::AngleForm;
use crate::calculus::WeakOperatorContext;
use crate::error::{Error, Result};
use crate::heisenberg::{horizontal_gauge_gradients, horizontal_phase_gradient, HeisenbergPoint};
use crate::mesh::{Sample, SurfaceMesh};
use crate::parallel;
use crate::vector::{self, from4, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    MaxInterior,
    WeightedL2,
    WeakPairing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub norm_kind: NormKind,
    pub tolerance: f64,
    pub pass: bool,
}

impl Residual {
    pub fn new(value: f64, norm_kind: NormKind, tolerance: f64) -> Self {
        Residual {
            value,
            norm_kind,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub residuals: BTreeMap<String, Residual>,
    /// Parameter-domain radius removed around origin preimages.
    pub excision_radius: f64,
}

impl IdentityReport {
    pub fn insert(&mut self, name: &str, value: f64, kind: NormKind, tolerance: f64) {
        self.residuals
            .insert(name.to_string(), Residual::new(value, kind, tolerance));
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.residuals.get(name).map(|r| r.value)
    }

    pub fn all_pass(&self) -> bool {
        self.residuals.values().all(|r| r.pass)
    }

    /// Overrides the tolerance of a residual and recomputes its verdict.
    pub fn set_tolerance(&mut self, name: &str, tolerance: f64) {
        if let Some(r) = self.residuals.get_mut(name) {
            *r = Residual::new(r.value, r.norm_kind, tolerance);
        }
    }
}

/// Default tolerances, proportional to the parameter mesh size `h`.
pub fn default_tolerance(kind: NormKind, h: f64) -> f64 {
    match kind {
        NormKind::MaxInterior => 1e-2 * h,
        NormKind::WeightedL2 | NormKind::WeakPairing => 1e-1 * h,
    }
}

/// Empirical convergence order between two refinement levels. A finer
/// residual at round-off counts as converged.
pub fn empirical_order(coarse: f64, fine: f64) -> f64 {
    if fine < 1e-10 {
        f64::INFINITY
    } else {
        (coarse / fine).log2()
    }
}

/// Scalars and tangential gradients at one point of an element.
#[derive(Clone, Copy, Debug)]
pub struct PointFields {
    pub rho: f64,
    pub phi: f64,
    pub gauge: f64,
    pub sigma: f64,
    pub grad_rho: Vector,
    pub grad_phi: Vector,
    pub grad_gauge: Vector,
    pub grad_sigma: Vector,
    /// Normal part of `∇ᴴ𝔯`.
    pub gauge_normal: Vector,
}

impl PointFields {
    /// `None` where ρ vanishes.
    pub fn at(ctx: &WeakOperatorContext, element: usize, z: &Vector, phi: f64) -> Option<Self> {
        let p = HeisenbergPoint::new(vector::to4(z), phi);
        let g = horizontal_gauge_gradients(&p).ok()?;
        let gs = horizontal_phase_gradient(&p).ok()?;
        let gauge_amb = from4(g.grad_gauge.w);
        let grad_gauge = ctx.project(element, &gauge_amb);
        Some(PointFields {
            rho: p.rho(),
            phi,
            gauge: p.gauge(),
            sigma: p.phase().ok()?,
            grad_rho: ctx.project(element, &from4(g.grad_rho.w)),
            grad_phi: ctx.project(element, &from4(g.grad_phi.w)),
            grad_gauge,
            grad_sigma: ctx.project(element, &from4(gs.w)),
            gauge_normal: vector::sub(&gauge_amb, &grad_gauge),
        })
    }

    pub fn of_sample(ctx: &WeakOperatorContext, s: &Sample) -> Option<Self> {
        Self::at(ctx, s.element, &s.point, s.phi)
    }
}

/// Element gradient of β built from the edge increments of the angle form.
pub fn beta_gradients(ctx: &WeakOperatorContext, form: &AngleForm) -> Result<Vec<Vector>> {
    let mesh = ctx.mesh;
    let grads = parallel::map_indexed(mesh.triangle_count(), |t| {
        let tri = mesh.triangles[t];
        let d1 = form.increment(tri[0], tri[1])?;
        let d2 = form.increment(tri[0], tri[2])?;
        let g = &ctx.hat_gradients[t];
        Some(vector::axpy(&vector::scale(&g[1], d1), d2, &g[2]))
    });
    grads
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Precondition("angle form does not cover the mesh edges".into()))
}

fn require_heisenberg(mesh: &SurfaceMesh) -> Result<()> {
    if mesh.ambient.is_heisenberg() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "identity checks need a Heisenberg mesh".into(),
        ))
    }
}

/// Parameter radius of `k` edge lengths around the origin preimage `o`.
fn excision_radius_at(mesh: &SurfaceMesh, o: usize, edges: f64) -> f64 {
    let star = mesh
        .triangles
        .iter()
        .filter(|t| t.contains(&o))
        .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
        .map(|(a, b)| {
            let (p, q) = (mesh.params[a], mesh.params[b]);
            (p[0] - q[0]).hypot(p[1] - q[1])
        })
        .fold(0.0, f64::max);
    edges * star
}

/// Parameter points to excise with their radii (three edge lengths each).
fn excision(mesh: &SurfaceMesh, scale: f64) -> Vec<([f64; 2], f64)> {
    mesh.origin_preimages()
        .into_iter()
        .map(|o| (mesh.params[o], scale * excision_radius_at(mesh, o, 3.0)))
        .collect()
}

fn sample_param(mesh: &SurfaceMesh, s: &Sample) -> [f64; 2] {
    let tri = mesh.triangles[s.element];
    let mut p = [0.0; 2];
    for k in 0..3 {
        for d in 0..2 {
            p[d] += s.bary[k] * mesh.params[tri[k]][d];
        }
    }
    p
}

fn excised(cut: &[([f64; 2], f64)], p: [f64; 2]) -> bool {
    cut.iter()
        .any(|(c, r)| (p[0] - c[0]).hypot(p[1] - c[1]) < *r)
}

/// Pointwise maxima of (a), (c), (d) over quadrature points outside the
/// excised disks. (d) is reported as `𝔯·|lhs − rhs|`, which is scale free.
fn pointwise_maxima(ctx: &WeakOperatorContext, cut: &[([f64; 2], f64)]) -> [f64; 3] {
    let mesh = ctx.mesh;
    let per = parallel::map_indexed(mesh.triangle_count(), |t| {
        let mut m = [0.0f64; 3];
        ctx.samples(t, |s| {
            if excised(cut, sample_param(mesh, s)) {
                return;
            }
            let Some(f) = PointFields::of_sample(ctx, s) else {
                return;
            };
            let a = 1.0 - vector::norm2(&f.grad_rho) - vector::norm2(&f.grad_phi) / (f.rho * f.rho);
            let w = 1.0 + f.sigma * f.sigma;
            let c =
                (vector::norm2(&f.grad_sigma) / (w * w) * f.gauge * f.gauge / 16.0 - 1.0).max(0.0);
            let rhs = vector::scale(&vector::apply_j(&f.grad_sigma), -0.5 / w);
            let lhs = vector::scale(&f.gauge_normal, 1.0 / f.gauge);
            let d = f.gauge * vector::norm(&vector::sub(&lhs, &rhs));
            m = [m[0].max(a.abs()), m[1].max(c), m[2].max(d)];
        });
        m
    });
    per.iter().fold([0.0; 3], |acc, m| {
        [acc[0].max(m[0]), acc[1].max(m[1]), acc[2].max(m[2])]
    })
}

/// Weak residuals of the two lines of `½∇β·∇ρ² = Δφ`, `½∇β·∇φ = 1 − ¼Δρ²`.
fn weak_angle_lines(ctx: &WeakOperatorContext, dbeta: &[Vector], test: &[f64]) -> [f64; 2] {
    let mesh = ctx.mesh;
    let per = parallel::map_indexed(mesh.triangle_count(), |t| {
        let gt = ctx.element_gradient(t, test);
        let tri = mesh.triangles[t];
        if tri.iter().all(|&i| test[i] == 0.0) {
            return [0.0; 2];
        }
        let gb = dbeta[t];
        let mut r = [0.0; 2];
        ctx.samples(t, |s| {
            let Some(f) = PointFields::of_sample(ctx, s) else {
                return;
            };
            let tv: f64 = (0..3).map(|k| s.bary[k] * test[tri[k]]).sum();
            let grad_rho2 = vector::scale(&f.grad_rho, 2.0 * f.rho);
            r[0] += s.weight
                * (tv * 0.5 * vector::dot(&gb, &grad_rho2) + vector::dot(&gt, &f.grad_phi));
            r[1] += s.weight
                * (tv * (0.5 * vector::dot(&gb, &f.grad_phi) - 1.0)
                    - 0.25 * vector::dot(&gt, &grad_rho2));
        });
        r
    });
    let col = |k: usize| parallel::pairwise_sum(&per.iter().map(|r| r[k]).collect::<Vec<_>>());
    [col(0), col(1)]
}

/// Bump tests `(1 − |x−c|²/r²)³` in the parameter domain, used as default
/// interior tests.
pub fn bump_test(mesh: &SurfaceMesh, center: [f64; 2], radius: f64) -> Vec<f64> {
    mesh.params
        .iter()
        .map(|p| {
            let r2 = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)) / (radius * radius);
            if r2 < 1.0 {
                (1.0 - r2).powi(3)
            } else {
                0.0
            }
        })
        .collect()
}

/// A bump in the parameter annulus `a < |x − c| < b`, vanishing near `c`.
pub fn annulus_test(mesh: &SurfaceMesh, center: [f64; 2], a: f64, b: f64) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    mesh.params
        .iter()
        .map(|p| {
            let r = (p[0] - center[0]).hypot(p[1] - center[1]);
            let x = (r - mid) / half;
            if x.abs() < 1.0 {
                (1.0 - x * x).powi(3)
            } else {
                0.0
            }
        })
        .collect()
}

/// Default interior tests for the weak lines: a few bumps between the
/// excised disks and the boundary.
fn default_tests(mesh: &SurfaceMesh, ctx: &WeakOperatorContext) -> Vec<Vec<f64>> {
    let o = mesh.origin_preimages();
    let center = o.first().map(|&i| mesh.params[i]).unwrap_or_else(|| {
        let n = mesh.node_count() as f64;
        let s = mesh
            .params
            .iter()
            .fold([0.0; 2], |a, p| [a[0] + p[0], a[1] + p[1]]);
        [s[0] / n, s[1] / n]
    });
    let reach = (0..mesh.node_count())
        .filter(|&i| ctx.boundary[i])
        .map(|i| (mesh.params[i][0] - center[0]).hypot(mesh.params[i][1] - center[1]))
        .fold(f64::INFINITY, f64::min);
    let inner = if o.is_empty() { 0.0 } else { 0.25 * reach };
    let mut tests = vec![annulus_test(
        mesh,
        center,
        inner.max(0.1 * reach),
        0.9 * reach,
    )];
    tests.push(bump_test(
        mesh,
        [center[0] + 0.5 * reach, center[1]],
        0.35 * reach,
    ));
    tests.retain(|t| ctx.check_test_support(t).is_ok() && t.iter().any(|&v| v != 0.0));
    tests
}

/// Pointwise identities (a), (c), (d) and the weak lines (b), excising three
/// edge lengths around each origin preimage. The `*_half_excision` entries
/// repeat the pointwise checks with half the radius.
pub fn check_pointwise_identities(
    mesh: &SurfaceMesh,
    form: Option<&AngleForm>,
) -> Result<IdentityReport> {
    require_heisenberg(mesh)?;
    let form =
        form.ok_or_else(|| Error::Precondition("the weak angle lines need an angle form".into()))?;
    let ctx = WeakOperatorContext::new(mesh);
    let h = mesh.param_h();
    let cut = excision(mesh, 1.0);
    let mut rep = IdentityReport {
        excision_radius: cut.iter().map(|c| c.1).fold(0.0, f64::max),
        ..Default::default()
    };
    let pt = default_tolerance(NormKind::MaxInterior, h);
    let [a, c, d] = pointwise_maxima(&ctx, &cut);
    rep.insert("unit_gradient_split", a, NormKind::MaxInterior, pt);
    rep.insert("phase_gradient_bound", c, NormKind::MaxInterior, pt);
    rep.insert("normal_gauge_gradient", d, NormKind::MaxInterior, pt);

    let half: Vec<_> = cut.iter().map(|(p, r)| (*p, 0.5 * r)).collect();
    let [ah, _, dh] = pointwise_maxima(&ctx, &half);
    rep.insert(
        "unit_gradient_split_half_excision",
        ah,
        NormKind::MaxInterior,
        pt,
    );
    rep.insert(
        "normal_gauge_gradient_half_excision",
        dh,
        NormKind::MaxInterior,
        pt,
    );

    let dbeta = beta_gradients(&ctx, form)?;
    let wt = default_tolerance(NormKind::WeakPairing, h);
    let mut lines = [0.0f64; 2];
    for test in default_tests(mesh, &ctx) {
        let r = weak_angle_lines(&ctx, &dbeta, &test);
        lines = [lines[0].max(r[0].abs()), lines[1].max(r[1].abs())];
    }
    rep.insert("angle_line_phi", lines[0], NormKind::WeakPairing, wt);
    rep.insert("angle_line_rho", lines[1], NormKind::WeakPairing, wt);
    Ok(rep)
}

/// Weak lines (b) against caller-supplied interior tests; max over tests.
pub fn weak_angle_residuals(
    mesh: &SurfaceMesh,
    form: &AngleForm,
    tests: &[Vec<f64>],
) -> Result<[f64; 2]> {
    require_heisenberg(mesh)?;
    let ctx = WeakOperatorContext::new(mesh);
    let dbeta = beta_gradients(&ctx, form)?;
    let mut out = [0.0f64; 2];
    for t in tests {
        ctx.check_test_support(t)?;
        let r = weak_angle_lines(&ctx, &dbeta, t);
        out = [out[0].max(r[0].abs()), out[1].max(r[1].abs())];
    }
    Ok(out)
}

fn check_origin_free(mesh: &SurfaceMesh, test: &[f64]) -> Result<()> {
    for o in mesh.origin_preimages() {
        let touched = test[o] != 0.0 || mesh.adjacency()[o].iter().any(|&j| test[j] != 0.0);
        if touched {
            return Err(Error::Precondition(format!(
                "test function reaches origin preimage {o}"
            )));
        }
    }
    Ok(())
}

/// Weak residual of `𝔯³∇β·∇𝔯 = 2𝔯²σ/√(1+σ²) + ½div(𝔯⁴∇σ/(1+σ²))`:
/// `∫t(𝔯³∇β·∇𝔯 − 2𝔯²σ/√(1+σ²)) + ½∫∇t·𝔯⁴∇σ/(1+σ²)`.
pub fn check_k2(mesh: &SurfaceMesh, form: &AngleForm, test: &[f64]) -> Result<f64> {
    require_heisenberg(mesh)?;
    let ctx = WeakOperatorContext::new(mesh);
    ctx.check_test_support(test)?;
    check_origin_free(mesh, test)?;
    let dbeta = beta_gradients(&ctx, form)?;
    let per = parallel::map_indexed(mesh.triangle_count(), |t| {
        let tri = mesh.triangles[t];
        if tri.iter().all(|&i| test[i] == 0.0) {
            return 0.0;
        }
        let gt = ctx.element_gradient(t, test);
        let mut acc = 0.0;
        ctx.samples(t, |s| {
            let Some(f) = PointFields::of_sample(&ctx, s) else {
                return;
            };
            let tv: f64 = (0..3).map(|k| s.bary[k] * test[tri[k]]).sum();
            let (r, w) = (f.gauge, 1.0 + f.sigma * f.sigma);
            let lhs = r * r * r * vector::dot(&dbeta[t], &f.grad_gauge);
            let src = 2.0 * r * r * f.sigma / w.sqrt();
            let flux = 0.5 * r.powi(4) / w * vector::dot(&gt, &f.grad_sigma);
            acc += s.weight * (tv * (lhs - src) + flux);
        });
        acc
    });
    Ok(parallel::pairwise_sum(&per))
}

/// Weights of the Dirac masses at origin preimages: the mesh's recorded
/// weights when present, `2π` otherwise.
pub fn origin_weights(mesh: &SurfaceMesh) -> Vec<(usize, f64)> {
    let o = mesh.origin_preimages();
    let recorded = mesh
        .truth
        .as_ref()
        .map(|t| t.origin_weights.clone())
        .unwrap_or_default();
    o.iter()
        .enumerate()
        .map(|(k, &i)| (i, recorded.get(k).copied().unwrap_or(std::f64::consts::TAU)))
        .collect()
}

/// `−∫∇t·(½arctanσ∇β + ∇log𝔯) − 4∫t|(∇𝔯)^⊥|²/𝔯² − Σ w_p t(p)`, with a
/// collapsed Gauss rule on elements touching an origin preimage.
pub fn div_identity_residual(
    ctx: &WeakOperatorContext,
    dbeta: &[Vector],
    weights: &[(usize, f64)],
    test: &[f64],
) -> Result<f64> {
    ctx.check_test_support(test)?;
    let mesh = ctx.mesh;
    let apexes = mesh.origin_preimages();
    let per = parallel::map_indexed(mesh.triangle_count(), |t| {
        let tri = mesh.triangles[t];
        if tri.iter().all(|&i| test[i] == 0.0) {
            return 0.0;
        }
        let gt = ctx.element_gradient(t, test);
        let mut acc = 0.0;
        ctx.samples_avoiding(t, &apexes, |s| {
            let Some(f) = PointFields::of_sample(ctx, s) else {
                return;
            };
            let tv: f64 = (0..3).map(|k| s.bary[k] * test[tri[k]]).sum();
            let v = vector::axpy(
                &vector::scale(&dbeta[t], 0.5 * f.sigma.atan()),
                1.0 / f.gauge,
                &f.grad_gauge,
            );
            let src = 4.0 * vector::norm2(&f.gauge_normal) / (f.gauge * f.gauge);
            acc += s.weight * (-vector::dot(&gt, &v) - tv * src);
        });
        acc
    });
    let dirac: f64 = weights.iter().map(|&(p, w)| w * test[p]).sum();
    Ok(parallel::pairwise_sum(&per) - dirac)
}

/// Divergence identity with Dirac masses against each test, plus the
/// near-origin diagnostic `sup |φ|/r³` over chart radii (smooth meshes).
pub fn check_div_identity(
    mesh: &SurfaceMesh,
    form: &AngleForm,
    tests: &[Vec<f64>],
) -> Result<IdentityReport> {
    require_heisenberg(mesh)?;
    let ctx = WeakOperatorContext::new(mesh);
    let dbeta = beta_gradients(&ctx, form)?;
    let weights = origin_weights(mesh);
    let h = mesh.param_h();
    let mut rep = IdentityReport {
        excision_radius: 0.0,
        ..Default::default()
    };
    let tol = default_tolerance(NormKind::WeakPairing, h);
    for (k, test) in tests.iter().enumerate() {
        let r = div_identity_residual(&ctx, &dbeta, &weights, test)?;
        rep.insert(
            &format!("div_identity_dirac_{k}"),
            r.abs(),
            NormKind::WeakPairing,
            tol,
        );
    }
    if let Some(c) = cubic_phi_diagnostic(mesh) {
        rep.residuals.insert(
            "phi_cubic_order".into(),
            Residual {
                value: c,
                norm_kind: NormKind::MaxInterior,
                tolerance: f64::INFINITY,
                pass: true,
            },
        );
    }
    Ok(rep)
}

/// `sup |φ|/|x|³` over nodes within a quarter of the boundary distance of the
/// first origin preimage, in parameter coordinates. `None` without origins.
pub fn cubic_phi_diagnostic(mesh: &SurfaceMesh) -> Option<f64> {
    let &o = mesh.origin_preimages().first()?;
    if mesh.phi.is_empty() {
        return None;
    }
    let c = mesh.params[o];
    let dist = |i: usize| (mesh.params[i][0] - c[0]).hypot(mesh.params[i][1] - c[1]);
    let b = mesh.boundary_nodes();
    let reach = (0..mesh.node_count())
        .filter(|&i| b[i])
        .map(dist)
        .fold(f64::INFINITY, f64::min);
    let v = (0..mesh.node_count())
        .filter(|&i| i != o && dist(i) < 0.25 * reach)
        .map(|i| (mesh.phi[i] - mesh.phi[o]).abs() / dist(i).powi(3))
        .fold(0.0, f64::max);
    Some(v)
}
