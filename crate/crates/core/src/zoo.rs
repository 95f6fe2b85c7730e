//! Analytic test surfaces.
//!
//! Polar meshes use rings at radii `2^{k/m}` (`m = per_octave`), so the
//! reindexing `k ↦ k + m` is the dilation `s ↦ 2s`. Each generated mesh carries
//! a conformal chart and, where available, analytic ground truth.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{left_translate, symplectic_pairing, HeisenbergPoint};
use crate::mesh::{self, Ambient, ConformalChart, GroundTruth, RingLayout, SurfaceMesh};
use crate::vector::{from4, Vector, ZERO};

/// Angular and radial counts of a polar mesh.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarResolution {
    pub angular: usize,
    pub per_octave: usize,
}

impl PolarResolution {
    /// Rings spaced so that elements are close to square in log-polar
    /// coordinates.
    pub fn with_angular(angular: usize) -> Self {
        let per_octave = ((angular as f64) * std::f64::consts::LN_2 / TAU)
            .round()
            .max(1.0) as usize;
        PolarResolution {
            angular,
            per_octave,
        }
    }

    /// Angular spacing `2π/N`, the nominal mesh size on the unit circle.
    pub fn h(&self) -> f64 {
        TAU / self.angular as f64
    }

    pub fn refined(&self) -> Self {
        PolarResolution {
            angular: 2 * self.angular,
            per_octave: 2 * self.per_octave,
        }
    }
}

struct Polar<'a> {
    ambient: Ambient,
    s_min: f64,
    s_max: f64,
    res: PolarResolution,
    tip: bool,
    embed: &'a dyn Fn(f64, f64) -> (Vector, f64),
    chart: &'a dyn Fn(f64, f64) -> [f64; 2],
    /// Period of the second chart coordinate.
    period: Option<f64>,
}

fn ring_radii(s_min: f64, s_max: f64, m: usize) -> Vec<f64> {
    let m = m as f64;
    let lo = (m * s_min.log2() + 1e-9).floor() as i64;
    let hi = (m * s_max.log2() - 1e-9).ceil() as i64;
    let per = m as i64;
    // Octave and fraction split so that ring k + m is exactly twice ring k.
    (lo..=hi)
        .map(|k| (k.rem_euclid(per) as f64 / m).exp2() * (k.div_euclid(per) as f64).exp2())
        .collect()
}

fn polar_mesh(spec: Polar) -> Result<SurfaceMesh> {
    let n = spec.res.angular;
    if n < 3 {
        return Err(Error::Precondition(
            "polar meshes need at least 3 angular sectors".into(),
        ));
    }
    let radii = ring_radii(spec.s_min, spec.s_max, spec.res.per_octave);
    let mut params = Vec::new();
    let mut positions = Vec::new();
    let mut phi = Vec::new();
    let mut chart = Vec::new();
    let first = usize::from(spec.tip);
    if spec.tip {
        let (x, f) = (spec.embed)(0.0, 0.0);
        params.push([0.0, 0.0]);
        positions.push(x);
        phi.push(f);
        chart.push((spec.chart)(0.0, 0.0).map(|c| if c.is_finite() { c } else { f64::NAN }));
    }
    for &s in &radii {
        for j in 0..n {
            let t = TAU * j as f64 / n as f64;
            let (x, f) = (spec.embed)(s, t);
            params.push([s * t.cos(), s * t.sin()]);
            positions.push(x);
            phi.push(f);
            chart.push((spec.chart)(s, t));
        }
    }
    let node = |k: usize, j: usize| first + k * n + (j % n);
    let mut triangles = Vec::new();
    if spec.tip {
        for j in 0..n {
            triangles.push([0, node(0, j), node(0, j + 1)]);
        }
    }
    for k in 0..radii.len() - 1 {
        for j in 0..n {
            let (a, b, c, d) = (
                node(k, j),
                node(k + 1, j),
                node(k + 1, j + 1),
                node(k, j + 1),
            );
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let origins = if spec.tip { vec![0] } else { vec![] };
    let mut m = SurfaceMesh::new(spec.ambient, params, positions, phi, triangles, origins)?;
    m.chart = Some(ConformalChart {
        coords: chart,
        period: spec.period,
    });
    m.rings = Some(RingLayout {
        tip: spec.tip.then_some(0),
        angular: n,
        rings: radii.len(),
        first,
    });
    Ok(m)
}

fn legendrian_gate(mesh: &SurfaceMesh, tol: f64) -> Result<()> {
    let d = mesh::legendrian_defect(mesh)?;
    if d.max_contact > tol || d.max_lagrangian > tol {
        return Err(Error::InvalidMesh(format!(
            "generated surface fails the Legendrian gate: contact {:.3e}, lagrangian {:.3e} (tolerance {tol:.1e})",
            d.max_contact, d.max_lagrangian
        )));
    }
    Ok(())
}

/// `arg det_ℂ(b1, b2)` for two vectors of ℂ² written as real 4-vectors.
fn det_arg(b1: &[f64; 4], b2: &[f64; 4]) -> f64 {
    let (a0, a1) = ((b1[0], b1[1]), (b1[2], b1[3]));
    let (c0, c1) = ((b2[0], b2[1]), (b2[2], b2[3]));
    let re = a0.0 * c1.0 - a0.1 * c1.1 - (a1.0 * c0.0 - a1.1 * c0.1);
    let im = a0.0 * c1.1 + a0.1 * c1.0 - (a1.0 * c0.1 + a1.1 * c0.0);
    im.atan2(re)
}

pub const STANDARD_BASIS: [[f64; 4]; 2] = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];

/// Lagrangian plane spanned by an orthonormal `basis`, optionally moved by a
/// left translation. Disk of radius `extent` with a tip fan at the center.
pub fn make_plane(
    basis: [[f64; 4]; 2],
    offset: Option<HeisenbergPoint>,
    extent: f64,
    res: PolarResolution,
) -> Result<SurfaceMesh> {
    let [b1, b2] = basis;
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    if (dot(&b1, &b1) - 1.0).abs() > 1e-12
        || (dot(&b2, &b2) - 1.0).abs() > 1e-12
        || dot(&b1, &b2).abs() > 1e-12
    {
        return Err(Error::Precondition(
            "plane basis must be orthonormal".into(),
        ));
    }
    let omega = 2.0 * symplectic_pairing(&b1, &b2);
    if omega.abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "plane basis is not Lagrangian: ω(b1,b2) = {omega}"
        )));
    }
    let embed = |s: f64, t: f64| {
        let (x1, x2) = (s * t.cos(), s * t.sin());
        let z: [f64; 4] = std::array::from_fn(|i| x1 * b1[i] + x2 * b2[i]);
        let p = HeisenbergPoint::new(z, 0.0);
        let p = offset.map_or(p, |a| left_translate(&a, &p));
        (from4(p.z), p.phi)
    };
    let chart = |s: f64, t: f64| [s * t.cos(), s * t.sin()];
    let mut m = polar_mesh(Polar {
        ambient: Ambient::Heisenberg2,
        s_min: extent / 64.0,
        s_max: extent,
        res,
        tip: true,
        embed: &embed,
        chart: &chart,
        period: None,
    })?;
    let through_origin = offset.is_none_or(|a| a.gauge() == 0.0);
    if !through_origin {
        m.origins.clear();
    }
    let beta = det_arg(&b1, &b2);
    m.truth = Some(GroundTruth {
        beta: Some(vec![beta; m.node_count()]),
        origin_weights: if through_origin { vec![TAU] } else { vec![] },
    });
    legendrian_gate(&m, 1e-10)?;
    Ok(m)
}

/// Radii of the Legendrian circle `(r₁e^{ipt}, r₂e^{−iqt})` on the unit sphere.
pub fn sw_radii(p: u32, q: u32) -> (f64, f64) {
    let (p, q) = (p as f64, q as f64);
    ((q / (p + q)).sqrt(), (p / (p + q)).sqrt())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Cone `s·γ(t)` over the Schoen–Wolfson circle of type `(p, q)`, φ ≡ 0.
/// The chart is `(ln s / √(pq), t)`.
pub fn make_sw_cone(
    p: u32,
    q: u32,
    s_min: f64,
    s_max: f64,
    res: PolarResolution,
    tip: bool,
) -> Result<SurfaceMesh> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("cone type needs p, q >= 1".into()));
    }
    if gcd(p, q) != 1 {
        return Err(Error::Precondition(format!(
            "cone type ({p}, {q}) is not coprime"
        )));
    }
    if !(s_max > s_min) || !(s_min > 0.0) {
        return Err(Error::Precondition(
            "cone radii must satisfy 0 < s_min < s_max".into(),
        ));
    }
    let (r1, r2) = sw_radii(p, q);
    let (pf, qf) = (p as f64, q as f64);
    let embed = |s: f64, t: f64| {
        let z = [
            s * r1 * (pf * t).cos(),
            s * r1 * (pf * t).sin(),
            s * r2 * (qf * t).cos(),
            -s * r2 * (qf * t).sin(),
        ];
        (from4(z), 0.0)
    };
    let sq = (pf * qf).sqrt();
    let chart = |s: f64, t: f64| [s.ln() / sq, t];
    let mut m = polar_mesh(Polar {
        ambient: Ambient::Heisenberg2,
        s_min,
        s_max,
        res,
        tip,
        embed: &embed,
        chart: &chart,
        period: Some(TAU),
    })?;
    let beta: Vec<f64> = (0..m.node_count())
        .map(|i| match m.chart.as_ref().unwrap().coords[i] {
            [u, t] if u.is_finite() => (pf - qf) * t - PI / 2.0,
            _ => f64::NAN,
        })
        .collect();
    m.truth = Some(GroundTruth {
        beta: Some(beta),
        origin_weights: if tip { vec![TAU * sq] } else { vec![] },
    });
    legendrian_gate(&m, 10.0 * res.h() * res.h())?;
    Ok(m)
}

/// Separable potentials `u(x) = f(x₁) + g(x₂)` for gradient graphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "potential", rename_all = "snake_case")]
pub enum Potential {
    /// `amp · x₁³`
    Cubic { amp: f64 },
    /// `amp · (x₁³ + x₂³)`
    CubicSum { amp: f64 },
    /// `amp · (x₁² + x₂²) / 2`
    Quadratic { amp: f64 },
}

/// A one-variable cubic or quadratic term: derivative and arc length of
/// `x ↦ (x, f'(x))`.
#[derive(Clone, Copy)]
enum Term {
    Zero,
    Cubic(f64),
    Quadratic(f64),
}

impl Term {
    fn slope(self, x: f64) -> f64 {
        match self {
            Term::Zero => 0.0,
            Term::Cubic(a) => 3.0 * a * x * x,
            Term::Quadratic(a) => a * x,
        }
    }

    fn arc_length(self, x: f64) -> f64 {
        match self {
            Term::Zero => x,
            Term::Cubic(0.0) => x,
            Term::Cubic(a) => {
                let k = 6.0 * a;
                0.5 * x * (1.0 + k * k * x * x).sqrt() + (k * x).asinh() / (2.0 * k)
            }
            Term::Quadratic(a) => x * (1.0 + a * a).sqrt(),
        }
    }
}

impl Potential {
    fn terms(self) -> (Term, Term) {
        match self {
            Potential::Cubic { amp } => (Term::Cubic(amp), Term::Zero),
            Potential::CubicSum { amp } => (Term::Cubic(amp), Term::Cubic(amp)),
            Potential::Quadratic { amp } => (Term::Quadratic(amp), Term::Quadratic(amp)),
        }
    }
}

/// Gradient graph `(x₁, ∂₁u, x₂, ∂₂u)` over `[−extent, extent]²` on a
/// Cartesian grid with `2·half_cells` cells per side, lifted with φ = 0 at the
/// origin. The chart is the product of the arc lengths of the two factor
/// curves.
pub fn make_lagrangian_graph(
    potential: Potential,
    extent: f64,
    half_cells: usize,
) -> Result<SurfaceMesh> {
    if half_cells == 0 || !(extent > 0.0) {
        return Err(Error::Precondition(
            "graph domain needs extent > 0 and at least one cell".into(),
        ));
    }
    let (f, g) = potential.terms();
    let n = 2 * half_cells + 1;
    let x = |i: usize| extent * (i as f64 - half_cells as f64) / half_cells as f64;
    let id = |i: usize, j: usize| j * n + i;
    let mut params = Vec::with_capacity(n * n);
    let mut positions = Vec::with_capacity(n * n);
    let mut chart = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let (x1, x2) = (x(i), x(j));
            params.push([x1, x2]);
            positions.push(from4([x1, f.slope(x1), x2, g.slope(x2)]));
            chart.push([f.arc_length(x1), g.arc_length(x2)]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * (n - 1) * (n - 1));
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let origin = id(half_cells, half_cells);
    let mut m = SurfaceMesh::new(
        Ambient::Heisenberg2,
        params,
        positions,
        vec![],
        triangles,
        vec![origin],
    )?;
    mesh::legendrian_lift(&mut m, 1e-10)?;
    let base = m.phi[origin];
    m.phi.iter_mut().for_each(|v| *v -= base);
    m.chart = Some(ConformalChart {
        coords: chart,
        period: None,
    });
    m.truth = Some(GroundTruth {
        beta: None,
        origin_weights: vec![TAU],
    });
    legendrian_gate(&m, 1e-10)?;
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    /// Flat disk in ℝ³.
    Plane,
    /// `span(e₁,e₃) ∪ span(e₂,e₄)` in ℝ⁴, two disks meeting at 0.
    TwoPlanes,
    /// Catenoid in ℝ³ with the given neck radius, centered at 0.
    Catenoid { neck: f64 },
}

/// Euclidean minimal surfaces. `extent` is the disk radius for the planar
/// kinds and the half-height `|x₃| ≤ extent` for the catenoid.
pub fn make_classical_minimal(
    kind: ClassicalKind,
    extent: f64,
    res: PolarResolution,
) -> Result<SurfaceMesh> {
    let chart = |s: f64, t: f64| [s * t.cos(), s * t.sin()];
    match kind {
        ClassicalKind::Plane => {
            let embed = |s: f64, t: f64| {
                let mut v = ZERO;
                v[0] = s * t.cos();
                v[1] = s * t.sin();
                (v, 0.0)
            };
            let mut m = polar_mesh(Polar {
                ambient: Ambient::Euclidean(3),
                s_min: extent / 64.0,
                s_max: extent,
                res,
                tip: true,
                embed: &embed,
                chart: &chart,
                period: None,
            })?;
            m.truth = Some(GroundTruth {
                beta: None,
                origin_weights: vec![TAU],
            });
            Ok(m)
        }
        ClassicalKind::TwoPlanes => {
            let disk = |slots: [usize; 2]| {
                let embed = move |s: f64, t: f64| {
                    let mut v = ZERO;
                    v[slots[0]] = s * t.cos();
                    v[slots[1]] = s * t.sin();
                    (v, 0.0)
                };
                polar_mesh(Polar {
                    ambient: Ambient::Euclidean(4),
                    s_min: extent / 64.0,
                    s_max: extent,
                    res,
                    tip: true,
                    embed: &embed,
                    chart: &chart,
                    period: None,
                })
            };
            let a = disk([0, 2])?;
            let b = disk([1, 3])?;
            let shift = 3.0 * extent;
            let offset = a.node_count();
            let mut params = a.params.clone();
            params.extend(b.params.iter().map(|p| [p[0] + shift, p[1]]));
            let mut positions = a.positions.clone();
            positions.extend(&b.positions);
            let mut triangles = a.triangles.clone();
            triangles.extend(b.triangles.iter().map(|t| t.map(|i| i + offset)));
            let mut coords = a.chart.as_ref().unwrap().coords.clone();
            coords.extend(
                b.chart
                    .as_ref()
                    .unwrap()
                    .coords
                    .iter()
                    .map(|c| [c[0] + shift, c[1]]),
            );
            let mut m = SurfaceMesh::new(
                Ambient::Euclidean(4),
                params,
                positions,
                vec![],
                triangles,
                vec![0, offset],
            )?;
            m.chart = Some(ConformalChart {
                coords,
                period: None,
            });
            m.truth = Some(GroundTruth {
                beta: None,
                origin_weights: vec![TAU, TAU],
            });
            Ok(m)
        }
        ClassicalKind::Catenoid { neck } => {
            if !(neck > 0.0) {
                return Err(Error::Precondition(
                    "catenoid neck radius must be positive".into(),
                ));
            }
            // s = e^{v/c}: the log-polar chart (ln s, t) is conformal.
            let embed = |s: f64, t: f64| {
                let v = neck * s.ln();
                let r = neck * (v / neck).cosh();
                let mut x = ZERO;
                x[0] = r * t.cos();
                x[1] = r * t.sin();
                x[2] = v;
                (x, 0.0)
            };
            let log_chart = |s: f64, t: f64| [s.ln(), t];
            let bound = (extent / neck).exp();
            let mut m = polar_mesh(Polar {
                ambient: Ambient::Euclidean(3),
                s_min: 1.0 / bound,
                s_max: bound,
                res,
                tip: false,
                embed: &embed,
                chart: &log_chart,
                period: Some(TAU),
            })?;
            m.truth = Some(GroundTruth::default());
            Ok(m)
        }
    }
}

/// Serializable description of a zoo surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZooSpec {
    LagrangianPlane {
        #[serde(default = "default_basis")]
        basis: [[f64; 4]; 2],
        #[serde(default)]
        offset: Option<[f64; 5]>,
        extent: f64,
        angular: usize,
    },
    SwCone {
        p: u32,
        q: u32,
        s_min: f64,
        s_max: f64,
        angular: usize,
        #[serde(default = "yes")]
        tip: bool,
    },
    LagrangianGraph {
        #[serde(flatten)]
        potential: Potential,
        extent: f64,
        half_cells: usize,
    },
    EuclideanMinimal {
        shape: ClassicalKind,
        extent: f64,
        angular: usize,
    },
}

fn default_basis() -> [[f64; 4]; 2] {
    STANDARD_BASIS
}

fn yes() -> bool {
    true
}

impl ZooSpec {
    pub fn build(&self) -> Result<SurfaceMesh> {
        match *self {
            ZooSpec::LagrangianPlane {
                basis,
                offset,
                extent,
                angular,
            } => {
                let offset = offset.map(|a| HeisenbergPoint::new([a[0], a[1], a[2], a[3]], a[4]));
                make_plane(
                    basis,
                    offset,
                    extent,
                    PolarResolution::with_angular(angular),
                )
            }
            ZooSpec::SwCone {
                p,
                q,
                s_min,
                s_max,
                angular,
                tip,
            } => make_sw_cone(
                p,
                q,
                s_min,
                s_max,
                PolarResolution::with_angular(angular),
                tip,
            ),
            ZooSpec::LagrangianGraph {
                potential,
                extent,
                half_cells,
            } => make_lagrangian_graph(potential, extent, half_cells),
            ZooSpec::EuclideanMinimal {
                shape,
                extent,
                angular,
            } => make_classical_minimal(shape, extent, PolarResolution::with_angular(angular)),
        }
    }
}
