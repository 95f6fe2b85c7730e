//! Triangulated immersed surfaces.
//!
//! A [`SurfaceMesh`] stores, per node, parameter-plane coordinates and the
//! ambient position. For ℍ² meshes the metric part of the position is `z`
//! (the horizontal metric is Euclidean through the frame isometry) and the
//! Legendrian coordinate φ is kept alongside; for Euclidean meshes φ is zero.

mod clip;
mod io;
mod lift;
mod metric;

pub use clip::{area, integrate, level_field, Region, RegionScalar, Sample};
pub(crate) use clip::{
    element_areas as clip_element_areas, element_samples as clip_element_samples,
};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use lift::{legendrian_defect, legendrian_lift, LegendrianDefect, LiftReport};
pub use metric::{induced_metric, MetricTensor};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergPoint;
use crate::vector::{self, Vector, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Ambient {
    Heisenberg2,
    Euclidean(usize),
}

impl Ambient {
    /// Dimension of the metric coordinates.
    pub fn metric_dim(&self) -> usize {
        match self {
            Ambient::Heisenberg2 => 4,
            Ambient::Euclidean(n) => *n,
        }
    }

    pub fn is_heisenberg(&self) -> bool {
        matches!(self, Ambient::Heisenberg2)
    }
}

/// Conformal coordinates per node. When `period` is set, the second chart
/// coordinate is periodic (angular) and is unwrapped per element.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalChart {
    pub coords: Vec<[f64; 2]>,
    pub period: Option<f64>,
}

impl ConformalChart {
    /// Chart coordinates of the corners of `tri`, with the periodic coordinate
    /// unwrapped relative to the first corner. `None` if any corner is not finite.
    pub fn element_coords(&self, tri: &[usize; 3]) -> Option<[[f64; 2]; 3]> {
        let mut c = tri.map(|i| self.coords[i]);
        if c.iter().flatten().any(|x| !x.is_finite()) {
            return None;
        }
        if let Some(period) = self.period {
            for k in 1..3 {
                let d = c[k][1] - c[0][1];
                c[k][1] -= period * (d / period).round();
            }
        }
        Some(c)
    }
}

/// Node numbering of polar-style zoo meshes: an optional tip node followed by
/// `rings` rings of `angular` nodes each, ring-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingLayout {
    pub tip: Option<usize>,
    pub angular: usize,
    pub rings: usize,
    pub first: usize,
}

impl RingLayout {
    pub fn ring(&self, k: usize) -> Vec<usize> {
        assert!(k < self.rings, "ring {k} out of range");
        (0..self.angular)
            .map(|j| self.first + k * self.angular + j)
            .collect()
    }
}

/// Analytic fields stored by the zoo for oracle comparisons.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroundTruth {
    /// Lagrangian angle per node (one continuous branch along the parameter chart).
    pub beta: Option<Vec<f64>>,
    /// Expected |θ₀| per marked origin preimage, in the order of `origins`.
    pub origin_weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub ambient: Ambient,
    pub params: Vec<[f64; 2]>,
    pub positions: Vec<Vector>,
    pub phi: Vec<f64>,
    pub triangles: Vec<[usize; 3]>,
    pub origins: Vec<usize>,
    pub chart: Option<ConformalChart>,
    pub rings: Option<RingLayout>,
    pub truth: Option<GroundTruth>,
}

fn signed_param_area(p: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    let [a, b, c] = t.map(|i| p[i]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl SurfaceMesh {
    /// Builds and validates a mesh. `phi` may be empty for Euclidean meshes.
    pub fn new(
        ambient: Ambient,
        params: Vec<[f64; 2]>,
        positions: Vec<Vector>,
        phi: Vec<f64>,
        triangles: Vec<[usize; 3]>,
        origins: Vec<usize>,
    ) -> Result<Self> {
        let n = params.len();
        let phi = if phi.is_empty() { vec![0.0; n] } else { phi };
        let mesh = SurfaceMesh {
            ambient,
            params,
            positions,
            phi,
            triangles,
            origins,
            chart: None,
            rings: None,
            truth: None,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.params.len();
        if let Ambient::Euclidean(d) = self.ambient {
            if !(3..=MAX_DIM).contains(&d) {
                return Err(Error::InvalidMesh(format!(
                    "euclidean dimension {d} not in 3..=6"
                )));
            }
        }
        if self.positions.len() != n || self.phi.len() != n {
            return Err(Error::InvalidMesh(format!(
                "{} parameter nodes but {} positions and {} phi values",
                n,
                self.positions.len(),
                self.phi.len()
            )));
        }
        let dim = self.ambient.metric_dim();
        for (i, p) in self.positions.iter().enumerate() {
            if p[dim..].iter().any(|x| *x != 0.0) {
                return Err(Error::InvalidMesh(format!(
                    "node {i} has coordinates beyond dimension {dim}"
                )));
            }
            if p.iter().chain(&self.params[i]).any(|x| !x.is_finite()) || !self.phi[i].is_finite() {
                return Err(Error::InvalidMesh(format!(
                    "node {i} has non-finite coordinates"
                )));
            }
        }
        let mut directed = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            let bad = |reason: String| Error::InvalidTriangle {
                triangle: t,
                reason,
            };
            if tri.iter().any(|&i| i >= n) {
                return Err(bad(format!("index out of range (node count {n})")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(bad("repeated node index".into()));
            }
            if signed_param_area(&self.params, tri) <= 0.0 {
                return Err(bad("degenerate or clockwise in parameter space".into()));
            }
            let [a, b, c] = tri.map(|i| self.positions[i]);
            let w = vector::wedge_norm2(&vector::sub(&b, &a), &vector::sub(&c, &a));
            let scale = vector::norm2(&vector::sub(&b, &a)) * vector::norm2(&vector::sub(&c, &a));
            if !(w > 1e-24 * scale) || scale == 0.0 {
                return Err(bad("image triangle has zero area".into()));
            }
            for k in 0..3 {
                let e = (tri[k], tri[(k + 1) % 3]);
                if directed.insert(e, t).is_some() {
                    return Err(bad(format!(
                        "edge {}->{} traversed twice in the same direction (inconsistent orientation)",
                        e.0, e.1
                    )));
                }
            }
        }
        if let Some(&o) = self.origins.iter().find(|&&o| o >= n) {
            return Err(Error::InvalidMesh(format!(
                "origin marker {o} out of range"
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.params.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn dim(&self) -> usize {
        self.ambient.metric_dim()
    }

    /// Ambient point of node `i` (metric part `z`, Legendrian coordinate φ).
    pub fn point(&self, i: usize) -> HeisenbergPoint {
        HeisenbergPoint::new(vector::to4(&self.positions[i]), self.phi[i])
    }

    /// Nodal ρ = |z| (or |x| for Euclidean meshes).
    pub fn rho_field(&self) -> Vec<f64> {
        self.positions.iter().map(vector::norm).collect()
    }

    /// Nodal gauge 𝔯; equals ρ on Euclidean meshes.
    pub fn gauge_field(&self) -> Vec<f64> {
        match self.ambient {
            Ambient::Heisenberg2 => (0..self.node_count())
                .map(|i| self.point(i).gauge())
                .collect(),
            Ambient::Euclidean(_) => self.rho_field(),
        }
    }

    /// Undirected edges `(min, max)` in sorted order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]))))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Flags nodes lying on an edge used by only one triangle.
    pub fn boundary_nodes(&self) -> Vec<bool> {
        let mut count: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut flag = vec![false; self.node_count()];
        for ((a, b), c) in count {
            if c == 1 {
                flag[a] = true;
                flag[b] = true;
            }
        }
        flag
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Triangles incident to each node.
    pub fn node_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.node_count()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &i in tri {
                out[i].push(t);
            }
        }
        out
    }

    /// Largest edge length in the parameter plane.
    pub fn param_h(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (self.params[a], self.params[b]);
                ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest parameter edge among triangles with a node inside the
    /// parameter disk of radius `radius` around `center`.
    pub fn param_h_within(&self, center: [f64; 2], radius: f64) -> f64 {
        let inside = |i: usize| {
            let p = self.params[i];
            (p[0] - center[0]).hypot(p[1] - center[1]) <= radius
        };
        let mut h: f64 = 0.0;
        for t in &self.triangles {
            if t.iter().any(|&i| inside(i)) {
                for k in 0..3 {
                    let (p, q) = (self.params[t[k]], self.params[t[(k + 1) % 3]]);
                    h = h.max((p[0] - q[0]).hypot(p[1] - q[1]));
                }
            }
        }
        h
    }

    /// Smallest gauge over boundary nodes: sub-level sets below this value do
    /// not touch the mesh boundary.
    pub fn gauge_support(&self) -> f64 {
        let b = self.boundary_nodes();
        let g = self.gauge_field();
        g.iter()
            .zip(&b)
            .filter(|(_, &on)| on)
            .map(|(v, _)| *v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Origin preimages: the marked ones, or (if none are marked) nodes with
    /// gauge below `1e-8 · diameter`.
    pub fn origin_preimages(&self) -> Vec<usize> {
        if !self.origins.is_empty() {
            return self.origins.clone();
        }
        let g = self.gauge_field();
        let diam = self.positions.iter().map(vector::norm).fold(0.0, f64::max) * 2.0;
        (0..self.node_count())
            .filter(|&i| g[i] < 1e-8 * diam)
            .collect()
    }

    /// Copy of the mesh seen as a Euclidean surface through its metric
    /// coordinates (drops φ).
    pub fn euclidean_projection(&self) -> SurfaceMesh {
        let mut m = self.clone();
        m.ambient = Ambient::Euclidean(self.dim());
        m.phi = vec![0.0; self.node_count()];
        m
    }

    /// Closed cycle through the neighbors of an interior node, oriented
    /// counter-clockwise. `None` for boundary nodes.
    pub fn link_loop(&self, v: usize) -> Option<Vec<usize>> {
        let mut next = BTreeMap::new();
        for t in &self.triangles {
            if let Some(k) = t.iter().position(|&i| i == v) {
                next.insert(t[(k + 1) % 3], t[(k + 2) % 3]);
            }
        }
        let &start = next.keys().next()?;
        let mut lp = vec![start];
        let mut cur = start;
        loop {
            let &n = next.get(&cur)?;
            if n == start {
                break;
            }
            if lp.len() > next.len() {
                return None;
            }
            lp.push(n);
            cur = n;
        }
        (lp.len() == next.len()).then_some(lp)
    }
}
