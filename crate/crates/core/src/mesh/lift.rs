use std::collections::VecDeque;

use super::SurfaceMesh;
use crate::error::{Error, Result};
use crate::heisenberg::symplectic_pairing;
use crate::vector::{self, to4};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftReport {
    /// Largest circulation of the Liouville form around a fundamental cycle.
    pub loop_defect: f64,
    /// `loop_defect <= tolerance`.
    pub exact: bool,
}

/// Integral of `⟨Jz, dz⟩` along the straight segment `z_i → z_j`.
fn edge_increment(mesh: &SurfaceMesh, i: usize, j: usize) -> f64 {
    symplectic_pairing(&to4(&mesh.positions[i]), &to4(&mesh.positions[j]))
}

/// Integrates `dφ = ⟨JG, dG⟩` along a breadth-first spanning tree rooted at
/// node 0 (φ = 0 there) and writes the result into `mesh.phi`.
pub fn legendrian_lift(mesh: &mut SurfaceMesh, tolerance: f64) -> Result<LiftReport> {
    if !mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "legendrian lift needs a heisenberg2 mesh".into(),
        ));
    }
    let n = mesh.node_count();
    let adj = mesh.adjacency();
    let mut phi = vec![f64::NAN; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        phi[0] = 0.0;
        queue.push_back(0);
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if phi[j].is_nan() {
                phi[j] = phi[i] + edge_increment(mesh, i, j);
                queue.push_back(j);
            }
        }
    }
    if let Some(orphan) = phi.iter().position(|x| x.is_nan()) {
        return Err(Error::InvalidMesh(format!(
            "mesh is disconnected (node {orphan} unreachable)"
        )));
    }
    let loop_defect = mesh
        .edges()
        .iter()
        .map(|&(i, j)| (phi[j] - phi[i] - edge_increment(mesh, i, j)).abs())
        .fold(0.0, f64::max);
    mesh.phi = phi;
    Ok(LiftReport {
        loop_defect,
        exact: loop_defect <= tolerance,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LegendrianDefect {
    pub max_contact: f64,
    pub max_lagrangian: f64,
}

/// Per element: contact residual `Σ |∫_e α| / |e|` over the two edges leaving
/// the first corner, and `|ω(e₁,e₂)| / |e₁ ∧ e₂|`.
pub fn legendrian_defect(mesh: &SurfaceMesh) -> Result<LegendrianDefect> {
    if !mesh.ambient.is_heisenberg() {
        return Err(Error::Precondition(
            "legendrian defect needs a heisenberg2 mesh".into(),
        ));
    }
    let mut out = LegendrianDefect {
        max_contact: 0.0,
        max_lagrangian: 0.0,
    };
    for t in &mesh.triangles {
        let [a, b, c] = *t;
        let contact: f64 = [b, c]
            .iter()
            .map(|&j| {
                let len = vector::norm(&vector::sub(&mesh.positions[j], &mesh.positions[a]));
                let alpha = -(mesh.phi[j] - mesh.phi[a]) + edge_increment(mesh, a, j);
                alpha.abs() / len
            })
            .sum();
        let e1 = vector::sub(&mesh.positions[b], &mesh.positions[a]);
        let e2 = vector::sub(&mesh.positions[c], &mesh.positions[a]);
        let omega = 2.0 * symplectic_pairing(&to4(&e1), &to4(&e2));
        let lag = omega.abs() / vector::wedge_norm2(&e1, &e2).sqrt();
        out.max_contact = out.max_contact.max(contact);
        out.max_lagrangian = out.max_lagrangian.max(lag);
    }
    Ok(out)
}
