//! Legendrian surfaces in the Heisenberg group ℍ².
//!
//! The crate represents triangulated Legendrian immersions, evaluates the
//! sub-Riemannian quantities attached to them (Folland–Korányi gauge, phase,
//! Lagrangian angle) and checks the conservation laws and two-sided density
//! bounds satisfied by Hamiltonian-stationary (H-minimal) surfaces on a zoo of
//! analytic examples.
//!
//! Module map:
//!
//! - [`heisenberg`]: ambient coordinates, group law, gauge, contact and
//!   symplectic forms, horizontal gradients.
//! - [`mesh`]: triangulated surfaces, the HLMESH text format, Legendrian lift,
//!   induced metric and clipped sub-level quadrature.
//! - [`calculus`]: surface gradient, cotangent Laplace–Beltrami, tangent/normal
//!   splitting, weak divergence pairings.
//! - [`angle`]: Lagrangian angle, Maslov index, Euler–Lagrange residuals.
//! - [`identities`]: pointwise and weak identity checks.
//! - [`monotonicity`]: density curves, origin weights, the balance law, the
//!   almost-monotonicity and Bernstein checks, classical monotonicity.
//! - [`zoo`]: analytic test surfaces.
//! - [`cli`]: configuration-driven runs and reports.

pub mod angle;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod heisenberg;
pub mod identities;
pub mod mesh;
pub mod monotonicity;
pub mod parallel;
pub mod vector;
pub mod zoo;

pub use error::{Error, Result};
pub use heisenberg::{AmbientVector, HeisenbergPoint, HorizontalVector};
pub use mesh::{Ambient, SurfaceMesh};
