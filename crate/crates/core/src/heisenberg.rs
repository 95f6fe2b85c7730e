//! Exact ambient structures of the Heisenberg group ℍ².
//!
//! Points are `(z₁, z₂, z₃, z₄; φ)`. The contact form is
//! `α = -dφ + Σᵢ z₂ᵢ₋₁ dz₂ᵢ - z₂ᵢ dz₂ᵢ₋₁`, the symplectic form on the
//! horizontal projection is `ω = 2 Σᵢ dz₂ᵢ₋₁ ∧ dz₂ᵢ`, and the horizontal frame
//! `Xᵢ = ∂z₂ᵢ₋₁ - z₂ᵢ ∂φ`, `Yᵢ = ∂z₂ᵢ + z₂ᵢ₋₁ ∂φ` is declared orthonormal.
//! Horizontal vectors are stored by their components in that frame, which
//! identifies them with ℝ⁴ ≅ ℂ².

use crate::error::{Error, Result};

/// Point of ℍ².
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HeisenbergPoint {
    pub z: [f64; 4],
    pub phi: f64,
}

/// Tangent vector of ℍ² in coordinate components `(dz; dφ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientVector {
    pub dz: [f64; 4],
    pub dphi: f64,
}

/// Horizontal vector in the orthonormal frame `(X₁, Y₁, X₂, Y₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HorizontalVector {
    pub w: [f64; 4],
}

impl HorizontalVector {
    pub const ZERO: HorizontalVector = HorizontalVector { w: [0.0; 4] };

    pub fn new(w: [f64; 4]) -> Self {
        Self { w }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        (0..4).map(|i| self.w[i] * other.w[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.w.map(|x| x * s))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(std::array::from_fn(|i| self.w[i] + other.w[i]))
    }

    /// The complex structure `(w₁,w₂,w₃,w₄) ↦ (−w₂,w₁,−w₄,w₃)`.
    pub fn apply_j(&self) -> Self {
        let w = self.w;
        Self::new([-w[1], w[0], -w[3], w[2]])
    }

    /// Lifts to an ambient vector at `p` (adds the φ-component forced by
    /// horizontality).
    pub fn to_ambient(&self, p: &HeisenbergPoint) -> AmbientVector {
        let w = self.w;
        let z = p.z;
        AmbientVector {
            dz: w,
            dphi: -z[1] * w[0] + z[0] * w[1] - z[3] * w[2] + z[2] * w[3],
        }
    }
}

impl HeisenbergPoint {
    pub const ORIGIN: HeisenbergPoint = HeisenbergPoint {
        z: [0.0; 4],
        phi: 0.0,
    };

    pub fn new(z: [f64; 4], phi: f64) -> Self {
        Self { z, phi }
    }

    /// Euclidean radius ρ = |z|.
    pub fn rho(&self) -> f64 {
        self.rho2().sqrt()
    }

    pub fn rho2(&self) -> f64 {
        self.z.iter().map(|x| x * x).sum()
    }

    /// Folland–Korányi gauge `(ρ⁴ + 4φ²)^{1/4}`.
    pub fn gauge(&self) -> f64 {
        koranyi_gauge(self)
    }

    pub fn phase(&self) -> Result<f64> {
        phase(self)
    }

    /// Group inverse `(−z; −φ)`.
    pub fn inverse(&self) -> Self {
        Self::new(self.z.map(|x| -x), -self.phi)
    }

    /// Anisotropic dilation `(z, φ) ↦ (λz, λ²φ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        Self::new(self.z.map(|x| lambda * x), lambda * lambda * self.phi)
    }

    /// The horizontal frame `[X₁, Y₁, X₂, Y₂]` at this point.
    pub fn frame(&self) -> [AmbientVector; 4] {
        std::array::from_fn(|k| {
            let mut w = [0.0; 4];
            w[k] = 1.0;
            HorizontalVector::new(w).to_ambient(self)
        })
    }
}

pub fn koranyi_gauge(p: &HeisenbergPoint) -> f64 {
    let r2 = p.rho2();
    (r2 * r2 + 4.0 * p.phi * p.phi).sqrt().sqrt()
}

/// Phase σ = 2φ/ρ²; undefined on the center axis.
pub fn phase(p: &HeisenbergPoint) -> Result<f64> {
    let r2 = p.rho2();
    if r2 == 0.0 {
        return Err(Error::Domain("phase is undefined where rho = 0".into()));
    }
    Ok(2.0 * p.phi / r2)
}

/// Symplectic pairing `Σᵢ a₂ᵢ₋₁ b₂ᵢ − a₂ᵢ b₂ᵢ₋₁`, i.e. `⟨J a, b⟩`.
#[inline]
pub fn symplectic_pairing(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[1] - a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
}

/// Group law making α left-invariant:
/// `a·p = (a.z + p.z, a.φ + p.φ + Σᵢ a₂ᵢ₋₁ p₂ᵢ − a₂ᵢ p₂ᵢ₋₁)`.
pub fn left_translate(a: &HeisenbergPoint, p: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint::new(
        std::array::from_fn(|i| a.z[i] + p.z[i]),
        a.phi + p.phi + symplectic_pairing(&a.z, &p.z),
    )
}

/// Differential of `p ↦ a·p` applied to `v`.
pub fn left_translate_differential(a: &HeisenbergPoint, v: &AmbientVector) -> AmbientVector {
    AmbientVector {
        dz: v.dz,
        dphi: v.dphi + symplectic_pairing(&a.z, &v.dz),
    }
}

/// Contact form `α_p(u)`.
pub fn contact_pairing(p: &HeisenbergPoint, u: &AmbientVector) -> f64 {
    -u.dphi + symplectic_pairing(&p.z, &u.dz)
}

/// `ω(π_*u, π_*v) = 2 Σᵢ (u₂ᵢ₋₁ v₂ᵢ − u₂ᵢ v₂ᵢ₋₁)`.
pub fn symplectic_form(u: &AmbientVector, v: &AmbientVector) -> f64 {
    2.0 * symplectic_pairing(&u.dz, &v.dz)
}

/// Returns `(α_p(u), ω(π_*u, π_*v))`.
pub fn form_pairings(p: &HeisenbergPoint, u: &AmbientVector, v: &AmbientVector) -> (f64, f64) {
    (contact_pairing(p, u), symplectic_form(u, v))
}

pub fn apply_j(w: &HorizontalVector) -> HorizontalVector {
    w.apply_j()
}

/// Horizontal gradients of ρ, φ and the gauge 𝔯.
#[derive(Clone, Copy, Debug)]
pub struct GaugeGradients {
    pub grad_rho: HorizontalVector,
    pub grad_phi: HorizontalVector,
    pub grad_gauge: HorizontalVector,
}

/// Closed-form horizontal gradients: `∇ᴴρ = z/ρ`, `∇ᴴφ = Jz`,
/// `∇ᴴ𝔯 = (ρ² z + 2φ Jz)/𝔯³`.
pub fn horizontal_gauge_gradients(p: &HeisenbergPoint) -> Result<GaugeGradients> {
    let rho = p.rho();
    if rho == 0.0 {
        return Err(Error::Domain(
            "horizontal gradient of rho is undefined where rho = 0".into(),
        ));
    }
    let z = HorizontalVector::new(p.z);
    let jz = z.apply_j();
    let r = p.gauge();
    let r3 = r * r * r;
    Ok(GaugeGradients {
        grad_rho: z.scaled(1.0 / rho),
        grad_phi: jz,
        grad_gauge: z.scaled(rho * rho / r3).plus(&jz.scaled(2.0 * p.phi / r3)),
    })
}

/// Horizontal gradient of the phase, `∇ᴴσ = 2Jz/ρ² − 4φ z/ρ⁴`.
pub fn horizontal_phase_gradient(p: &HeisenbergPoint) -> Result<HorizontalVector> {
    let r2 = p.rho2();
    if r2 == 0.0 {
        return Err(Error::Domain(
            "phase gradient undefined where rho = 0".into(),
        ));
    }
    let z = HorizontalVector::new(p.z);
    Ok(z.apply_j()
        .scaled(2.0 / r2)
        .plus(&z.scaled(-4.0 * p.phi / (r2 * r2))))
}

/// Derivative of a function along the frame vector `k` at `p`, by central
/// differences with step `h` (moves along the integral curve of the frame
/// vector, which is a straight line in coordinates).
pub fn frame_derivative_fd(
    f: impl Fn(&HeisenbergPoint) -> f64,
    p: &HeisenbergPoint,
    k: usize,
    h: f64,
) -> f64 {
    let v = p.frame()[k];
    let shift = |s: f64| {
        HeisenbergPoint::new(
            std::array::from_fn(|i| p.z[i] + s * v.dz[i]),
            p.phi + s * v.dphi,
        )
    };
    (f(&shift(h)) - f(&shift(-h))) / (2.0 * h)
}
