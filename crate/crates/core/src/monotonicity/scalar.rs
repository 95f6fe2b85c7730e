//! The scalar function `f(σ) = (σ·arctanσ + 1)/√(1+σ²)`: its bounds
//! `1 ≤ f ≤ π/2` and its derivative `arctanσ/(1+σ²)^{3/2}`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::parallel;

pub fn weight(sigma: f64) -> f64 {
    if sigma.abs() < 1.0 {
        1.0 + shifted_weight(sigma, false)
    } else {
        FRAC_PI_2 + shifted_weight(sigma, true)
    }
}

pub fn weight_derivative(sigma: f64) -> f64 {
    sigma.atan() / (1.0 + sigma * sigma).powf(1.5)
}

/// `1 − atan(u)/u`, accurate for small `u`.
fn one_minus_atan_ratio(u: f64) -> f64 {
    let u2 = u * u;
    if u2 < 1e-2 {
        // u²/3 − u⁴/5 + u⁶/7 − …
        let mut term = u2;
        let mut acc = 0.0;
        for k in 1..12 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * term / (2 * k + 1) as f64;
            term *= u2;
        }
        acc
    } else {
        1.0 - u.atan() / u
    }
}

/// `f(σ) − c` with `c = 1` (`far = false`) or `c = π/2`, written without
/// cancellation near 0 and near infinity respectively.
fn shifted_weight(sigma: f64, far: bool) -> f64 {
    let s = sigma.abs();
    let root = s.hypot(1.0);
    if !far {
        (s * s.atan() - s * s / (1.0 + root)) / root
    } else {
        let u = 1.0 / s;
        (one_minus_atan_ratio(u) - FRAC_PI_2 / (root + s)) / root
    }
}

/// `n` points on `[−max, max]`, dense near 0 (`σ = a·sinh(s)`, `s` uniform).
pub fn sinh_grid(n: usize, max: f64) -> Vec<f64> {
    let a = 1e-2;
    let s_max = (max / a).asinh();
    (0..n)
        .map(|i| {
            let s = -s_max + 2.0 * s_max * i as f64 / (n - 1) as f64;
            (a * s.sinh()).clamp(-max, max)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarFacts {
    pub points: usize,
    /// `min f − 1` over the grid (≥ 0 when the lower bound holds).
    pub lower_margin: f64,
    /// `π/2 − max f` over the grid.
    pub upper_margin: f64,
    /// Largest relative error of central differences against the closed
    /// form derivative.
    pub derivative_error: f64,
    /// `f(0) = 1` and `f(±∞) = π/2`, checked symbolically.
    pub endpoints_ok: bool,
}

impl ScalarFacts {
    pub fn holds(&self, derivative_tolerance: f64) -> bool {
        self.lower_margin >= 0.0
            && self.upper_margin >= 0.0
            && self.derivative_error <= derivative_tolerance
            && self.endpoints_ok
    }
}

/// Bounds on the grid and central differences with step `1e-4·|σ|`.
pub fn check_scalar_facts(n: usize, max: f64) -> ScalarFacts {
    let grid = sinh_grid(n, max);
    let lo = parallel::map_indexed(n, |i| weight(grid[i]));
    let lower = lo.iter().fold(f64::INFINITY, |m, &v| m.min(v)) - 1.0;
    let upper = FRAC_PI_2 - lo.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let errs = parallel::map_indexed(n, |i| {
        let s = grid[i];
        if s == 0.0 {
            return 0.0;
        }
        let h = 1e-4 * s.abs();
        let far = s.abs() >= 1.0;
        let d = (shifted_weight(s + h, far) - shifted_weight(s - h, far)) / (2.0 * h);
        let exact = weight_derivative(s);
        (d - exact).abs() / exact.abs()
    });
    let err = errs.iter().fold(0.0, |m: f64, &v| m.max(v));
    let endpoints_ok = weight(0.0) == 1.0
        && (weight(1e300) - FRAC_PI_2).abs() < 1e-15
        && (weight(-1e300) - FRAC_PI_2).abs() < 1e-15;
    ScalarFacts {
        points: n,
        lower_margin: lower,
        upper_margin: upper,
        derivative_error: err,
        endpoints_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_weight_agrees_with_direct_form() {
        for s in [0.01f64, 0.5, 0.99, 1.0, 3.0, 50.0] {
            let direct = (s * s.atan() + 1.0) / s.hypot(1.0);
            assert!(
                (shifted_weight(s, false) + 1.0 - direct).abs() < 1e-14,
                "{s}"
            );
            assert!(
                (shifted_weight(s, true) + FRAC_PI_2 - direct).abs() < 1e-14,
                "{s}"
            );
        }
    }
}
