//! C² piecewise-polynomial cutoffs χ with χ = 1 on [0, 1] and χ = 0 on
//! [2, ∞).
//!
//! χ′ is stored piecewise as a polynomial in the local variable
//! `x = (t − a)/(b − a)`; χ is its exact antiderivative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CutoffKind {
    /// χ′ ≡ −3/2 on [5/4, 7/4].
    Main,
    /// χ′ ≡ −1 on [1+ε, 2−ε].
    Epsilon { eps: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub kind: CutoffKind,
    /// Piece boundaries, from 1 to 2.
    pub knots: Vec<f64>,
    /// χ at each knot.
    pub values: Vec<f64>,
    /// Coefficients (ascending powers of the local variable) of χ′ per piece.
    pub pieces: Vec<Vec<f64>>,
}

/// `3x² − 2x³`
const SMOOTHSTEP: [f64; 4] = [0.0, 0.0, 3.0, -2.0];
/// `3x² − 2x³ + 15x²(1−x)²`, unit mean on [0, 1].
const UNIT_RAMP: [f64; 5] = [0.0, 0.0, 18.0, -32.0, 15.0];

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| k as f64 * a)
        .collect()
}

fn poly_integral(c: &[f64]) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(c.iter().enumerate().map(|(k, a)| a / (k as f64 + 1.0)))
        .collect()
}

/// `c(x) ↦ c(1 − x)`
fn poly_reflect(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; c.len()];
    // (1 − x)^k by the binomial expansion.
    for (k, &a) in c.iter().enumerate() {
        let mut binom = 1.0;
        for j in 0..=k {
            out[j] += a * binom * if j % 2 == 0 { 1.0 } else { -1.0 };
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

fn scaled(c: &[f64], s: f64) -> Vec<f64> {
    c.iter().map(|a| a * s).collect()
}

pub fn make_cutoff(kind: CutoffKind) -> Result<CutoffSpec> {
    let (knots, pieces) = match kind {
        CutoffKind::Main => {
            let (a, b) = (13.0 / 12.0, 5.0 / 4.0);
            let ramp = scaled(&SMOOTHSTEP, -1.5);
            (
                vec![1.0, a, b, 7.0 / 4.0, 3.0 - a, 2.0],
                vec![
                    vec![0.0],
                    ramp.clone(),
                    vec![-1.5],
                    poly_reflect(&ramp),
                    vec![0.0],
                ],
            )
        }
        CutoffKind::Epsilon { eps } => {
            if !(eps > 0.0 && eps < 0.25) {
                return Err(Error::Precondition(format!(
                    "cutoff needs 0 < eps < 1/4, got {eps}"
                )));
            }
            let ramp = scaled(&UNIT_RAMP, -1.0);
            (
                vec![1.0, 1.0 + eps, 2.0 - eps, 2.0],
                vec![ramp.clone(), vec![-1.0], poly_reflect(&ramp)],
            )
        }
    };
    let mut values = vec![1.0];
    for (k, p) in pieces.iter().enumerate() {
        let width = knots[k + 1] - knots[k];
        let last = values[k];
        values.push(last + width * poly_eval(&poly_integral(p), 1.0));
    }
    let spec = CutoffSpec {
        kind,
        knots,
        values,
        pieces,
    };
    let end = *spec.values.last().unwrap_or(&1.0);
    if end.abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "cutoff does not reach 0 at t = 2 ({end})"
        )));
    }
    Ok(spec)
}

impl CutoffSpec {
    fn locate(&self, t: f64) -> Option<(usize, f64, f64)> {
        if t <= self.knots[0] || t >= self.knots[self.knots.len() - 1] {
            return None;
        }
        let k = self.knots.partition_point(|&a| a <= t) - 1;
        let width = self.knots[k + 1] - self.knots[k];
        Some((k, (t - self.knots[k]) / width, width))
    }

    pub fn chi(&self, t: f64) -> f64 {
        match self.locate(t) {
            Some((k, x, w)) => self.values[k] + w * poly_eval(&poly_integral(&self.pieces[k]), x),
            None if t <= 1.0 => 1.0,
            None => 0.0,
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.locate(t)
            .map_or(0.0, |(k, x, _)| poly_eval(&self.pieces[k], x))
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.locate(t).map_or(0.0, |(k, x, w)| {
            poly_eval(&poly_deriv(&self.pieces[k]), x) / w
        })
    }

    /// `sup |χ′|` sampled on a fine grid.
    pub fn max_slope(&self) -> f64 {
        (0..=4000)
            .map(|i| self.d1(1.0 + i as f64 / 4000.0).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_matches_direct_substitution() {
        let c = [1.0, -2.0, 0.5, 3.0];
        let r = poly_reflect(&c);
        for x in [0.0, 0.3, 1.0] {
            assert!((poly_eval(&r, x) - poly_eval(&c, 1.0 - x)).abs() < 1e-14);
        }
    }

    #[test]
    fn ramps_have_the_right_mean() {
        assert!((poly_eval(&poly_integral(&SMOOTHSTEP), 1.0) - 0.5).abs() < 1e-15);
        assert!((poly_eval(&poly_integral(&UNIT_RAMP), 1.0) - 1.0).abs() < 1e-15);
        assert!((poly_eval(&UNIT_RAMP, 1.0) - 1.0).abs() < 1e-15);
    }
}
