//! Fixed-width ambient vectors.
//!
//! Metric coordinates of every mesh live in a zero-padded `[f64; 6]`: the
//! horizontal plane of ℍ² uses the first four slots, Euclidean meshes use `n`
//! slots with `n <= 6`. Padding zeros never change dot products.

pub const MAX_DIM: usize = 6;

pub type Vector = [f64; MAX_DIM];

pub const ZERO: Vector = [0.0; MAX_DIM];

#[inline]
pub fn dot(a: &Vector, b: &Vector) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(a: &Vector) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &Vector) -> f64 {
    norm2(a).sqrt()
}

#[inline]
pub fn add(a: &Vector, b: &Vector) -> Vector {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn sub(a: &Vector, b: &Vector) -> Vector {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn scale(a: &Vector, s: f64) -> Vector {
    std::array::from_fn(|i| a[i] * s)
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &Vector, s: f64, b: &Vector) -> Vector {
    std::array::from_fn(|i| a[i] + s * b[i])
}

/// Complex structure on the first four slots, `(w1,w2,w3,w4) ↦ (-w2,w1,-w4,w3)`.
#[inline]
pub fn apply_j(a: &Vector) -> Vector {
    let mut out = ZERO;
    out[0] = -a[1];
    out[1] = a[0];
    out[2] = -a[3];
    out[3] = a[2];
    out
}

pub fn from4(w: [f64; 4]) -> Vector {
    [w[0], w[1], w[2], w[3], 0.0, 0.0]
}

pub fn to4(v: &Vector) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// Squared area of the parallelogram spanned by `a` and `b` (Gram determinant).
#[inline]
pub fn wedge_norm2(a: &Vector, b: &Vector) -> f64 {
    let g = norm2(a) * norm2(b) - dot(a, b).powi(2);
    g.max(0.0)
}
