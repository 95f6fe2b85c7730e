//! Thread-count control and order-fixed reductions.
//!
//! Element loops fan out with rayon, but every reduction goes through
//! [`pairwise_sum`] over an index-ordered buffer, so results do not depend on
//! the number of worker threads.

use rayon::prelude::*;

/// Runs `f` inside a rayon pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Fixed-shape pairwise summation: the tree only depends on `values.len()`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Maps every index in `0..n` and sums the results in index order.
pub fn sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let values: Vec<f64> = (0..n).into_par_iter().map(f).collect();
    pairwise_sum(&values)
}

/// Parallel map over `0..n` preserving index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_serial_sum_for_small_input() {
        let v = [1.0, 2.0, 3.5];
        assert_eq!(pairwise_sum(&v), 6.5);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn thread_count_does_not_change_sums() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let a = with_threads(1, || sum_indexed(100_000, f));
        let b = with_threads(8, || sum_indexed(100_000, f));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
