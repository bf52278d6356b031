//! Deterministic reductions and order-preserving parallel maps.

use rayon::prelude::*;

/// Pairwise (tree) summation. The association order depends only on the
/// length of the input, so results are reproducible run to run.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |a, b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Weighted pairwise sum `Σ wᵢ xᵢ`.
pub fn pairwise_dot(w: &[f64], xs: &[f64]) -> f64 {
    let prod: Vec<f64> = w.iter().zip(xs).map(|(a, b)| a * b).collect();
    pairwise_sum(&prod)
}

/// Parallel map that keeps input order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
}
