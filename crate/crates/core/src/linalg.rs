//! Vector kernels with a fixed reduction order.
//!
//! Dot products are summed chunk by chunk and the chunk partials are added in
//! order, so results are bitwise identical whatever the thread count.

use rayon::prelude::*;

const CHUNK: usize = 1 << 14;
const PARALLEL_MIN: usize = 1 << 16;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let partial = |(x, y): (&[f64], &[f64])| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    if a.len() < PARALLEL_MIN {
        a.chunks(CHUNK).zip(b.chunks(CHUNK)).map(partial).sum()
    } else {
        let parts: Vec<f64> = a.par_chunks(CHUNK).zip(b.par_chunks(CHUNK)).map(partial).collect();
        parts.into_iter().sum()
    }
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if y.len() < PARALLEL_MIN {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}

pub(crate) fn scale(alpha: f64, x: &mut [f64]) {
    if x.len() < PARALLEL_MIN {
        x.iter_mut().for_each(|v| *v *= alpha);
    } else {
        x.par_iter_mut().for_each(|v| *v *= alpha);
    }
}

/// Fill `out` row by row with `f(k)` in parallel over disjoint slices.
pub(crate) fn fill_rows<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    if out.len() < PARALLEL_MIN {
        out.iter_mut().enumerate().for_each(|(k, y)| *y = f(k));
    } else {
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, slice)| {
            let base = c * CHUNK;
            slice.iter_mut().enumerate().for_each(|(k, y)| *y = f(base + k));
        });
    }
}
