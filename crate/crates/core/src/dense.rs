//! Thin wrapper over the dense symmetric eigensolver.

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Eigen-decomposition of a real symmetric matrix.
///
/// `a` is row-major `n x n`; only the lower triangle is read. Returns the
/// eigenvalues in ascending order and the eigenvectors as columns of a
/// column-major `n x n` buffer (`vecs[k * n + i]` is component `i` of vector
/// `k`).
pub(crate) fn sym_eig(n: usize, a: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != n * n {
        return Err(Error::LengthMismatch {
            expected: n * n,
            got: a.len(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let m = Mat::<f64>::from_fn(n, n, |i, j| a[i * n + j]);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NonConvergence { residual: f64::NAN })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| s[p].total_cmp(&s[q]));
    let vals = order.iter().map(|&k| s[k]).collect();
    let mut vecs = vec![0.0; n * n];
    for (c, &k) in order.iter().enumerate() {
        for i in 0..n {
            vecs[c * n + i] = u[(i, k)];
        }
    }
    Ok((vals, vecs))
}
