//! Trace norms of operators given in outer-product form.
//!
//! Operators built from ensembles never exist as matrices; they are sums
//! Σ_b x_b y_b† of outer products of sparse vectors. Their singular values
//! survive inside small Gram matrices: with A = X†X and B = Y†Y,
//!
//!   σ(Σ_b x_b y_b†)² = eig(A^{1/2} B A^{1/2}) \ {0},
//!
//! and for the Hermitian signed case Σ_b s_b x_b x_b† the eigenvalues are
//! those of G^{1/2} diag(s) G^{1/2} with G the Gram matrix. Both identities
//! are the usual "AB and BA share nonzero spectrum" argument, so the
//! resulting norms are exact, not bounds.

use super::Execution;
use crate::operators::QuantumState;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

fn gram(xs: &[QuantumState], ys: &[QuantumState], exec: Execution) -> DMatrix<Complex64> {
    let n = xs.len();
    let fill_row = |i: usize| -> Vec<Complex64> {
        (0..ys.len()).map(|j| xs[i].inner(&ys[j])).collect()
    };
    let rows: Vec<Vec<Complex64>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(fill_row).collect(),
        _ => (0..n).map(fill_row).collect(),
    };
    DMatrix::from_fn(n, ys.len(), |i, j| rows[i][j])
}

/// Spectral floor: eigenvalues below this fraction of the largest one are
/// treated as exact zeros. Gram matrices of redundant vector families have
/// large null spaces, and square roots would otherwise amplify the solver's
/// ±1e-17 noise on those directions into 1e-9-scale phantom norm.
const REL_FLOOR: f64 = 1e-12;

fn floored(eigenvalues: impl Iterator<Item = f64> + Clone) -> impl Iterator<Item = f64> + Clone {
    let top = eigenvalues.clone().fold(0.0f64, f64::max);
    eigenvalues.map(move |v| if v > top * REL_FLOOR { v } else { 0.0 })
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut d = DMatrix::zeros(n, n);
    for (i, v) in floored(eig.eigenvalues.iter().copied()).enumerate() {
        d[(i, i)] = Complex64::new(v.sqrt(), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Trace norm of M = Σ_b x_b y_b†. Weights belong inside the vectors.
pub fn trace_norm_outer(xs: &[QuantumState], ys: &[QuantumState], exec: Execution) -> f64 {
    assert_eq!(xs.len(), ys.len(), "outer-product form needs paired vectors");
    if xs.is_empty() {
        return 0.0;
    }
    let a = gram(xs, xs, exec);
    let b = gram(ys, ys, exec);
    let half = psd_sqrt(&a);
    let core = &half * b * &half;
    let eig = core.symmetric_eigen();
    floored(eig.eigenvalues.iter().copied()).map(f64::sqrt).sum()
}

/// Trace norm of the Hermitian M = Σ_b s_b x_b x_b†, s_b = ±1 (or any real
/// sign-carrying weights folded to unit magnitude).
pub fn trace_norm_signed(xs: &[QuantumState], signs: &[f64], exec: Execution) -> f64 {
    assert_eq!(xs.len(), signs.len(), "each vector needs a sign");
    if xs.is_empty() {
        return 0.0;
    }
    let g = gram(xs, xs, exec);
    let half = psd_sqrt(&g);
    let n = xs.len();
    let mut j = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = Complex64::new(signs[i], 0.0);
    }
    let core = &half * j * &half;
    let eig = core.symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    eig.eigenvalues
        .iter()
        .map(|&v| if v.abs() > top * REL_FLOOR { v.abs() } else { 0.0 })
        .sum()
}
