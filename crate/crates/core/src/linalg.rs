//! Small dense kernels shared by the sparsifier, the lift and the certificate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn sym_eigen(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `(lambda_min, lambda_max)` of a symmetric matrix.
pub fn extreme_eigenvalues(a: &DMatrix<f64>) -> (f64, f64) {
    let values = SymmetricEigen::new(a.clone()).eigenvalues;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `sum_i w_i v_i v_i^T` over the columns of `vt` (r x M), skipping zero weights.
/// Built entry by entry on the upper triangle so the result is exactly symmetric.
pub fn weighted_gram(vt: &DMatrix<f64>, weights: &[f64]) -> DMatrix<f64> {
    let r = vt.nrows();
    let mut a = DMatrix::zeros(r, r);
    for (i, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            rank_one_update(&mut a, w, vt.column(i).as_slice());
        }
    }
    a
}

/// `a += t * v v^T`, written to both triangles from the same products.
pub fn rank_one_update(a: &mut DMatrix<f64>, t: f64, v: &[f64]) {
    let r = v.len();
    for j in 0..r {
        let tv = t * v[j];
        for i in 0..=j {
            let x = a[(i, j)] + tv * v[i];
            a[(i, j)] = x;
            a[(j, i)] = x;
        }
    }
}

/// Ceiling that ignores relative rounding noise below 1e-12, so that
/// e.g. `3 / 0.2^2` evaluates to 75 rather than 76.
pub fn ceil_tol(x: f64) -> usize {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-12 * x.abs().max(1.0) {
        nearest as usize
    } else {
        x.ceil() as usize
    }
}
