//! Independent reference routines for the integration tests. Plain `Vec`
//! arithmetic only, so nothing here shares code paths with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Mat = Vec<Vec<f64>>;

pub fn to_rows(m: &DMatrix<f64>) -> Mat {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

pub fn from_rows(rows: &Mat) -> DMatrix<f64> {
    let cols = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut a = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// `sum_i w_i v_i v_i^T` over rows `v_i`.
pub fn weighted_outer_sum(rows: &Mat, weights: &[f64]) -> Mat {
    let r = rows[0].len();
    let mut a = vec![vec![0.0; r]; r];
    for (v, &w) in rows.iter().zip(weights) {
        for i in 0..r {
            for j in 0..r {
                a[i][j] += w * v[i] * v[j];
            }
        }
    }
    a
}

/// Columns orthonormalized by modified Gram-Schmidt applied twice.
pub fn gram_schmidt_columns(a: &Mat) -> Mat {
    let m = a.len();
    let k = a[0].len();
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let d: f64 = (0..m).map(|t| cols[i][t] * cols[j][t]).sum();
                for t in 0..m {
                    cols[j][t] -= d * cols[i][t];
                }
            }
        }
        let n: f64 = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        for t in 0..m {
            cols[j][t] /= n;
        }
    }
    (0..m)
        .map(|i| (0..k).map(|j| cols[j][i]).collect())
        .collect()
}

pub fn gaussian_rows(m: usize, k: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| (0..k).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect()
}

/// Rows of an orthonormalized Gaussian `m x r` matrix: an isotropic set.
pub fn random_isotropic(m: usize, r: usize, seed: u64) -> Mat {
    gram_schmidt_columns(&gaussian_rows(m, r, seed))
}

/// Numerical rank from the eigenvalues of `A^T A`.
pub fn gram_rank(a: &Mat, rel_tol: f64) -> usize {
    let m = a.len();
    let k = a[0].len();
    let g: Mat = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..m).map(|t| a[t][i] * a[t][j]).sum())
                .collect()
        })
        .collect();
    let ev = jacobi_eigenvalues(&g);
    let top = ev.iter().copied().fold(0.0, f64::max);
    ev.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Relative least-squares residual of `y` against the column span of `q`
/// (which must have orthonormal columns).
pub fn span_residual(q: &DMatrix<f64>, y: &[f64]) -> f64 {
    let yv = nalgebra::DVector::from_row_slice(y);
    let proj = q * (q.transpose() * &yv);
    (yv.clone() - proj).norm() / yv.norm().max(1e-300)
}

pub fn lp(x: &[f64], p: u32) -> f64 {
    x.iter()
        .map(|v| v.abs().powi(p as i32))
        .sum::<f64>()
        .powf(1.0 / p as f64)
}

/// `|Tx|_p / |x|_p` evaluated straight from sigma and the weights.
pub fn distortion_ratio(x: &[f64], sigma: &[usize], weights: &[f64], p: u32) -> f64 {
    let num: f64 = sigma
        .iter()
        .zip(weights)
        .map(|(&i, &w)| w * x[i].powi(p as i32))
        .sum();
    num.powf(1.0 / p as f64) / lp(x, p)
}

/// Extremes of the distortion ratio over `points` evenly spaced angles on the
/// unit circle of a two-dimensional subspace.
pub fn grid_extremes(
    basis: &DMatrix<f64>,
    sigma: &[usize],
    weights: &[f64],
    p: u32,
    points: usize,
) -> (f64, f64) {
    assert_eq!(basis.ncols(), 2);
    let m = basis.nrows();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..points {
        let phi = std::f64::consts::TAU * t as f64 / points as f64;
        let (c, s) = (phi.cos(), phi.sin());
        let x: Vec<f64> = (0..m)
            .map(|i| c * basis[(i, 0)] + s * basis[(i, 1)])
            .collect();
        let ratio = distortion_ratio(&x, sigma, weights, p);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    (lo, hi)
}

/// Number of length-`k` nonnegative integer vectors summing to `q`, by the
/// recurrence `N(k, q) = sum_e N(k - 1, q - e)`.
pub fn count_compositions(k: usize, q: usize) -> u128 {
    let mut row = vec![1u128; q + 1]; // k = 1
    for _ in 1..k {
        let mut next = vec![0u128; q + 1];
        let mut acc = 0u128;
        for s in 0..=q {
            acc += row[s];
            next[s] = acc;
        }
        row = next;
    }
    row[q]
}
