//! The lifted space spanned by degree-`q` monomials of a subspace basis under
//! coordinatewise multiplication, and an orthonormal basis for it.
//!
//! For `x` in the subspace, `x^{∘q}` (every coordinate raised to the power `q`)
//! lies in this span, and `|x^{∘q}|_2^2 = |x|_{2q}^{2q}`. Spectral control of
//! the lifted space in `l_2` is what turns into `l_p` control with `p = 2q`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of monomial columns.
pub const DEFAULT_MONOMIAL_CAP: usize = 1_000_000;

/// A `k`-dimensional subspace of `R^m` given by an `m x k` basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Checks finiteness, `m >= k >= 1` and full column rank.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (m, k) = basis.shape();
        if k == 0 {
            return Err(Error::Validation("subspace basis has no columns".into()));
        }
        if m < k {
            return Err(Error::Validation(format!(
                "subspace basis has more columns ({k}) than coordinates ({m})"
            )));
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(
                "subspace basis has non-finite entries".into(),
            ));
        }
        let rank = numerical_rank(&basis.clone().svd(false, false).singular_values, m.max(k));
        if rank < k {
            return Err(Error::Validation(format!(
                "subspace basis columns are dependent (numerical rank {rank} < {k})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Number of coordinates `m`.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension `k`.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// The point `basis * coeffs`.
    pub fn point(&self, coeffs: &DVector<f64>) -> Result<DVector<f64>> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        Ok(&self.basis * coeffs)
    }

    /// Same subspace with every basis vector multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(&self.basis * alpha)
    }
}

/// Exponent vector of one monomial `u_1^{e_1} ... u_k^{e_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex {
    exponents: Vec<u32>,
}

impl MonomialIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// `C(n, k)` in 128-bit arithmetic, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All exponent vectors of length `k` summing to `q`, first exponent descending.
pub fn enumerate_monomials(k: usize, q: usize) -> Result<Vec<MonomialIndex>> {
    enumerate_monomials_capped(k, q, DEFAULT_MONOMIAL_CAP)
}

pub fn enumerate_monomials_capped(k: usize, q: usize, cap: usize) -> Result<Vec<MonomialIndex>> {
    if k == 0 || q == 0 {
        return Err(Error::Validation(format!(
            "need k >= 1 and q >= 1 (got k = {k}, q = {q})"
        )));
    }
    let count = binomial((k + q - 1) as u64, q as u64);
    if count > cap as u128 {
        return Err(Error::Capacity { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; k];
    fill(&mut current, 0, q as u32, &mut out);
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MonomialIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MonomialIndex::new(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Coordinatewise product `prod_j basis[:, j]^{e_j}`.
pub fn monomial_vector(basis: &DMatrix<f64>, idx: &MonomialIndex) -> Result<DVector<f64>> {
    if idx.exponents.len() != basis.ncols() {
        return Err(Error::DimensionMismatch {
            expected: basis.ncols(),
            got: idx.exponents.len(),
        });
    }
    Ok(DVector::from_fn(basis.nrows(), |i, _| {
        idx.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(1.0, |acc, (j, &e)| acc * basis[(i, j)].powi(e as i32))
    }))
}

/// The span of all degree-`q` monomial columns together with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSpace {
    p: u32,
    monomials: Vec<MonomialIndex>,
    columns: DMatrix<f64>,
    ortho: DMatrix<f64>,
    rank: usize,
}

impl LiftedSpace {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Monomial degree `q = p / 2`.
    pub fn degree(&self) -> u32 {
        self.p / 2
    }

    pub fn monomials(&self) -> &[MonomialIndex] {
        &self.monomials
    }

    /// The `m x D` matrix of monomial columns.
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    /// `m x r` matrix with orthonormal columns spanning the monomial columns.
    pub fn ortho(&self) -> &DMatrix<f64> {
        &self.ortho
    }

    /// Monomial count `D`.
    pub fn monomial_count(&self) -> usize {
        self.monomials.len()
    }

    /// Numerical rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Number of basis vectors `k` the lift was built from.
    pub fn base_dim(&self) -> usize {
        self.monomials.first().map_or(0, |m| m.exponents.len())
    }
}

fn check_even(p: u32) -> Result<usize> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::UnsupportedP(p));
    }
    Ok((p / 2) as usize)
}

pub fn build_lift(sub: &Subspace, p: u32) -> Result<LiftedSpace> {
    build_lift_capped(sub, p, DEFAULT_MONOMIAL_CAP)
}

pub fn build_lift_capped(sub: &Subspace, p: u32, cap: usize) -> Result<LiftedSpace> {
    let q = check_even(p)?;
    let monomials = enumerate_monomials_capped(sub.dim(), q, cap)?;
    let m = sub.ambient_dim();
    let cols: Vec<DVector<f64>> = monomials
        .par_iter()
        .map(|idx| monomial_vector(sub.basis(), idx))
        .collect::<Result<_>>()?;
    let mut columns = DMatrix::zeros(m, monomials.len());
    for (j, c) in cols.iter().enumerate() {
        columns.set_column(j, c);
    }
    let (ortho, rank) = orthonormal_column_basis(&columns)?;
    Ok(LiftedSpace {
        p,
        monomials,
        columns,
        ortho,
        rank,
    })
}

fn numerical_rank(singular_values: &DVector<f64>, size: usize) -> usize {
    let top = singular_values.iter().copied().fold(0.0, f64::max);
    let tau = size as f64 * f64::EPSILON * top;
    singular_values.iter().filter(|&&s| s > tau).count()
}

/// Orthonormal basis of the column space with the default cutoff
/// `max(m, D) * eps * sigma_max`.
pub fn orthonormal_column_basis(mx: &DMatrix<f64>) -> Result<(DMatrix<f64>, usize)> {
    let (m, d) = mx.shape();
    let top = if m == 0 || d == 0 {
        0.0
    } else {
        mx.clone().svd(false, false).singular_values.max()
    };
    orthonormal_column_basis_with(mx, m.max(d) as f64 * f64::EPSILON * top)
}

/// Orthonormal basis of the column space, discarding singular directions at or
/// below `tau`.
///
/// The basis is formed as `M V_r S_r^{-1}` and then re-orthogonalized with two
/// Gram-Schmidt passes, so rows of `M` that are exactly zero stay exactly zero.
pub fn orthonormal_column_basis_with(mx: &DMatrix<f64>, tau: f64) -> Result<(DMatrix<f64>, usize)> {
    let (m, d) = mx.shape();
    if m == 0 || d == 0 || mx.iter().all(|&x| x == 0.0) {
        return Err(Error::RankZero);
    }
    if mx.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let svd = mx.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > tau)
        .collect();
    keep.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let r = keep.len();
    if r == 0 {
        return Err(Error::RankZero);
    }

    let mut q = DMatrix::zeros(m, r);
    for (c, &j) in keep.iter().enumerate() {
        let v = v_t.row(j).transpose();
        let col = (mx * v) / svd.singular_values[j];
        q.set_column(c, &col);
    }
    for _ in 0..2 {
        for j in 0..r {
            for i in 0..j {
                let proj = q.column(i).dot(&q.column(j));
                let qi = q.column(i).into_owned();
                q.column_mut(j).axpy(-proj, &qi, 1.0);
            }
            let norm = q.column(j).norm();
            if !(norm > 0.0) {
                return Err(Error::RankDeficient { lambda_min: norm });
            }
            q.column_mut(j).unscale_mut(norm);
        }
    }
    Ok((q, r))
}

/// Dimension counts for the lift of a `k`-dimensional space at exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionBounds {
    /// `C(k + p/2 - 1, p/2)`
    pub exact: u128,
    /// `(10k/p)^{p/2}`
    pub polynomial_bound: f64,
    /// `k^{p/2}`, the count of all ordered `p/2`-fold products.
    pub naive_bound: f64,
}

pub fn dimension_bounds(k: usize, p: u32) -> Result<DimensionBounds> {
    let q = check_even(p)?;
    if k == 0 {
        return Err(Error::Validation("k must be at least 1".into()));
    }
    let exact = binomial((k + q - 1) as u64, q as u64);
    let polynomial_bound = (10.0 * k as f64 / p as f64).powi(q as i32);
    let naive_bound = (k as f64).powi(q as i32);
    if p as usize <= k {
        debug_assert!(exact as f64 <= polynomial_bound);
    }
    Ok(DimensionBounds {
        exact,
        polynomial_bound,
        naive_bound,
    })
}
