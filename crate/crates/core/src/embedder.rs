//! End-to-end construction of the weighted coordinate restriction
//! `T x = (s_i^{1/p} x(i))_{i in sigma}` and its distortion certificate.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::bss::{sparsify, IsotropicSet, SparseWeights};
use crate::error::{Error, Result};
use crate::generate::seeded_rng;
use crate::lift::{binomial, build_lift, orthonormal_column_basis, LiftedSpace, Subspace};
use crate::linalg::{ceil_tol, extreme_eigenvalues, weighted_gram};

/// Accuracy used for the lifted `l_2` problem: `min(eps * p / 4, 1/2)`.
pub fn inner_accuracy(eps: f64, p: u32) -> f64 {
    (eps * p as f64 / 4.0).min(0.5)
}

/// Sparsifier accuracy giving `(1+theta)/(1-theta) = 1 + accuracy`.
pub fn theta_for(accuracy: f64) -> f64 {
    accuracy / (2.0 + accuracy)
}

/// Upper bound on the number of selected coordinates for a lifted rank `r`.
pub fn size_bound(eps_inner: f64, r: usize) -> usize {
    let f = (2.0 + eps_inner) / eps_inner;
    ceil_tol(f * f * r as f64)
}

fn validate(p: u32, eps: f64) -> Result<()> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::UnsupportedP(p));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Validation(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    Ok(())
}

/// A weighted coordinate restriction with its certified distortion bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub p: u32,
    pub eps: f64,
    pub eps_inner: f64,
    pub theta: f64,
    /// Selected coordinates (0-based), ascending.
    pub sigma: Vec<usize>,
    pub weights: Vec<f64>,
    pub cert_lower: f64,
    pub cert_upper: f64,
    /// Dimension of the embedded subspace.
    pub k: usize,
    /// Number of input coordinates.
    pub m: usize,
    /// Monomial count of the lift.
    pub monomial_count: usize,
    /// Numerical rank of the lift.
    pub rank: usize,
}

impl Embedding {
    /// Target dimension `n`.
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// `cert_upper <= 1 + eps`.
    pub fn passes(&self) -> bool {
        self.cert_upper <= 1.0 + self.eps
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        apply_embedding(self, x)
    }
}

/// Embedding together with the intermediate objects that produced it.
#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub embedding: Embedding,
    pub lifted: LiftedSpace,
    pub sparse: SparseWeights,
    pub certificate: Certificate,
}

/// Builds and certifies a `(1+eps)` embedding of `sub` into `l_p^n`.
pub fn embed(sub: &Subspace, p: u32, eps: f64) -> Result<Embedding> {
    embed_detailed(sub, p, eps).map(|o| o.embedding)
}

pub fn embed_detailed(sub: &Subspace, p: u32, eps: f64) -> Result<EmbedOutcome> {
    validate(p, eps)?;
    let lifted = build_lift(sub, p)?;
    // rows of an orthonormal basis are isotropic: sum_i o_i o_i^T = I_r
    let iso = IsotropicSet::from_rows(lifted.ortho())?;
    let eps_inner = inner_accuracy(eps, p);
    let theta = theta_for(eps_inner);
    let sparse = sparsify(&iso, theta)?;

    let mut embedding = Embedding {
        p,
        eps,
        eps_inner,
        theta,
        sigma: sparse.support.clone(),
        weights: sparse.weights.clone(),
        cert_lower: f64::NAN,
        cert_upper: f64::NAN,
        k: sub.dim(),
        m: sub.ambient_dim(),
        monomial_count: lifted.monomial_count(),
        rank: lifted.rank(),
    };
    let certificate = certify(&embedding, &lifted)?;
    embedding.cert_lower = certificate.cert_lower;
    embedding.cert_upper = certificate.cert_upper;
    Ok(EmbedOutcome {
        embedding,
        lifted,
        sparse,
        certificate,
    })
}

/// Sampling weights for `l_2`: `|x|_2 <= (sum s_i x(i)^2)^{1/2} <= (1+accuracy)|x|_2`
/// on the column span of `basis`.
pub fn sample_l2(basis: &DMatrix<f64>, accuracy: f64) -> Result<SparseWeights> {
    if !(accuracy > 0.0 && accuracy < 1.0) {
        return Err(Error::Validation(format!(
            "accuracy must lie in (0, 1), got {accuracy}"
        )));
    }
    let (ortho, _) = orthonormal_column_basis(basis)?;
    let iso = IsotropicSet::from_rows(&ortho)?;
    sparsify(&iso, theta_for(accuracy))
}

/// Output coordinate `j` is `s_{sigma_j}^{1/p} x(sigma_j)`.
pub fn apply_embedding(emb: &Embedding, x: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != emb.m {
        return Err(Error::DimensionMismatch {
            expected: emb.m,
            got: x.len(),
        });
    }
    let inv_p = 1.0 / emb.p as f64;
    Ok(DVector::from_iterator(
        emb.sigma.len(),
        emb.sigma
            .iter()
            .zip(&emb.weights)
            .map(|(&i, &w)| w.powf(inv_p) * x[i]),
    ))
}

/// Extreme eigenvalues of the sampled lifted Gram matrix and the distortion
/// bounds they imply for every `x` in the subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cert_lower: f64,
    pub cert_upper: f64,
}

/// For `y = x^{∘q}`, `sum s_i y(i)^2 = |Tx|_p^p` and `|y|_2^2 = |x|_p^p`,
/// so the Rayleigh quotient range `[lambda_min, lambda_max]` of
/// `sum_{i in sigma} s_i o_i o_i^T` bounds `(|Tx|_p / |x|_p)^p`.
pub fn certify(emb: &Embedding, lifted: &LiftedSpace) -> Result<Certificate> {
    if emb.p != lifted.p()
        || emb.m != lifted.ambient_dim()
        || emb.k != lifted.base_dim()
        || emb.rank != lifted.rank()
        || emb.monomial_count != lifted.monomial_count()
    {
        return Err(Error::Validation(
            "embedding was not produced from this lifted space".into(),
        ));
    }
    if emb.sigma.len() != emb.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: emb.sigma.len(),
            got: emb.weights.len(),
        });
    }
    if let Some(&bad) = emb.sigma.iter().find(|&&i| i >= emb.m) {
        return Err(Error::Validation(format!(
            "coordinate {bad} out of range for m = {}",
            emb.m
        )));
    }
    let mut dense = vec![0.0; emb.m];
    for (&i, &w) in emb.sigma.iter().zip(&emb.weights) {
        dense[i] += w;
    }
    let gram = weighted_gram(&lifted.ortho().transpose(), &dense);
    let (lambda_min, lambda_max) = extreme_eigenvalues(&gram);
    let inv_p = 1.0 / emb.p as f64;
    Ok(Certificate {
        lambda_min,
        lambda_max,
        cert_lower: lambda_min.max(0.0).powf(inv_p),
        cert_upper: lambda_max.powf(inv_p),
    })
}

/// `(sum |x_i|^p)^{1/p}` for even `p`, computed with a max-abs prescale.
pub fn lp_norm(x: &[f64], p: u32) -> f64 {
    let scale = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|&v| (v / scale).powi(p as i32)).sum();
    scale * s.powf(1.0 / p as f64)
}

/// Observed extremes of `|Tx|_p / |x|_p` over random points of the subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionReport {
    pub trials: usize,
    pub seed: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// All ratios within `[cert_lower - 1e-9, cert_upper + 1e-9]`.
    pub within_cert: bool,
}

/// Samples `x = basis * c` with standard normal `c` and records ratio extremes.
pub fn empirical_distortion(
    emb: &Embedding,
    sub: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<DistortionReport> {
    if trials == 0 {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    if sub.ambient_dim() != emb.m || sub.dim() != emb.k {
        return Err(Error::Validation(
            "subspace does not match the embedding".into(),
        ));
    }
    let mut rng = seeded_rng(seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut done = 0;
    while done < trials {
        let c = DVector::from_fn(sub.dim(), |_, _| StandardNormal.sample(&mut rng));
        let x = sub.point(&c)?;
        let denom = lp_norm(x.as_slice(), emb.p);
        if denom == 0.0 {
            continue;
        }
        let ratio = lp_norm(apply_embedding(emb, &x)?.as_slice(), emb.p) / denom;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        done += 1;
    }
    Ok(DistortionReport {
        trials,
        seed,
        min_ratio: lo,
        max_ratio: hi,
        within_cert: lo >= emb.cert_lower - 1e-9 && hi <= emb.cert_upper + 1e-9,
    })
}

/// Largest `k` whose worst-case coordinate count
/// `ceil((2+eps'')^2 / eps''^2 * C(k + p/2 - 1, p/2))` fits in `n`.
///
/// Returns 0 when even `k = 1` does not fit, or when `p` or `eps` is invalid.
pub fn capacity(n: usize, p: u32, eps: f64) -> usize {
    if validate(p, eps).is_err() {
        return 0;
    }
    let q = (p / 2) as u64;
    let eps_inner = inner_accuracy(eps, p);
    let f = ((2.0 + eps_inner) / eps_inner).powi(2);
    let mut k = 0usize;
    loop {
        let next = k as u64 + 1;
        let dim = binomial(next + q - 1, q) as f64;
        if ceil_tol(f * dim) > n {
            return k;
        }
        k += 1;
    }
}
