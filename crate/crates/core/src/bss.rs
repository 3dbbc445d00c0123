//! Deterministic barrier-potential sparsification of isotropic vector sets.
//!
//! Given vectors `v_1..v_M` in `R^r` with `sum v_i v_i^T = I`, [`sparsify`]
//! picks at most `ceil(r / theta^2)` of them with nonnegative weights such
//! that, after rescaling, `I <= sum s_i v_i v_i^T <= ((1+theta)/(1-theta))^2 I`.
//!
//! The loop keeps two spectral barriers `l < lambda(A) < u` and two potentials
//!
//! ```text
//! upper  Phi^u(A) = trace((uI - A)^-1)
//! lower  Phi_l(A) = trace((A - lI)^-1)
//! ```
//!
//! Each step adds one rank-one term `t v v^T` and moves both barriers by fixed
//! amounts. The candidate and weight are chosen so neither potential grows.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{ceil_tol, rank_one_update, sym_eigen, weighted_gram};

/// Numeric policy for the sparsifier. Defaults match the documented contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius tolerance on `sum v v^T = I`.
    pub isotropy: f64,
    /// Allowed growth of either potential across a single step.
    pub potential: f64,
    /// Allowed deviation of the post-rescale floor from 1.
    pub spectral_floor: f64,
    /// A candidate is admissible when `U <= L + admissibility`.
    pub admissibility: f64,
    /// `|U - L|` below which the weight is taken as `1 / U`.
    pub reciprocal_tie: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isotropy: 1e-8,
            potential: 1e-8,
            spectral_floor: 1e-9,
            admissibility: 1e-10,
            reciprocal_tie: 1e-12,
        }
    }
}

/// A finite list of vectors whose outer products sum to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicSet {
    // r x M, column i is v_i
    vt: DMatrix<f64>,
}

impl IsotropicSet {
    /// Builds the set from an `M x r` matrix whose rows are the vectors.
    pub fn from_rows(rows: &DMatrix<f64>) -> Result<Self> {
        Self::from_rows_with_tolerance(rows, Tolerances::default().isotropy)
    }

    pub fn from_rows_with_tolerance(rows: &DMatrix<f64>, tol: f64) -> Result<Self> {
        let (m, r) = rows.shape();
        if r == 0 {
            return Err(Error::Validation("isotropic set has dimension 0".into()));
        }
        if m < r {
            return Err(Error::Validation(format!(
                "isotropic set needs at least r = {r} vectors, got {m}"
            )));
        }
        if rows.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(
                "isotropic set has non-finite entries".into(),
            ));
        }
        let gram = rows.transpose() * rows;
        let defect = (gram - DMatrix::<f64>::identity(r, r)).norm() / (r as f64).sqrt();
        if defect > tol {
            return Err(Error::Validation(format!(
                "vectors are not isotropic: relative Frobenius defect {defect:e} exceeds {tol:e}"
            )));
        }
        Ok(Self {
            vt: rows.transpose(),
        })
    }

    /// Ambient dimension `r`.
    pub fn dim(&self) -> usize {
        self.vt.nrows()
    }

    /// Number of vectors `M`.
    pub fn len(&self) -> usize {
        self.vt.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vt.ncols() == 0
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vt.column(i).into_owned()
    }

    /// The vectors as columns of an `r x M` matrix.
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.vt
    }
}

/// Step sizes and initial potentials for accuracy `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsifierParams {
    pub theta: f64,
    /// `1 / theta^2`
    pub d: f64,
    pub delta_lower: f64,
    pub delta_upper: f64,
    pub eps_lower: f64,
    pub eps_upper: f64,
    /// Number of steps `ceil(d * r)`.
    pub steps: usize,
}

impl SparsifierParams {
    pub fn new(theta: f64, r: usize) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Validation(format!(
                "theta must lie in (0, 1), got {theta}"
            )));
        }
        if r == 0 {
            return Err(Error::Validation("dimension r must be positive".into()));
        }
        let d = 1.0 / (theta * theta);
        Ok(Self {
            theta,
            d,
            delta_lower: 1.0,
            delta_upper: (1.0 + theta) / (1.0 - theta),
            eps_lower: theta,
            eps_upper: theta * (1.0 - theta) / (1.0 + theta),
            steps: ceil_tol(r as f64 * d),
        })
    }

    /// Upper bound on the post-rescale condition ratio, `((1+theta)/(1-theta))^2`.
    pub fn kappa_bound(&self) -> f64 {
        self.delta_upper * self.delta_upper
    }
}

/// Trace of `(uI - A)^-1` for symmetric `a`.
pub fn upper_potential(a: &DMatrix<f64>, u: f64) -> Result<f64> {
    let (values, _) = sym_eigen(a);
    upper_potential_of(values.as_slice(), u)
}

/// Trace of `(A - lI)^-1` for symmetric `a`.
pub fn lower_potential(a: &DMatrix<f64>, l: f64) -> Result<f64> {
    let (values, _) = sym_eigen(a);
    lower_potential_of(values.as_slice(), l)
}

fn upper_potential_of(spectrum: &[f64], u: f64) -> Result<f64> {
    let top = spectrum.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(u > top) {
        return Err(Error::SingularBarrier(format!(
            "upper barrier {u} does not exceed lambda_max {top}"
        )));
    }
    Ok(spectrum.iter().map(|&x| 1.0 / (u - x)).sum())
}

fn lower_potential_of(spectrum: &[f64], l: f64) -> Result<f64> {
    let bottom = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    if !(l < bottom) {
        return Err(Error::SingularBarrier(format!(
            "lower barrier {l} is not below lambda_min {bottom}"
        )));
    }
    Ok(spectrum.iter().map(|&x| 1.0 / (x - l)).sum())
}

/// Running state of the barrier loop.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierState {
    a: DMatrix<f64>,
    upper: f64,
    lower: f64,
    weights: Vec<f64>,
    step: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl BarrierState {
    /// `A = 0`, `u = r / eps_upper`, `l = -r / eps_lower`, all weights zero.
    pub fn initial(iso: &IsotropicSet, params: &SparsifierParams) -> Self {
        let r = iso.dim() as f64;
        Self::new(
            DMatrix::zeros(iso.dim(), iso.dim()),
            r / params.eps_upper,
            -r / params.eps_lower,
            vec![0.0; iso.len()],
            0,
        )
    }

    /// A state from explicit parts; eigendata is computed here.
    pub fn new(a: DMatrix<f64>, upper: f64, lower: f64, weights: Vec<f64>, step: usize) -> Self {
        let (eigenvalues, eigenvectors) = sym_eigen(&a);
        Self {
            a,
            upper,
            lower,
            weights,
            step,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Eigenvalues of `A`, ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn upper_potential(&self) -> Result<f64> {
        upper_potential_of(self.eigenvalues.as_slice(), self.upper)
    }

    pub fn lower_potential(&self) -> Result<f64> {
        lower_potential_of(self.eigenvalues.as_slice(), self.lower)
    }
}

/// Per-eigenvalue coefficients of the admissibility functionals for one state.
struct BoundKernel {
    up_sq: Vec<f64>,
    up_lin: Vec<f64>,
    lo_sq: Vec<f64>,
    lo_lin: Vec<f64>,
    up_gap: f64,
    lo_gap: f64,
}

impl BoundKernel {
    fn new(state: &BarrierState, params: &SparsifierParams) -> Result<Self> {
        let spectrum = state.eigenvalues.as_slice();
        let u_next = state.upper + params.delta_upper;
        let l_next = state.lower + params.delta_lower;
        let phi_u = upper_potential_of(spectrum, state.upper)?;
        let phi_u_next = upper_potential_of(spectrum, u_next)?;
        let phi_l = lower_potential_of(spectrum, state.lower)?;
        let phi_l_next = lower_potential_of(spectrum, l_next)?;
        let up_lin: Vec<f64> = spectrum.iter().map(|&x| 1.0 / (u_next - x)).collect();
        let lo_lin: Vec<f64> = spectrum.iter().map(|&x| 1.0 / (x - l_next)).collect();
        Ok(Self {
            up_sq: up_lin.iter().map(|c| c * c).collect(),
            lo_sq: lo_lin.iter().map(|c| c * c).collect(),
            up_lin,
            lo_lin,
            up_gap: phi_u - phi_u_next,
            lo_gap: phi_l_next - phi_l,
        })
    }

    /// `(U, L)` for a vector already expressed in the eigenbasis of `A`.
    fn bounds(&self, w: &[f64]) -> (f64, f64) {
        let (mut us, mut ul, mut ls, mut ll) = (0.0, 0.0, 0.0, 0.0);
        for (j, &x) in w.iter().enumerate() {
            let x2 = x * x;
            us += x2 * self.up_sq[j];
            ul += x2 * self.up_lin[j];
            ls += x2 * self.lo_sq[j];
            ll += x2 * self.lo_lin[j];
        }
        (us / self.up_gap + ul, ls / self.lo_gap - ll)
    }
}

/// The upper and lower admissibility values `(U(v), L(v))`.
///
/// Any weight `t` with `U <= 1/t <= L` keeps both potentials from growing when
/// `t v v^T` is added and the barriers move to `u + delta_upper`, `l + delta_lower`.
pub fn step_bounds(
    state: &BarrierState,
    params: &SparsifierParams,
    v: &DVector<f64>,
) -> Result<(f64, f64)> {
    if v.len() != state.a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: state.a.nrows(),
            got: v.len(),
        });
    }
    let kernel = BoundKernel::new(state, params)?;
    let w = state.eigenvectors.transpose() * v;
    Ok(kernel.bounds(w.as_slice()))
}

/// Outcome of one step, kept for auditing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub index: usize,
    pub weight: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    /// Barriers after the step.
    pub upper: f64,
    pub lower: f64,
    /// Potentials before and after the step.
    pub upper_potential_before: f64,
    pub upper_potential_after: f64,
    pub lower_potential_before: f64,
    pub lower_potential_after: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

#[derive(Clone, Copy)]
struct Candidate {
    gap: f64,
    index: usize,
    upper_bound: f64,
    lower_bound: f64,
}

impl Candidate {
    // larger gap wins; equal gaps go to the smaller index
    fn better(self, other: Self) -> Self {
        match self.gap.total_cmp(&other.gap) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.index <= other.index {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// One step of the barrier loop.
pub fn select_and_add(
    state: &BarrierState,
    iso: &IsotropicSet,
    params: &SparsifierParams,
) -> Result<BarrierState> {
    select_and_add_with(state, iso, params, &Tolerances::default()).map(|(s, _)| s)
}

/// [`select_and_add`] with an explicit numeric policy; also returns the step record.
pub fn select_and_add_with(
    state: &BarrierState,
    iso: &IsotropicSet,
    params: &SparsifierParams,
    tol: &Tolerances,
) -> Result<(BarrierState, StepRecord)> {
    if iso.dim() != state.a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: state.a.nrows(),
            got: iso.dim(),
        });
    }
    if state.weights.len() != iso.len() {
        return Err(Error::DimensionMismatch {
            expected: state.weights.len(),
            got: iso.len(),
        });
    }
    let phi_u = state.upper_potential()?;
    let phi_l = state.lower_potential()?;
    let kernel = BoundKernel::new(state, params)?;
    let rotated = state.eigenvectors.transpose() * &iso.vt;

    let best = (0..iso.len())
        .into_par_iter()
        .filter_map(|i| {
            let (upper_bound, lower_bound) = kernel.bounds(rotated.column(i).as_slice());
            let admissible = upper_bound > 0.0
                && lower_bound > 0.0
                && upper_bound <= lower_bound + tol.admissibility;
            admissible.then_some(Candidate {
                gap: lower_bound - upper_bound,
                index: i,
                upper_bound,
                lower_bound,
            })
        })
        .reduce_with(Candidate::better);

    let Some(best) = best else {
        let best_gap = (0..iso.len())
            .map(|i| {
                let (u, l) = kernel.bounds(rotated.column(i).as_slice());
                l - u
            })
            .fold(f64::NEG_INFINITY, f64::max);
        return Err(Error::Infeasible {
            step: state.step,
            best_gap,
        });
    };

    let weight = if (best.upper_bound - best.lower_bound).abs() <= tol.reciprocal_tie {
        1.0 / best.upper_bound
    } else {
        2.0 / (best.upper_bound + best.lower_bound)
    };

    let mut a = state.a.clone();
    rank_one_update(&mut a, weight, iso.vt.column(best.index).as_slice());
    let mut weights = state.weights.clone();
    weights[best.index] += weight;
    let next = BarrierState::new(
        a,
        state.upper + params.delta_upper,
        state.lower + params.delta_lower,
        weights,
        state.step + 1,
    );

    let phi_u_next = next.upper_potential()?;
    let phi_l_next = next.lower_potential()?;
    if phi_u_next > phi_u + tol.potential {
        return Err(Error::PotentialIncrease {
            step: state.step,
            which: "upper",
            before: phi_u,
            after: phi_u_next,
        });
    }
    if phi_l_next > phi_l + tol.potential {
        return Err(Error::PotentialIncrease {
            step: state.step,
            which: "lower",
            before: phi_l,
            after: phi_l_next,
        });
    }

    let record = StepRecord {
        step: state.step,
        index: best.index,
        weight,
        upper_bound: best.upper_bound,
        lower_bound: best.lower_bound,
        upper: next.upper,
        lower: next.lower,
        upper_potential_before: phi_u,
        upper_potential_after: phi_u_next,
        lower_potential_before: phi_l,
        lower_potential_after: phi_l_next,
        lambda_min: next.eigenvalues[0],
        lambda_max: next.eigenvalues[next.eigenvalues.len() - 1],
    };
    Ok((next, record))
}

/// Selected vectors with weights normalized so the weighted sum has floor 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseWeights {
    /// Selected indices (0-based), ascending.
    pub support: Vec<usize>,
    /// Positive weights aligned with `support`.
    pub weights: Vec<f64>,
    /// `lambda_min` of the raw weighted sum; all weights were divided by it.
    pub rescale: f64,
    /// `lambda_max / lambda_min` of the weighted sum.
    pub kappa: f64,
    /// Extreme eigenvalues of the rescaled weighted sum.
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub theta: f64,
    pub steps: usize,
}

impl SparseWeights {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Weights scattered back onto all `m` indices.
    pub fn dense(&self, m: usize) -> Vec<f64> {
        let mut out = vec![0.0; m];
        for (&i, &w) in self.support.iter().zip(&self.weights) {
            out[i] = w;
        }
        out
    }
}

/// Divides the accumulated weights by `lambda_min` of `sum s_i v_i v_i^T`.
pub fn rescale_to_unit_floor(state: &BarrierState, iso: &IsotropicSet) -> Result<SparseWeights> {
    rescale_with(state, iso, &Tolerances::default(), f64::NAN)
}

fn rescale_with(
    state: &BarrierState,
    iso: &IsotropicSet,
    tol: &Tolerances,
    theta: f64,
) -> Result<SparseWeights> {
    if state.weights.len() != iso.len() {
        return Err(Error::DimensionMismatch {
            expected: iso.len(),
            got: state.weights.len(),
        });
    }
    let gram = weighted_gram(&iso.vt, &state.weights);
    let (values, _) = sym_eigen(&gram);
    let lo = values[0];
    let hi = values[values.len() - 1];
    let scale = hi.abs().max(1.0);
    if !(lo > scale * f64::EPSILON * iso.dim() as f64) {
        return Err(Error::RankDeficient { lambda_min: lo });
    }

    let (support, weights): (Vec<usize>, Vec<f64>) = state
        .weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, &w)| (i, w / lo))
        .unzip();

    let mut dense = vec![0.0; iso.len()];
    for (&i, &w) in support.iter().zip(&weights) {
        dense[i] = w;
    }
    let (post, _) = sym_eigen(&weighted_gram(&iso.vt, &dense));
    let post_min = post[0];
    let post_max = post[post.len() - 1];
    if (post_min - 1.0).abs() > tol.spectral_floor {
        return Err(Error::RankDeficient {
            lambda_min: post_min,
        });
    }

    Ok(SparseWeights {
        support,
        weights,
        rescale: lo,
        kappa: hi / lo,
        lambda_min: post_min,
        lambda_max: post_max,
        theta,
        steps: state.step,
    })
}

/// Runs the full barrier loop for accuracy `theta` and rescales the result.
///
/// The returned weights satisfy `|x|^2 <= x^T (sum s_i v_i v_i^T) x <=
/// ((1+theta)/(1-theta))^2 |x|^2` and there are at most `ceil(r / theta^2)` of them.
pub fn sparsify(iso: &IsotropicSet, theta: f64) -> Result<SparseWeights> {
    sparsify_with(iso, theta, &Tolerances::default())
}

pub fn sparsify_with(iso: &IsotropicSet, theta: f64, tol: &Tolerances) -> Result<SparseWeights> {
    run(iso, theta, tol, |_| {})
}

/// [`sparsify_with`] that also returns every step record.
pub fn sparsify_traced(
    iso: &IsotropicSet,
    theta: f64,
    tol: &Tolerances,
) -> Result<(SparseWeights, Vec<StepRecord>)> {
    let mut trace = Vec::new();
    let out = run(iso, theta, tol, |rec| trace.push(*rec))?;
    Ok((out, trace))
}

fn run(
    iso: &IsotropicSet,
    theta: f64,
    tol: &Tolerances,
    mut observe: impl FnMut(&StepRecord),
) -> Result<SparseWeights> {
    let params = SparsifierParams::new(theta, iso.dim())?;
    let mut state = BarrierState::initial(iso, &params);
    while state.step < params.steps {
        let (next, record) = select_and_add_with(&state, iso, &params, tol)?;
        observe(&record);
        state = next;
    }
    rescale_with(&state, iso, tol, theta)
}
