//! Coordinate-sampling embeddings of subspaces of `l_p^m` for even `p`.
//!
//! For a `k`-dimensional subspace `X` of `l_p^m`, the crate finds a small set
//! of coordinates `sigma` and positive weights `s_i` such that
//!
//! ```text
//! |x|_p <= (sum_{i in sigma} s_i x(i)^p)^{1/p} <= (1 + eps) |x|_p   for all x in X
//! ```
//!
//! with `|sigma| = O(eps^-2 (10k/p)^{p/2})`, and certifies the achieved
//! distortion exactly by an eigenvalue computation.
//!
//! The pipeline:
//!
//! 1. [`lift`]: span the degree-`p/2` monomials of a basis of `X` under
//!    coordinatewise multiplication and orthonormalize.
//! 2. [`bss`]: the rows of that orthonormal basis are an isotropic set; a
//!    deterministic barrier-potential sparsifier selects weighted rows.
//! 3. [`embedder`]: the selected rows become the coordinate restriction, and
//!    the extreme eigenvalues of the sampled lifted Gram matrix certify it.
//!
//! ```
//! use lp_embed::{embed, gen_subspace, SubspaceKind};
//!
//! let sub = gen_subspace(SubspaceKind::Gaussian, 2, 200, 7).unwrap();
//! let emb = embed(&sub, 4, 0.5).unwrap();
//! assert!(emb.cert_lower >= 1.0 - 1e-9);
//! assert!(emb.cert_upper <= 1.5);
//! assert!(emb.n() <= 75);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bss;
pub mod cli;
pub mod embedder;
pub mod error;
pub mod generate;
pub mod io;
pub mod lift;
pub mod linalg;

pub use bss::{sparsify, IsotropicSet, SparseWeights, Tolerances};
pub use embedder::{
    apply_embedding, capacity, certify, embed, embed_detailed, empirical_distortion, sample_l2,
    Certificate, DistortionReport, Embedding,
};
pub use error::{Error, Result};
pub use generate::{gen_subspace, SubspaceKind};
pub use lift::{build_lift, dimension_bounds, enumerate_monomials, LiftedSpace, Subspace};
