//! Seeded test subspaces.

use std::fmt;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lift::Subspace;

/// Identity of the random source, recorded in run reports.
pub const GENERATOR: &str =
    "ChaCha8Rng::seed_from_u64 (rand_chacha 0.9) + StandardNormal (rand_distr 0.5)";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    /// i.i.d. standard normal basis entries
    Gaussian,
    /// Gaussian basis with l2-orthonormalized columns
    L2k,
    /// First k standard basis vectors
    Coordinate,
}

impl fmt::Display for SubspaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubspaceKind::Gaussian => "gaussian",
            SubspaceKind::L2k => "l2k",
            SubspaceKind::Coordinate => "coordinate",
        })
    }
}

/// Gaussian entries are drawn row by row (coordinate `i`, then basis vector `j`).
pub fn gen_subspace(kind: SubspaceKind, k: usize, m: usize, seed: u64) -> Result<Subspace> {
    if k == 0 || k > m {
        return Err(Error::Validation(format!(
            "need 1 <= k <= m (got k = {k}, m = {m})"
        )));
    }
    let basis = match kind {
        SubspaceKind::Coordinate => DMatrix::from_fn(m, k, |i, j| if i == j { 1.0 } else { 0.0 }),
        SubspaceKind::Gaussian => gaussian(k, m, seed),
        SubspaceKind::L2k => gaussian(k, m, seed).qr().q(),
    };
    Subspace::new(basis)
}

fn gaussian(k: usize, m: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = seeded_rng(seed);
    let entries: Vec<f64> = (0..m * k)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DMatrix::from_row_slice(m, k, &entries)
}
