//! Barrier-potential sparsification of a random isotropic set.
//!
//! cargo run -p lp-embed --example sparsify_isotropic

use lp_embed::bss::{sparsify_traced, IsotropicSet, SparsifierParams, Tolerances};
use lp_embed::generate::seeded_rng;
use lp_embed::lift::orthonormal_column_basis;
use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

fn main() -> lp_embed::Result<()> {
    let (m, r, theta) = (200, 6, 1.0 / 3.0);
    let mut rng = seeded_rng(3);
    let g = DMatrix::from_fn(m, r, |_, _| StandardNormal.sample(&mut rng));
    // rows of an orthonormal basis sum (as outer products) to the identity
    let (q, _) = orthonormal_column_basis(&g)?;
    let iso = IsotropicSet::from_rows(&q)?;

    let params = SparsifierParams::new(theta, r)?;
    let (out, trace) = sparsify_traced(&iso, theta, &Tolerances::default())?;

    println!(
        "M = {m}, r = {r}, theta = {theta:.4}, steps = {}",
        params.steps
    );
    for rec in trace.iter().step_by(trace.len() / 6) {
        println!(
            "step {:3}: pick {:3} (t = {:.4}), spectrum [{:8.3}, {:8.3}] in ({:8.3}, {:8.3}), potentials {:.4} / {:.4}",
            rec.step, rec.index, rec.weight, rec.lambda_min, rec.lambda_max, rec.lower, rec.upper,
            rec.upper_potential_after, rec.lower_potential_after,
        );
    }
    println!(
        "selected {} of {m} vectors; rescaled spectrum [{:.9}, {:.6}], bound {:.6}",
        out.len(),
        out.lambda_min,
        out.lambda_max,
        params.kappa_bound()
    );
    Ok(())
}
