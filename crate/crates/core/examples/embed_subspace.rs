//! Embed a random 3-dimensional subspace of l_4^1000 and apply the map.
//!
//! cargo run -p lp-embed --example embed_subspace

use lp_embed::embedder::{embed_detailed, lp_norm};
use lp_embed::{gen_subspace, SubspaceKind};
use nalgebra::DVector;

fn main() -> lp_embed::Result<()> {
    let (k, m, p, eps) = (3, 1000, 4, 0.3);
    let sub = gen_subspace(SubspaceKind::Gaussian, k, m, 11)?;
    let out = embed_detailed(&sub, p, eps)?;
    let e = &out.embedding;

    println!("k = {k}, m = {m}, p = {p}, eps = {eps}");
    println!(
        "lift: D = {}, r = {}; inner accuracy {}, theta {:.5}",
        e.monomial_count, e.rank, e.eps_inner, e.theta
    );
    println!(
        "kept n = {} coordinates (worst-case bound {})",
        e.n(),
        out.sparse.steps
    );
    println!(
        "certified: {:.6} <= |Tx|_p / |x|_p <= {:.6}",
        e.cert_lower, e.cert_upper
    );

    let x = sub.point(&DVector::from_row_slice(&[1.0, -2.0, 0.5]))?;
    let y = e.apply(&x)?;
    println!(
        "example point: |x|_{p} = {:.6}, |Tx|_{p} = {:.6}, ratio {:.6}",
        lp_norm(x.as_slice(), p),
        lp_norm(y.as_slice(), p),
        lp_norm(y.as_slice(), p) / lp_norm(x.as_slice(), p)
    );
    Ok(())
}
