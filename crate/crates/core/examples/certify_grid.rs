//! Compare the eigenvalue certificate with a brute-force scan of a plane.
//!
//! cargo run -p lp-embed --example certify_grid

use lp_embed::embedder::{embed, empirical_distortion, lp_norm};
use lp_embed::{gen_subspace, SubspaceKind};
use nalgebra::DVector;

fn main() -> lp_embed::Result<()> {
    let p = 4;
    let sub = gen_subspace(SubspaceKind::Gaussian, 2, 500, 1)?;
    let e = embed(&sub, p, 0.5)?;

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let points = 100_000;
    for t in 0..points {
        let phi = std::f64::consts::TAU * t as f64 / points as f64;
        let x = sub.point(&DVector::from_row_slice(&[phi.cos(), phi.sin()]))?;
        let ratio = lp_norm(e.apply(&x)?.as_slice(), p) / lp_norm(x.as_slice(), p);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    let rep = empirical_distortion(&e, &sub, 10_000, 7)?;

    println!("n = {} of m = 500 coordinates", e.n());
    println!("certificate   [{:.9}, {:.9}]", e.cert_lower, e.cert_upper);
    println!("angular grid  [{lo:.9}, {hi:.9}]  ({points} points)");
    println!(
        "random draws  [{:.9}, {:.9}]  ({} trials)",
        rep.min_ratio, rep.max_ratio, rep.trials
    );
    println!(
        "certificate slack over the grid maximum: {:.3e}",
        e.cert_upper - hi
    );
    Ok(())
}
