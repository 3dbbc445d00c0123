//! Growth of the kept coordinate count with the subspace dimension.
//!
//! cargo run -p lp-embed --example scaling_sweep

use lp_embed::cli::{scaling_sweep, ScalingArgs};
use lp_embed::embedder::{inner_accuracy, size_bound};
use lp_embed::SubspaceKind;

fn main() -> lp_embed::Result<()> {
    for p in [2, 4] {
        let eps = 0.5;
        let summary = scaling_sweep(&ScalingArgs {
            p,
            eps,
            kmin: 2,
            kmax: 8,
            m: 2000,
            seed: 1,
            kind: SubspaceKind::Gaussian,
            out: Default::default(),
        })?;
        println!("p = {p}, eps = {eps}");
        println!(
            "{:>3} {:>4} {:>4} {:>6} {:>8} {:>11}",
            "k", "D", "r", "n", "bound", "cert_upper"
        );
        for row in &summary.rows {
            let bound = size_bound(inner_accuracy(eps, p), row.r);
            println!(
                "{:>3} {:>4} {:>4} {:>6} {:>8} {:>11.6}",
                row.k, row.monomial_count, row.r, row.n, bound, row.cert_upper
            );
        }
        match summary.slope {
            Some(s) => println!("log n / log k slope: {s:.3}\n"),
            None => println!("log n / log k slope: undefined\n"),
        }
    }
    Ok(())
}
