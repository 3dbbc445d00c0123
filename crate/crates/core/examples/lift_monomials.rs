//! Monomial bases of the lifted space and how their size compares to the bounds.
//!
//! cargo run -p lp-embed --example lift_monomials

use lp_embed::lift::{build_lift, dimension_bounds, enumerate_monomials};
use lp_embed::{gen_subspace, SubspaceKind};

fn main() -> lp_embed::Result<()> {
    println!("degree-2 monomials in 3 variables:");
    for m in enumerate_monomials(3, 2)? {
        println!("  {:?}", m.exponents());
    }

    println!(
        "\n{:>3} {:>3} {:>10} {:>14} {:>12}",
        "k", "p", "exact", "(10k/p)^(p/2)", "k^(p/2)"
    );
    for (k, p) in [(4, 4), (8, 4), (8, 6), (12, 8), (20, 10), (30, 12)] {
        let b = dimension_bounds(k, p)?;
        println!(
            "{k:>3} {p:>3} {:>10} {:>14.0} {:>12.0}",
            b.exact, b.polynomial_bound, b.naive_bound
        );
    }

    println!();
    for (kind, p) in [
        (SubspaceKind::Gaussian, 4),
        (SubspaceKind::Gaussian, 6),
        (SubspaceKind::Coordinate, 4),
    ] {
        let sub = gen_subspace(kind, 3, 50, 1)?;
        let lift = build_lift(&sub, p)?;
        println!(
            "{kind} k = 3, p = {p}: D = {}, numerical rank r = {}",
            lift.monomial_count(),
            lift.rank()
        );
    }
    Ok(())
}
