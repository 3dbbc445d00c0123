//! Largest subspace dimension that fits a coordinate budget n.
//!
//! cargo run -p lp-embed --example capacity_table

use lp_embed::capacity;

fn main() {
    let budgets = [100, 1_000, 10_000, 100_000, 1_000_000];
    print!("{:>12}", "p, eps");
    for n in budgets {
        print!("{n:>10}");
    }
    println!();
    for (p, eps) in [(2, 0.5), (4, 0.5), (4, 0.1), (6, 0.5), (8, 0.5), (10, 0.25)] {
        print!("{:>12}", format!("{p}, {eps}"));
        for n in budgets {
            print!("{:>10}", capacity(n, p, eps));
        }
        println!();
    }
}
