//! Write a basis CSV, embed it, save the embedding JSON and re-certify it.
//!
//! cargo run -p lp-embed --example file_round_trip

use lp_embed::io::{load_embedding, read_basis_csv, save_basis_csv, save_embedding};
use lp_embed::{build_lift, certify, embed, gen_subspace, Subspace, SubspaceKind};

fn main() -> lp_embed::Result<()> {
    let dir = std::env::temp_dir().join("lp-embed-example");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("basis.csv");
    let json = dir.join("embedding.json");

    let sub = gen_subspace(SubspaceKind::L2k, 3, 300, 5)?;
    save_basis_csv(sub.basis(), &csv)?;
    let e = embed(&Subspace::new(read_basis_csv(&csv)?)?, 6, 0.4)?;
    save_embedding(&e, &json)?;
    println!("wrote {} and {}", csv.display(), json.display());

    let loaded = load_embedding(&json)?;
    let lifted = build_lift(&Subspace::new(read_basis_csv(&csv)?)?, loaded.p)?;
    let c = certify(&loaded, &lifted)?;
    println!(
        "stored     [{:.12}, {:.12}]",
        loaded.cert_lower, loaded.cert_upper
    );
    println!("recomputed [{:.12}, {:.12}]", c.cert_lower, c.cert_upper);
    Ok(())
}
