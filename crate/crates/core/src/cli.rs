//! Command-line surface: `embed`, `certify` and `scaling`.
//!
//! Exit codes: 0 success, 1 validation, 2 numerical infeasibility or a failed
//! certificate, 3 I/O and parse errors.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedder::{certify, embed_detailed, empirical_distortion};
use crate::error::{Error, Result};
use crate::generate::{gen_subspace, SubspaceKind, GENERATOR};
use crate::io::{load_embedding, read_basis_csv, save_embedding};
use crate::lift::{build_lift, Subspace};

/// Agreement required between stored and recomputed certificates.
pub const CERT_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "lp-embed",
    version,
    about = "Certified (1+eps) embeddings of subspaces of l_p^m into l_p^n for even p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, certify and sample-check an embedding
    Embed(EmbedArgs),
    /// Recompute the certificate of a saved embedding
    Certify(CertifyArgs),
    /// Sweep k and record how the target dimension grows
    Scaling(ScalingArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    /// Basis CSV (m lines, k fields per line)
    #[arg(long, conflicts_with_all = ["kind", "k", "m"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, requires_all = ["k", "m"])]
    pub kind: Option<SubspaceKind>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Where to write the embedding JSON
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the run report JSON
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub kmin: usize,
    #[arg(long)]
    pub kmax: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SubspaceKind::Gaussian)]
    pub kind: SubspaceKind,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInput {
    pub k: usize,
    pub m: usize,
    pub p: u32,
    pub eps: f64,
    pub seed: u64,
    /// Subspace family, or `csv` for a file input.
    pub kind: String,
    pub generator: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub n: usize,
    #[serde(rename = "D")]
    pub monomial_count: usize,
    pub r: usize,
    pub theta: f64,
    pub eps_inner: f64,
    pub cert_lower: f64,
    pub cert_upper: f64,
    pub trials: usize,
    pub empirical_min_ratio: f64,
    pub empirical_max_ratio: f64,
    pub within_cert: bool,
    /// `cert_upper <= 1 + eps`
    pub pass: bool,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: RunInput,
    pub output: RunOutput,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.output.pass {
            0
        } else {
            2
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Embed(args) => cmd_embed(&args).map(|r| r.exit_code()),
        Command::Certify(args) => cmd_certify(&args).map(|c| c.exit_code()),
        Command::Scaling(args) => cmd_scaling(&args).map(|_| 0),
    }
}

fn load_subspace(args: &EmbedArgs) -> Result<(Subspace, String)> {
    match (&args.input, args.kind) {
        (Some(path), _) => Ok((Subspace::new(read_basis_csv(path)?)?, "csv".to_string())),
        (None, Some(kind)) => {
            let (k, m) = args
                .k
                .zip(args.m)
                .ok_or_else(|| Error::Validation("--kind requires --k and --m".into()))?;
            Ok((gen_subspace(kind, k, m, args.seed)?, kind.to_string()))
        }
        (None, None) => Err(Error::Validation(
            "either --input or --kind is required".into(),
        )),
    }
}

pub fn cmd_embed(args: &EmbedArgs) -> Result<RunReport> {
    let start = Instant::now();
    let (sub, kind) = load_subspace(args)?;
    let outcome = embed_detailed(&sub, args.p, args.eps)?;
    let emb = &outcome.embedding;
    let dist = empirical_distortion(emb, &sub, args.trials, args.seed)?;
    let report = RunReport {
        input: RunInput {
            k: sub.dim(),
            m: sub.ambient_dim(),
            p: args.p,
            eps: args.eps,
            seed: args.seed,
            kind,
            generator: GENERATOR.to_string(),
        },
        output: RunOutput {
            n: emb.n(),
            monomial_count: emb.monomial_count,
            r: emb.rank,
            theta: emb.theta,
            eps_inner: emb.eps_inner,
            cert_lower: emb.cert_lower,
            cert_upper: emb.cert_upper,
            trials: dist.trials,
            empirical_min_ratio: dist.min_ratio,
            empirical_max_ratio: dist.max_ratio,
            within_cert: dist.within_cert,
            pass: emb.passes(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    };
    if let Some(path) = &args.out {
        save_embedding(emb, path)?;
    }
    if let Some(path) = &args.report {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    println!(
        "n = {} (D = {}, r = {}), certified distortion [{:.9}, {:.9}], sampled [{:.9}, {:.9}], {}",
        report.output.n,
        report.output.monomial_count,
        report.output.r,
        report.output.cert_lower,
        report.output.cert_upper,
        report.output.empirical_min_ratio,
        report.output.empirical_max_ratio,
        if report.output.pass { "pass" } else { "FAIL" },
    );
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOutcome {
    pub stored_lower: f64,
    pub stored_upper: f64,
    pub cert_lower: f64,
    pub cert_upper: f64,
}

impl CertifyOutcome {
    pub fn matches(&self) -> bool {
        (self.stored_lower - self.cert_lower).abs() <= CERT_MATCH_TOL
            && (self.stored_upper - self.cert_upper).abs() <= CERT_MATCH_TOL
    }

    pub fn exit_code(&self) -> i32 {
        if self.matches() {
            0
        } else {
            1
        }
    }
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<CertifyOutcome> {
    let emb = load_embedding(&args.embedding)?;
    let sub = Subspace::new(read_basis_csv(&args.input)?)?;
    let lifted = build_lift(&sub, emb.p)?;
    let cert = certify(&emb, &lifted)?;
    let outcome = CertifyOutcome {
        stored_lower: emb.cert_lower,
        stored_upper: emb.cert_upper,
        cert_lower: cert.cert_lower,
        cert_upper: cert.cert_upper,
    };
    println!(
        "recomputed [{:.12}, {:.12}] vs stored [{:.12}, {:.12}]: {}",
        outcome.cert_lower,
        outcome.cert_upper,
        outcome.stored_lower,
        outcome.stored_upper,
        if outcome.matches() {
            "match"
        } else {
            "MISMATCH"
        },
    );
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub k: usize,
    #[serde(rename = "D")]
    pub monomial_count: usize,
    pub r: usize,
    pub n: usize,
    pub cert_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `log n` against `log k`; `None` with fewer than two k values.
    pub slope: Option<f64>,
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / len;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Runs one embedding per `k` in `kmin..=kmax`; rows come back in `k` order.
pub fn scaling_sweep(args: &ScalingArgs) -> Result<ScalingSummary> {
    if args.kmin == 0 || args.kmin > args.kmax {
        return Err(Error::Validation(format!(
            "need 1 <= kmin <= kmax (got {}..={})",
            args.kmin, args.kmax
        )));
    }
    let rows = (args.kmin..=args.kmax)
        .into_par_iter()
        .map(|k| {
            let sub = gen_subspace(args.kind, k, args.m, args.seed)?;
            let outcome = embed_detailed(&sub, args.p, args.eps)?;
            let e = outcome.embedding;
            Ok(ScalingRow {
                k,
                monomial_count: e.monomial_count,
                r: e.rank,
                n: e.n(),
                cert_upper: e.cert_upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.k as f64, r.n as f64)).collect();
    Ok(ScalingSummary {
        slope: loglog_slope(&points),
        rows,
    })
}

pub fn cmd_scaling(args: &ScalingArgs) -> Result<ScalingSummary> {
    let summary = scaling_sweep(args)?;
    let mut w = csv::Writer::from_path(&args.out)?;
    for row in &summary.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    println!(
        "{}",
        serde_json::json!({ "slope": summary.slope, "rows": summary.rows.len() })
    );
    Ok(summary)
}
