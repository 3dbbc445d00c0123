use std::path::Path;
use std::process::{Command, Output};

use lp_embed::cli::RunReport;
use lp_embed::io::{load_embedding, read_basis_csv, save_basis_csv};
use lp_embed::{apply_embedding, gen_subspace, SubspaceKind};
use nalgebra::DVector;

fn lp_embed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lp-embed"))
        .args(args)
        .output()
        .unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn write_fixture(dir: &Path) -> String {
    let csv = path(dir, "basis.csv");
    let sub = gen_subspace(SubspaceKind::Gaussian, 2, 500, 1).unwrap();
    save_basis_csv(sub.basis(), &csv).unwrap();
    csv
}

#[test]
fn coordinate_embed_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out_json = path(dir.path(), "emb.json");
    let o = lp_embed(&[
        "embed",
        "--kind",
        "coordinate",
        "--k",
        "3",
        "--m",
        "10",
        "--p",
        "4",
        "--eps",
        "0.5",
        "--out",
        &out_json,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let emb = load_embedding(&out_json).unwrap();
    assert_eq!(emb.n(), 3);
    assert_eq!(emb.sigma, vec![0, 1, 2]);
    let raw: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    assert_eq!(raw["sigma"], serde_json::json!([1, 2, 3]));
}

#[test]
fn odd_p_is_rejected() {
    let o = lp_embed(&[
        "embed", "--kind", "gaussian", "--k", "2", "--m", "10", "--p", "3", "--eps", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p must be even"));
}

#[test]
fn validation_and_io_exit_codes() {
    let o = lp_embed(&[
        "embed", "--kind", "gaussian", "--k", "5", "--m", "3", "--p", "4", "--eps", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = lp_embed(&[
        "embed", "--kind", "gaussian", "--k", "2", "--m", "10", "--p", "4", "--eps", "1.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = lp_embed(&[
        "embed",
        "--input",
        "/definitely/missing.csv",
        "--p",
        "4",
        "--eps",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.csv");
    std::fs::write(&bad, "1,2\n3\n").unwrap();
    let o = lp_embed(&["embed", "--input", &bad, "--p", "4", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn csv_embed_report_matches_pinned_values() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture(dir.path());
    let emb = path(dir.path(), "emb.json");
    let rep = path(dir.path(), "rep.json");
    let o = lp_embed(&[
        "embed", "--input", &csv, "--p", "4", "--eps", "0.25", "--seed", "1", "--out", &emb,
        "--report", &rep,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report.input.kind, "csv");
    assert_eq!((report.input.k, report.input.m), (2, 500));
    let out = &report.output;
    assert_eq!((out.n, out.monomial_count, out.r), (7, 3, 3));
    assert!((out.theta - 1.0 / 9.0).abs() < 1e-15);
    assert!((out.cert_lower - 1.0).abs() < 1e-6);
    assert!((out.cert_upper - 1.002_756_655_994_813).abs() < 1e-6);
    assert!((out.empirical_min_ratio - PINNED_MIN).abs() < 1e-6);
    assert!((out.empirical_max_ratio - PINNED_MAX).abs() < 1e-6);
    assert!(out.within_cert && out.pass);
    assert!(out.wall_time_secs >= 0.0);

    // certify the saved file against the same basis
    let o = lp_embed(&["certify", "--embedding", &emb, "--input", &csv]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );

    // round trip reproduces apply outputs
    let loaded = load_embedding(&emb).unwrap();
    let sub = gen_subspace(SubspaceKind::Gaussian, 2, 500, 1).unwrap();
    let direct = lp_embed::embed(&sub, 4, 0.25).unwrap();
    let x = sub.point(&DVector::from_row_slice(&[0.7, -1.3])).unwrap();
    assert_eq!(
        apply_embedding(&loaded, &x).unwrap(),
        apply_embedding(&direct, &x).unwrap()
    );
    assert_eq!(read_basis_csv(&csv).unwrap(), *sub.basis());
}

const PINNED_MIN: f64 = 1.000_451_619_997_471;
const PINNED_MAX: f64 = 1.002_395_537_491_058;

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let rep = path(dir.path(), &format!("r{i}.json"));
        let o = lp_embed(&[
            "embed", "--kind", "l2k", "--k", "3", "--m", "200", "--seed", "5", "--p", "6", "--eps",
            "0.5", "--trials", "500", "--report", &rep,
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut r: RunReport =
            serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        r.output.wall_time_secs = 0.0;
        reports.push(r);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn tampered_embedding_fails_certify() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_fixture(dir.path());
    let emb = path(dir.path(), "emb.json");
    let o = lp_embed(&[
        "embed", "--input", &csv, "--p", "4", "--eps", "0.5", "--trials", "10", "--out", &emb,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut raw: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&emb).unwrap()).unwrap();
    raw["cert_upper"] = serde_json::json!(1.2);
    std::fs::write(&emb, raw.to_string()).unwrap();
    let o = lp_embed(&["certify", "--embedding", &emb, "--input", &csv]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scaling_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "sweep.csv");
    let o = lp_embed(&[
        "scaling", "--p", "4", "--eps", "0.5", "--kmin", "2", "--kmax", "4", "--m", "300",
        "--seed", "1", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,D,r,n,cert_upper");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,3,3,"));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["slope"].is_f64());

    let o = lp_embed(&[
        "scaling", "--p", "4", "--eps", "0.5", "--kmin", "3", "--kmax", "3", "--m", "300",
        "--seed", "1", "--out", &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["slope"].is_null());
}
