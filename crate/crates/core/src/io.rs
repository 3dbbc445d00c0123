//! File formats: basis matrices as CSV, embeddings as JSON.
//!
//! Basis CSV: no header, one line per coordinate (`m` lines), one field per
//! basis vector (`k` fields), decimal floats.
//!
//! Embedding JSON: `{p, eps, eps_inner, theta, sigma, weights, cert_lower,
//! cert_upper, k, m, D, r}` with `sigma` 1-based and ascending.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::embedder::Embedding;
use crate::error::{Error, Result};

pub fn parse_basis_csv<R: Read>(reader: R) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut entries = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse(format!(
                    "line {}: expected {w} fields, found {}",
                    line + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {field:?}", line + 1)))?;
            entries.push(v);
        }
        rows += 1;
    }
    let Some(width) = width else {
        return Err(Error::Parse("empty basis file".into()));
    };
    Ok(DMatrix::from_row_slice(rows, width, &entries))
}

pub fn read_basis_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_basis_csv(BufReader::new(File::open(path)?))
}

pub fn write_basis_csv<W: Write>(basis: &DMatrix<f64>, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    for i in 0..basis.nrows() {
        // f64 Display is the shortest round-tripping representation
        w.write_record(basis.row(i).iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_basis_csv(basis: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<()> {
    write_basis_csv(basis, BufWriter::new(File::create(path)?))
}

/// On-disk form of an [`Embedding`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub p: u32,
    pub eps: f64,
    pub eps_inner: f64,
    pub theta: f64,
    pub sigma: Vec<usize>,
    pub weights: Vec<f64>,
    pub cert_lower: f64,
    pub cert_upper: f64,
    pub k: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub monomial_count: usize,
    pub r: usize,
}

impl From<&Embedding> for EmbeddingFile {
    fn from(e: &Embedding) -> Self {
        Self {
            p: e.p,
            eps: e.eps,
            eps_inner: e.eps_inner,
            theta: e.theta,
            sigma: e.sigma.iter().map(|i| i + 1).collect(),
            weights: e.weights.clone(),
            cert_lower: e.cert_lower,
            cert_upper: e.cert_upper,
            k: e.k,
            m: e.m,
            monomial_count: e.monomial_count,
            r: e.rank,
        }
    }
}

impl TryFrom<EmbeddingFile> for Embedding {
    type Error = Error;

    fn try_from(f: EmbeddingFile) -> Result<Self> {
        if f.sigma.len() != f.weights.len() {
            return Err(Error::Parse(format!(
                "sigma has {} entries but weights has {}",
                f.sigma.len(),
                f.weights.len()
            )));
        }
        if f.sigma.iter().any(|&i| i == 0 || i > f.m) {
            return Err(Error::Parse(format!(
                "sigma entries must lie in 1..={}",
                f.m
            )));
        }
        if f.sigma.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("sigma must be strictly ascending".into()));
        }
        if f.weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Parse("weights must be positive and finite".into()));
        }
        Ok(Embedding {
            p: f.p,
            eps: f.eps,
            eps_inner: f.eps_inner,
            theta: f.theta,
            sigma: f.sigma.iter().map(|i| i - 1).collect(),
            weights: f.weights,
            cert_lower: f.cert_lower,
            cert_upper: f.cert_upper,
            k: f.k,
            m: f.m,
            monomial_count: f.monomial_count,
            rank: f.r,
        })
    }
}

pub fn embedding_to_json(e: &Embedding) -> Result<String> {
    Ok(serde_json::to_string_pretty(&EmbeddingFile::from(e))?)
}

pub fn embedding_from_json(s: &str) -> Result<Embedding> {
    serde_json::from_str::<EmbeddingFile>(s)?.try_into()
}

pub fn save_embedding(e: &Embedding, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, embedding_to_json(e)? + "\n")?;
    Ok(())
}

pub fn load_embedding(path: impl AsRef<Path>) -> Result<Embedding> {
    embedding_from_json(&std::fs::read_to_string(path)?)
}
