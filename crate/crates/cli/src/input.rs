//! Matrix ingestion: JSON files ({"n", "data"} or a bare array of rows),
//! headerless CSV files, and inline JSON literals.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde_json::Value;
use sha2::{Digest, Sha256};
use spdgeom::{SpdMatrix, SymMatrix};

use crate::error::CliError;

/// Largest asymmetry, relative to the Frobenius norm, that is silently
/// repaired by symmetrization (with a warning).
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Reads command inputs, hashing everything it reads and collecting
/// warnings.
pub struct Loader {
    base_dir: Option<PathBuf>,
    format: Option<Format>,
    digest: Sha256,
    pub warnings: Vec<String>,
}

impl Loader {
    /// Relative paths resolve against `base_dir` when given.
    pub fn new(base_dir: Option<PathBuf>, format: Option<Format>) -> Self {
        Self {
            base_dir,
            format,
            digest: Sha256::new(),
            warnings: Vec::new(),
        }
    }

    pub fn hash(&mut self, bytes: &[u8]) {
        self.digest.update((bytes.len() as u64).to_le_bytes());
        self.digest.update(bytes);
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest.clone().finalize())
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        match &self.base_dir {
            Some(base) if Path::new(path).is_relative() => base.join(path),
            _ => PathBuf::from(path),
        }
    }

    pub fn read_file(&mut self, path: &str) -> Result<String, CliError> {
        let resolved = self.resolve(path);
        let text = fs::read_to_string(&resolved)
            .map_err(|e| CliError::parse(format!("cannot read {}: {e}", resolved.display())))?;
        self.hash(text.as_bytes());
        Ok(text)
    }

    pub fn json_file(&mut self, path: &str) -> Result<Value, CliError> {
        let text = self.read_file(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("{path}: invalid JSON: {e}")))
    }

    /// A square matrix from a path or an inline JSON literal.
    pub fn matrix(&mut self, arg: &str) -> Result<DMatrix<f64>, CliError> {
        let trimmed = arg.trim_start();
        if trimmed.starts_with('[') || trimmed.starts_with('{') {
            return parse_json_matrix(arg).map_err(|e| prefix("inline matrix", e));
        }
        let format = self.format.unwrap_or_else(|| format_from_extension(arg));
        let text = self.read_file(arg)?;
        match format {
            Format::Json => parse_json_matrix(&text),
            Format::Csv => parse_csv_matrix(&text),
        }
        .map_err(|e| prefix(arg, e))
    }

    pub fn symmetric(&mut self, arg: &str) -> Result<SymMatrix, CliError> {
        let m = self.matrix(arg)?;
        symmetric_from(m, arg, &mut self.warnings)
    }

    pub fn spd(&mut self, arg: &str) -> Result<SpdMatrix, CliError> {
        Ok(SpdMatrix::new(self.symmetric(arg)?)?)
    }
}

fn prefix(label: &str, mut e: CliError) -> CliError {
    e.message = format!("{label}: {}", e.message);
    e
}

fn format_from_extension(path: &str) -> Format {
    match Path::new(path).extension().and_then(|s| s.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    }
}

/// Checks symmetry; small asymmetries are averaged away with a warning,
/// larger ones are rejected naming the maximum asymmetry.
pub fn symmetric_from(
    m: DMatrix<f64>,
    label: &str,
    warnings: &mut Vec<String>,
) -> Result<SymMatrix, CliError> {
    let asym = SymMatrix::max_asymmetry(&m);
    if asym > 0.0 {
        if asym > SYMMETRY_TOL * m.norm() {
            return Err(CliError::parse(format!(
                "{label}: matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        warnings.push(format!("{label}: symmetrized (max asymmetry {asym:e})"));
    }
    Ok(SymMatrix::new(m)?)
}

pub fn parse_json_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid JSON: {e}")))?;
    matrix_from_value(&v)
}

/// Accepts {"n": n, "data": rows} or a bare array of rows.
pub fn matrix_from_value(v: &Value) -> Result<DMatrix<f64>, CliError> {
    let (declared, data) = match v {
        Value::Array(_) => (None, v),
        Value::Object(obj) => {
            let data = obj
                .get("data")
                .ok_or_else(|| CliError::parse("matrix object needs a \"data\" field"))?;
            let n = match obj.get("n") {
                None => None,
                Some(n) => Some(
                    n.as_u64()
                        .ok_or_else(|| CliError::parse("\"n\" must be a non-negative integer"))?
                        as usize,
                ),
            };
            (n, data)
        }
        _ => {
            return Err(CliError::parse(
                "expected a matrix object or an array of rows",
            ))
        }
    };
    let rows = data
        .as_array()
        .ok_or_else(|| CliError::parse("\"data\" must be an array of rows"))?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| CliError::parse(format!("row {i} is not an array")))?
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| CliError::parse(format!("row {i}: non-numeric entry {x}")))
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = square_from_rows(rows)?;
    if let Some(n) = declared {
        if n != m.nrows() {
            return Err(CliError::parse(format!(
                "declared n = {n} but data has {} rows",
                m.nrows()
            )));
        }
    }
    Ok(m)
}

pub fn parse_csv_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::parse(format!("invalid CSV: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    CliError::parse(format!("row {i}: cannot parse {s:?} as a number"))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    square_from_rows(rows)
}

fn square_from_rows(rows: Vec<Vec<f64>>) -> Result<DMatrix<f64>, CliError> {
    let n = rows.len();
    if n == 0 {
        return Err(CliError::parse("empty matrix"));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(CliError::parse(format!(
            "matrix is not square: row {i} has {} entries, expected {n}",
            r.len()
        )));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::parse("matrix has non-finite entries"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}
