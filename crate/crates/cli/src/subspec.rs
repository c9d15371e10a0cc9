//! Subspace specifications: "diag", "block:p1,p2[,...]", "antiblock:p,q"
//! and "file:PATH" with PATH a JSON document {"n": n, "generators": [...]}.

use serde_json::{json, Value};
use spdgeom::{LtsReport, Subspace, SymMatrix};

use crate::error::CliError;
use crate::input::{matrix_from_value, symmetric_from, Loader};
use crate::report::matrix_value;

#[derive(Debug)]
pub struct ParsedSubspace {
    pub subspace: Subspace,
    pub from_file: bool,
}

/// Parses `spec`; `n` is the dimension implied by the other inputs, if any.
pub fn parse_subspace(
    spec: &str,
    n: Option<usize>,
    loader: &mut Loader,
) -> Result<ParsedSubspace, CliError> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, Some(r)),
        None => (spec, None),
    };
    let subspace = match (kind, rest) {
        ("diag", None) => {
            let n = n.ok_or_else(|| CliError::parse("\"diag\" needs a dimension (pass --n)"))?;
            if n == 0 {
                return Err(CliError::parse("dimension must be positive"));
            }
            Subspace::diagonal(n)
        }
        ("block", Some(sizes)) => Subspace::block_diagonal(&parse_sizes(sizes)?)?,
        ("antiblock", Some(sizes)) => match parse_sizes(sizes)?[..] {
            [p, q] => Subspace::block_anti_diagonal(p, q)?,
            _ => return Err(CliError::parse("antiblock takes exactly two sizes: antiblock:p,q")),
        },
        ("file", Some(path)) => {
            let doc = loader.json_file(path)?;
            let subspace = subspace_from_value(&doc, &mut loader.warnings).map_err(|mut e| {
                e.message = format!("{path}: {}", e.message);
                e
            })?;
            return check_dim(ParsedSubspace { subspace, from_file: true }, n);
        }
        _ => {
            return Err(CliError::parse(format!(
                "unknown subspace spec {spec:?}; expected diag, block:p1,p2[,...], antiblock:p,q or file:PATH"
            )))
        }
    };
    check_dim(
        ParsedSubspace {
            subspace,
            from_file: false,
        },
        n,
    )
}

fn check_dim(parsed: ParsedSubspace, n: Option<usize>) -> Result<ParsedSubspace, CliError> {
    match n {
        Some(n) if n != parsed.subspace.n() => Err(CliError::parse(format!(
            "subspace lives in Sym({}) but the matrix is {n}×{n}",
            parsed.subspace.n()
        ))),
        _ => Ok(parsed),
    }
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| CliError::parse(format!("invalid block size {p:?}")))
        })
        .collect()
}

pub fn subspace_from_value(doc: &Value, warnings: &mut Vec<String>) -> Result<Subspace, CliError> {
    let gens = doc
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::parse("subspace file needs a \"generators\" array"))?;
    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, g)| symmetric_from(matrix_from_value(g)?, &format!("generator {i}"), warnings))
        .collect::<Result<Vec<SymMatrix>, _>>()?;
    if let Some(n) = doc.get("n") {
        let n = n
            .as_u64()
            .ok_or_else(|| CliError::parse("\"n\" must be a non-negative integer"))?
            as usize;
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(CliError::parse(format!(
                "generator of size {} in a file declaring n = {n}",
                g.n()
            )));
        }
    }
    Ok(Subspace::from_generators(&generators)?)
}

pub fn lts_value(report: &LtsReport, dim: usize) -> Value {
    json!({
        "is_lts": report.is_lts,
        "dimension": dim,
        "max_triple_residual": report.max_triple_residual,
        "double_bracket_is_lts": report.double_bracket_is_lts,
        "max_double_bracket_residual": report.max_double_bracket_residual,
        "forms_agree": report.forms_agree(),
        "tol": report.tol,
        "witness": witness_value(report),
    })
}

pub fn witness_value(report: &LtsReport) -> Value {
    match &report.witness {
        None => Value::Null,
        Some(w) => json!({
            "indices": [w.indices.0, w.indices.1, w.indices.2],
            "residual": w.residual,
            "x": matrix_value(w.x.as_matrix()),
            "y": matrix_value(w.y.as_matrix()),
            "z": matrix_value(w.z.as_matrix()),
            "direction": matrix_value(w.direction.as_matrix()),
        }),
    }
}
