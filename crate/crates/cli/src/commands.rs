use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};
use spdgeom::decompose::{geodesic_project, mostow_gl, mostow_spd};
use spdgeom::manifold::sectional_curvature_id;
use spdgeom::matfun::spd_exp;
use spdgeom::subspace::{lts_check, DEFAULT_LTS_TOL};
use spdgeom::{GeodesicSegment, ProjectionOptions, Subspace};

use crate::error::CliError;
use crate::input::{Format, Loader};
use crate::report::{Outcome, RunReport};
use crate::subspec::{lts_value, parse_subspace, witness_value};

#[derive(Debug, Parser)]
#[command(
    name = "spd",
    version,
    about = "Geometry of symmetric positive-definite matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Convergence tolerance of iterative commands (default: $SPD_TOL or 1e-11).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 500)]
    pub max_iter: usize,
    /// Accept subspaces that fail the Lie-triple-system check.
    #[arg(long, global = true)]
    pub unchecked: bool,
    /// Format of matrix files (default: from the extension, JSON otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riemannian distance between two SPD matrices.
    Dist { a: String, b: String },
    /// Point at parameter t on the geodesic from a to b.
    Geodesic {
        a: String,
        b: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        t: f64,
    },
    /// Matrix logarithm of an SPD matrix.
    Logm { x: String },
    /// Matrix exponential of a symmetric matrix.
    Expm { x: String },
    /// Geodesic projection onto exp(E).
    Project { x: String, subspace: String },
    /// x = e·f·e with e ∈ exp(E), f ∈ exp(E^⊥).
    Mostow { x: String, subspace: String },
    /// g = k·f·e with k orthogonal.
    Gl { g: String, subspace: String },
    /// Lie-triple-system check of a subspace.
    Lts {
        subspace: String,
        /// Matrix size, needed for "diag".
        #[arg(long)]
        n: Option<usize>,
    },
    /// Sectional curvature at the identity of the plane spanned by x and y.
    Curvature { x: String, y: String },
    /// Run a JSON array of {"command": ..., "args": [...]} entries.
    Batch { manifest: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dist { .. } => "dist",
            Command::Geodesic { .. } => "geodesic",
            Command::Logm { .. } => "logm",
            Command::Expm { .. } => "expm",
            Command::Project { .. } => "project",
            Command::Mostow { .. } => "mostow",
            Command::Gl { .. } => "gl",
            Command::Lts { .. } => "lts",
            Command::Curvature { .. } => "curvature",
            Command::Batch { .. } => "batch",
        }
    }
}

pub struct Context<'a> {
    pub loader: Loader,
    pub common: &'a Common,
    pub default_tol: f64,
    pub nested: bool,
    pub base_dir: Option<PathBuf>,
}

impl Context<'_> {
    fn options(&self) -> Result<ProjectionOptions, CliError> {
        let tol = self.common.tol.unwrap_or(self.default_tol);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::parse(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(ProjectionOptions {
            tol,
            max_iter: self.common.max_iter,
            strict: !self.common.unchecked,
            ..ProjectionOptions::default()
        })
    }

    // Subspace for an n×n input; file specs get the LTS report attached and
    // strict mode enforced here so the witness reaches the report.
    fn subspace(&mut self, spec: &str, n: usize, out: &mut Outcome) -> Result<Subspace, CliError> {
        let parsed = parse_subspace(spec, Some(n), &mut self.loader)?;
        if parsed.from_file {
            let report = lts_check(&parsed.subspace, DEFAULT_LTS_TOL);
            out.put("lts", lts_value(&report, parsed.subspace.dim()));
            if !report.is_lts && !self.common.unchecked {
                return Err(CliError::domain(format!(
                    "{spec}: subspace is not a Lie triple system (pass --unchecked to project anyway)"
                ))
                .with_details(json!({ "witness": witness_value(&report) })));
            }
        }
        Ok(parsed.subspace)
    }
}

pub fn execute(cmd: &Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match cmd {
        Command::Dist { a, b } => {
            let (a, b) = (ctx.loader.spd(a)?, ctx.loader.spd(b)?);
            same_size(a.n(), b.n())?;
            out.put("distance", spdgeom::manifold::distance(&a, &b)?);
        }
        Command::Geodesic { a, b, t } => {
            let (a, b) = (ctx.loader.spd(a)?, ctx.loader.spd(b)?);
            same_size(a.n(), b.n())?;
            let seg = GeodesicSegment::new(a, b)?;
            out.put_matrix("point", seg.at(*t)?.as_matrix())
                .put("t", *t)
                .put("length", seg.length());
        }
        Command::Logm { x } => {
            let x = ctx.loader.spd(x)?;
            out.put_matrix("log", x.log().as_matrix());
        }
        Command::Expm { x } => {
            let x = ctx.loader.symmetric(x)?;
            out.put_matrix("exp", spd_exp(&x)?.as_matrix());
        }
        Command::Project { x, subspace } => {
            let x = ctx.loader.spd(x)?;
            let e = ctx.subspace(subspace, x.n(), &mut out)?;
            let p = geodesic_project(&x, &e, &ctx.options()?)?;
            out.put_matrix("pi", p.pi.as_matrix())
                .put_matrix("log_pi", p.log_pi.as_matrix())
                .put("distance", p.distance)
                .put("residual", p.residual)
                .put("iterations", p.iterations)
                .put("uniqueness_guaranteed", p.uniqueness_guaranteed);
            out.iterations = Some(p.iterations);
            out.residual = Some(p.residual);
        }
        Command::Mostow { x, subspace } => {
            let x = ctx.loader.spd(x)?;
            let e = ctx.subspace(subspace, x.n(), &mut out)?;
            let m = mostow_spd(&x, &e, &ctx.options()?)?;
            out.put_matrix("e", m.e.as_matrix())
                .put_matrix("f", m.f.as_matrix())
                .put_matrix("pi", m.pi.as_matrix())
                .put("reconstruction_error", m.reconstruction_error(&x))
                .put("f_membership_residual", m.f_membership_residual(&e))
                .put("residual", m.residual)
                .put("iterations", m.iterations)
                .put("uniqueness_guaranteed", m.uniqueness_guaranteed);
            out.iterations = Some(m.iterations);
            out.residual = Some(m.residual);
        }
        Command::Gl { g, subspace } => {
            let g = ctx.loader.matrix(g)?;
            let e = ctx.subspace(subspace, g.nrows(), &mut out)?;
            let m = mostow_gl(&g, &e, &ctx.options()?)?;
            out.put_matrix("k", &m.k)
                .put_matrix("f", m.f.as_matrix())
                .put_matrix("e", m.e.as_matrix())
                .put("reconstruction_error", m.reconstruction_error(&g))
                .put("orthogonality_error", m.orthogonality_error())
                .put("residual", m.residual)
                .put("iterations", m.iterations);
            out.iterations = Some(m.iterations);
            out.residual = Some(m.residual);
        }
        Command::Lts { subspace, n } => {
            let parsed = parse_subspace(subspace, *n, &mut ctx.loader)?;
            let tol = ctx.common.tol.unwrap_or(DEFAULT_LTS_TOL);
            let report = lts_check(&parsed.subspace, tol);
            out.outputs = match lts_value(&report, parsed.subspace.dim()) {
                Value::Object(map) => map,
                _ => unreachable!("lts_value builds an object"),
            };
            out.put("n", parsed.subspace.n());
        }
        Command::Curvature { x, y } => {
            let (x, y) = (ctx.loader.symmetric(x)?, ctx.loader.symmetric(y)?);
            same_size(x.n(), y.n())?;
            let k = sectional_curvature_id(&x, &y)?;
            let (xm, ym) = (x.as_matrix(), y.as_matrix());
            let comm: DMatrix<f64> = xm * ym - ym * xm;
            let gram = x.dot(&x) * y.dot(&y) - x.dot(&y).powi(2);
            out.put("sectional_curvature", k)
                .put("commutator_identity", -comm.norm_squared() / gram);
        }
        Command::Batch { manifest } => {
            if ctx.nested {
                return Err(CliError::parse("batch entries cannot run batch"));
            }
            let results = run_batch(manifest, ctx)?;
            let worst = results.iter().map(|r| r.exit_code).max().unwrap_or(0);
            let failed = results.iter().filter(|r| r.exit_code != 0).count();
            out.put("entries", results.len()).put("failed", failed).put(
                "results",
                serde_json::to_value(&results).expect("reports serialize"),
            );
            if worst != 0 {
                let mut e = CliError::parse(format!(
                    "{failed} of {} batch entries failed",
                    results.len()
                ));
                e.code = worst;
                e.kind = "batch";
                out.status = Some(e);
            }
        }
    }
    Ok(out)
}

fn same_size(a: usize, b: usize) -> Result<(), CliError> {
    if a == b {
        Ok(())
    } else {
        Err(CliError::parse(format!(
            "matrix sizes differ: {a}×{a} and {b}×{b}"
        )))
    }
}

fn run_batch(manifest: &str, ctx: &mut Context) -> Result<Vec<RunReport>, CliError> {
    let doc = ctx.loader.json_file(manifest)?;
    let entries = doc
        .as_array()
        .ok_or_else(|| CliError::parse("batch manifest must be a JSON array"))?;
    let base = ctx
        .loader
        .resolve(manifest)
        .parent()
        .map(|p| p.to_path_buf())
        .or_else(|| ctx.base_dir.clone());
    Ok(entries
        .par_iter()
        .map(|entry| match entry_argv(entry) {
            Ok(argv) => crate::run_nested(argv, base.clone()),
            Err(e) => crate::failed_report(Vec::new(), &e, String::new()),
        })
        .collect())
}

fn entry_argv(entry: &Value) -> Result<Vec<String>, CliError> {
    let command = entry
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::parse("batch entry needs a \"command\" string"))?;
    let mut argv = vec!["spd".to_string(), command.to_string()];
    if let Some(args) = entry.get("args") {
        let args = args
            .as_array()
            .ok_or_else(|| CliError::parse("\"args\" must be an array"))?;
        for a in args {
            argv.push(match a {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => other.to_string(),
            });
        }
    }
    Ok(argv)
}
