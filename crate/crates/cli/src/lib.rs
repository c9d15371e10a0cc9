//! Command-line front end for `spdgeom`: matrix ingestion, subcommand
//! dispatch and the JSON run report.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod subspec;

use std::path::PathBuf;

use clap::Parser;

use crate::commands::{execute, Cli, Context};
use crate::error::CliError;
use crate::input::Loader;
use crate::report::{to_json, Diagnostics, ErrorInfo, RunReport};

pub use crate::error::{EXIT_DOMAIN, EXIT_NON_CONVERGENCE, EXIT_OK, EXIT_PARSE};

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "SPD_TOL";

/// Default convergence tolerance of iterative commands.
pub const DEFAULT_TOL: f64 = 1e-11;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: Vec<String>) -> RunReport {
    run_in(argv, None, false)
}

pub(crate) fn run_nested(argv: Vec<String>, base_dir: Option<PathBuf>) -> RunReport {
    run_in(argv, base_dir, true)
}

fn run_in(argv: Vec<String>, base_dir: Option<PathBuf>, nested: bool) -> RunReport {
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let mut loader = Loader::new(None, None);
            echo.iter().for_each(|a| loader.hash(a.as_bytes()));
            let err = CliError::parse(e.render().to_string().trim_end());
            return failed_report(echo, &err, loader.digest_hex());
        }
    };
    let mut ctx = Context {
        loader: Loader::new(base_dir.clone(), cli.common.format),
        common: &cli.common,
        default_tol: DEFAULT_TOL,
        nested,
        base_dir,
    };
    echo.iter().for_each(|a| ctx.loader.hash(a.as_bytes()));
    let result = default_tol().and_then(|tol| {
        ctx.default_tol = tol;
        execute(&cli.command, &mut ctx)
    });
    let digest = ctx.loader.digest_hex();
    let warnings = std::mem::take(&mut ctx.loader.warnings);
    match result {
        Ok(out) => RunReport {
            command: echo,
            inputs_digest: digest,
            outputs: serde_json::Value::Object(out.outputs),
            diagnostics: Diagnostics {
                iterations: out.iterations,
                residual: out.residual,
                warnings,
            },
            error: out.status.as_ref().map(ErrorInfo::from),
            exit_code: out.status.map_or(EXIT_OK, |e| e.code),
        },
        Err(e) => {
            let mut r = failed_report(echo, &e, digest);
            r.diagnostics.warnings = warnings;
            r
        }
    }
}

fn default_tol() -> Result<f64, CliError> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| CliError::parse(format!("{TOL_ENV}={s:?} is not a positive number"))),
    }
}

pub(crate) fn failed_report(
    command: Vec<String>,
    e: &CliError,
    inputs_digest: String,
) -> RunReport {
    RunReport {
        command,
        inputs_digest,
        outputs: serde_json::Value::Object(Default::default()),
        diagnostics: Diagnostics::default(),
        error: Some(ErrorInfo::from(e)),
        exit_code: e.code,
    }
}

/// The report as a single-line JSON document.
pub fn render(report: &RunReport) -> String {
    to_json(report)
}

/// Human-readable summary for stderr.
pub fn log_lines(report: &RunReport) -> Vec<String> {
    let name = report.command.first().map(String::as_str).unwrap_or("spd");
    let mut lines: Vec<String> = report
        .diagnostics
        .warnings
        .iter()
        .map(|w| format!("spd {name}: warning: {w}"))
        .collect();
    match &report.error {
        Some(e) => lines.push(format!(
            "spd {name}: error (exit {}): {}",
            report.exit_code, e.message
        )),
        None => {
            let mut line = format!("spd {name}: ok");
            if let (Some(it), Some(r)) =
                (report.diagnostics.iterations, report.diagnostics.residual)
            {
                line.push_str(&format!(" ({it} iterations, residual {r:.3e})"));
            }
            lines.push(line);
        }
    }
    lines
}
