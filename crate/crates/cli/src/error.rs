use serde_json::Value;
use spdgeom::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

/// A failed command: exit code, a short machine-readable kind and optional
/// structured details (e.g. an LTS witness).
#[derive(Clone, Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            kind: "parse",
            message: message.into(),
            details: None,
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            kind: "domain",
            message: message.into(),
            details: None,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::DimensionMismatch { .. } | Error::NotSquare { .. } | Error::NonFinite => {
                (EXIT_PARSE, "parse")
            }
            Error::EigenNonConvergence { .. } | Error::NonConvergence { .. } => {
                (EXIT_NON_CONVERGENCE, "non_convergence")
            }
            _ => (EXIT_DOMAIN, "domain"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
            details: None,
        }
    }
}
