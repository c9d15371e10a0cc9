//! The JSON document printed on stdout. Floats are written with 17
//! significant digits so that every value parses back to the same bits.

use std::io;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// Arguments after the program name.
    pub command: Vec<String>,
    /// SHA-256 of the arguments and of every file read.
    pub inputs_digest: String,
    pub outputs: Value,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl From<&CliError> for ErrorInfo {
    fn from(e: &CliError) -> Self {
        Self {
            kind: e.kind,
            message: e.message.clone(),
            details: e.details.clone(),
        }
    }
}

/// Payload of a successful command.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub outputs: Map<String, Value>,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    /// Failure that still comes with outputs (a batch with failed entries).
    pub status: Option<CliError>,
}

impl Outcome {
    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn put_matrix(&mut self, key: &str, m: &DMatrix<f64>) -> &mut Self {
        self.put(key, matrix_value(m))
    }
}

/// Rows of m as nested arrays; non-finite entries become null.
pub fn matrix_value(m: &DMatrix<f64>) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(|&x| Value::from(x)).collect()))
            .collect(),
    )
}

/// Compact JSON with floats in `{:.16e}` form.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}
