//! Deterministic JSON and CSV output.

use std::fs;
use std::path::{Path, PathBuf};

use holonomic_core::RbRecord;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round a float to a fixed number of significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&round_value(v)).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Write JSON to `path`, or to stdout when no path is given.
pub fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let text = to_json(value)?;
    match path {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Same text as the JSON reports use for a float.
fn csv_float(x: f64) -> String {
    serde_json::Number::from_f64(round_sig(x))
        .map(|n| n.to_string())
        .unwrap_or_else(|| "nan".into())
}

pub fn decay_csv(rec: &RbRecord) -> String {
    let mut s = String::from("m,mean_fidelity,stderr\n");
    for ((m, f), e) in rec.m_values.iter().zip(&rec.mean_fidelity).zip(&rec.stderr) {
        s.push_str(&format!("{m},{},{}\n", csv_float(*f), csv_float(*e)));
    }
    s
}

/// `<dir>/<stem>_<variant>.csv` next to the JSON report.
pub fn csv_path(output: Option<&Path>, variant: &str) -> PathBuf {
    let (dir, stem) = match output {
        Some(p) => (
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "rb".into()),
        ),
        None => (PathBuf::new(), "rb".into()),
    };
    dir.join(format!("{stem}_{variant}.csv"))
}
