//! JSON input and output.
//!
//! Matrices are row-major arrays of rows, each entry a `[re, im]` pair.

use std::fs;
use std::path::Path;

use kchi_core::denselin::CMatrix;
use kchi_core::{Error, Result};
use serde_json::Value;

/// Reads a matrix file; any I/O or format problem is a domain error.
pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

pub fn finite_matrix(a: &CMatrix) -> Result<Value> {
    a.check_finite()?;
    Ok(serde_json::to_value(a).expect("finite matrices serialize"))
}

/// Rejects documents containing `null` where a number was expected.
///
/// `serde_json` writes non-finite floats as `null`, so the only nulls allowed
/// are optional fields listed here.
pub fn finite_document(doc: Value) -> Result<Value> {
    fn walk(v: &Value, key: &str) -> bool {
        match v {
            Value::Null => OPTIONAL_FIELDS.contains(&key),
            Value::Array(xs) => xs.iter().all(|x| walk(x, key)),
            Value::Object(map) => map.iter().all(|(k, x)| walk(x, k)),
            _ => true,
        }
    }
    if walk(&doc, "") {
        Ok(doc)
    } else {
        Err(Error::Numeric("non-finite value in output".into()))
    }
}

const OPTIONAL_FIELDS: &[&str] = &["imm_bound"];

/// Pretty JSON with a trailing newline, to `path` or `stdout`.
pub fn emit<W: std::io::Write>(
    doc: &Value,
    path: Option<&Path>,
    stdout: &mut W,
) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}
