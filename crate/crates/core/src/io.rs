//! JSON matrix files: `{"n": 2, "entries": [[[q0,q1,q2,q3], ...], ...]}`, row-major.

use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use crate::qmat::QMatrix;
use crate::quat::Quaternion;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("top level is not a JSON object")]
    NotObject,
    #[error("field \"{0}\" absent")]
    MissingField(&'static str),
    #[error("field \"n\" is not a non-negative integer")]
    BadDimension,
    #[error("field \"entries\" is not an array")]
    EntriesNotArray,
    #[error("entries has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} is not an array")]
    RowNotArray { row: usize },
    #[error("entry ({row},{col}) absent")]
    EntryAbsent { row: usize, col: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    ExtraEntries {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) is not an array")]
    EntryNotArray { row: usize, col: usize },
    #[error("entry ({row},{col}) has {found} components, expected 4")]
    ComponentCount { row: usize, col: usize, found: usize },
    #[error("entry ({row},{col}) component {component} is not a finite number")]
    BadComponent {
        row: usize,
        col: usize,
        component: usize,
    },
}

/// Reads and validates a matrix file.
pub fn parse_matrix(path: impl AsRef<Path>) -> Result<QMatrix, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix_str(&text)
}

pub fn parse_matrix_str(text: &str) -> Result<QMatrix, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_matrix_value(&doc)
}

pub fn parse_matrix_value(doc: &Value) -> Result<QMatrix, ParseError> {
    let obj = doc.as_object().ok_or(ParseError::NotObject)?;
    let n = obj.get("n").ok_or(ParseError::MissingField("n"))?;
    let n = n.as_u64().ok_or(ParseError::BadDimension)? as usize;
    let rows = obj.get("entries").ok_or(ParseError::MissingField("entries"))?;
    let rows = rows.as_array().ok_or(ParseError::EntriesNotArray)?;
    if rows.len() != n {
        return Err(ParseError::RowCount {
            expected: n,
            found: rows.len(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    for (row, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or(ParseError::RowNotArray { row })?;
        if r.len() > n {
            return Err(ParseError::ExtraEntries {
                row,
                expected: n,
                found: r.len(),
            });
        }
        for col in 0..n {
            let e = r.get(col).ok_or(ParseError::EntryAbsent { row, col })?;
            data.push(parse_entry(e, row, col)?);
        }
    }
    Ok(QMatrix::from_row_major(n, data).expect("n*n entries"))
}

fn parse_entry(e: &Value, row: usize, col: usize) -> Result<Quaternion, ParseError> {
    let c = e.as_array().ok_or(ParseError::EntryNotArray { row, col })?;
    if c.len() != 4 {
        return Err(ParseError::ComponentCount {
            row,
            col,
            found: c.len(),
        });
    }
    let mut q = [0.0; 4];
    for (component, v) in c.iter().enumerate() {
        q[component] = v
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or(ParseError::BadComponent {
                row,
                col,
                component,
            })?;
    }
    Ok(Quaternion::from(q))
}

pub fn matrix_to_value(a: &QMatrix) -> Value {
    let entries: Vec<Vec<[f64; 4]>> = a
        .rows()
        .map(|r| r.iter().map(|q| q.to_array()).collect())
        .collect();
    json!({ "n": a.dim(), "entries": entries })
}

pub fn matrix_to_json(a: &QMatrix) -> String {
    serde_json::to_string_pretty(&matrix_to_value(a)).expect("finite matrix")
}
