//! Matrix documents in Matrix Market array form and in the JSON schema
//! `{"rows": N, "cols": N, "entries": [[re, im], ...]}` (row-major).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::lacore::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    MatrixMarket,
    Json,
}

impl SourceFormat {
    /// Guess from the file extension, then from the first non-blank bytes.
    pub fn detect(path: Option<&Path>, text: &str) -> SourceFormat {
        if let Some(ext) = path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            match ext.to_ascii_lowercase().as_str() {
                "mtx" | "mm" => return SourceFormat::MatrixMarket,
                "json" => return SourceFormat::Json,
                _ => {}
            }
        }
        if text.trim_start().starts_with('%') {
            SourceFormat::MatrixMarket
        } else {
            SourceFormat::Json
        }
    }
}

/// A parsed matrix with its source format and free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub format: SourceFormat,
    pub matrix: ComplexMatrix,
    pub metadata: BTreeMap<String, String>,
}

impl MatrixDocument {
    pub fn new(format: SourceFormat, matrix: ComplexMatrix) -> Self {
        Self { format, matrix, metadata: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {message}")]
    Header { line: usize, message: String },

    #[error("line {line}: malformed size line: {message}")]
    Size { line: usize, message: String },

    #[error("line {line}: invalid number {token:?}")]
    Number { line: usize, token: String },

    #[error("line {line}: non-finite value {token:?}")]
    NonFinite { line: usize, token: String },

    #[error("entry count mismatch: expected {expected} values, found {found} (line {line})")]
    EntryCount { expected: usize, found: usize, line: usize },

    #[error("line {line}, column {column}: invalid JSON: {message}")]
    Json { line: usize, column: usize, message: String },

    #[error("JSON schema: {0}")]
    Schema(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

/// Reads a matrix from `path`, detecting the format when `format` is `None`.
pub fn parse_matrix_file(path: &Path, format: Option<SourceFormat>) -> Result<MatrixDocument, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let format = format.unwrap_or_else(|| SourceFormat::detect(Some(path), &text));
    parse_matrix(&text, format)
}

pub fn parse_matrix(text: &str, format: SourceFormat) -> Result<MatrixDocument, ParseError> {
    match format {
        SourceFormat::MatrixMarket => parse_matrix_market(text),
        SourceFormat::Json => parse_json(text),
    }
}

/// Dense `array` Matrix Market input. Values are column-major; the
/// symmetric, skew-symmetric and hermitian storage schemes list only the
/// lower triangle (without the diagonal for skew-symmetric).
pub fn parse_matrix_market(text: &str) -> Result<MatrixDocument, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or(ParseError::Header { line: 1, message: "empty input".into() })?;
    let (field, symmetry) = parse_header(hline, header)?;

    let mut metadata = BTreeMap::new();
    let mut size = None;
    for (no, line) in lines.by_ref() {
        let t = line.trim();
        if let Some(comment) = t.strip_prefix('%') {
            if let Some((k, v)) = comment.split_once(':') {
                let k = k.trim();
                if !k.is_empty() && !k.contains(char::is_whitespace) {
                    metadata.insert(k.to_string(), v.trim().to_string());
                }
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(ParseError::Size { line: no, message: format!("expected 2 integers, found {} tokens", parts.len()) });
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ParseError::Size { line: no, message: format!("{s:?} is not a non-negative integer") })
        };
        size = Some((parse(parts[0])?, parse(parts[1])?, no));
        break;
    }
    let (rows, cols, size_line) = size.ok_or(ParseError::Size { line: 0, message: "missing size line".into() })?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(ParseError::Size { line: size_line, message: format!("{rows}x{cols} cannot use a symmetric storage scheme") });
    }

    let stored: Vec<(usize, usize)> = (0..cols)
        .flat_map(|j| (0..rows).map(move |i| (i, j)))
        .filter(|&(i, j)| match symmetry {
            Symmetry::General => true,
            Symmetry::Symmetric | Symmetry::Hermitian => i >= j,
            Symmetry::SkewSymmetric => i > j,
        })
        .collect();
    let per_entry = if field == Field::Complex { 2 } else { 1 };
    let expected = stored.len() * per_entry;

    let mut values = Vec::with_capacity(expected);
    let mut last_line = size_line;
    for (no, line) in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        last_line = no;
        for token in t.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| ParseError::Number { line: no, token: token.to_string() })?;
            if !v.is_finite() {
                return Err(ParseError::NonFinite { line: no, token: token.to_string() });
            }
            values.push(v);
        }
    }
    if values.len() != expected {
        return Err(ParseError::EntryCount { expected, found: values.len(), line: last_line });
    }

    let mut m = ComplexMatrix::zeros(rows, cols);
    for (k, &(i, j)) in stored.iter().enumerate() {
        let z = match field {
            Field::Complex => Complex64::new(values[2 * k], values[2 * k + 1]),
            Field::Real => Complex64::new(values[k], 0.0),
        };
        m[(i, j)] = z;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = z,
                Symmetry::SkewSymmetric => m[(j, i)] = -z,
                Symmetry::Hermitian => m[(j, i)] = z.conj(),
            }
        }
    }
    Ok(MatrixDocument { format: SourceFormat::MatrixMarket, matrix: m, metadata })
}

fn parse_header(line: usize, header: &str) -> Result<(Field, Symmetry), ParseError> {
    let err = |message: String| ParseError::Header { line, message };
    let words: Vec<String> = header.split_whitespace().map(|w| w.to_ascii_lowercase()).collect();
    if words.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(err("first line must start with %%MatrixMarket".into()));
    }
    if words.len() != 5 {
        return Err(err(format!("expected 4 qualifiers, found {}", words.len() - 1)));
    }
    if words[1] != "matrix" {
        return Err(err(format!("unsupported object {:?}", words[1])));
    }
    if words[2] != "array" {
        return Err(err(format!("unsupported layout {:?}, only dense \"array\" is read", words[2])));
    }
    let field = match words[3].as_str() {
        "complex" => Field::Complex,
        "real" | "integer" | "double" => Field::Real,
        other => return Err(err(format!("unsupported field {other:?}"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" if field == Field::Complex => Symmetry::Hermitian,
        other => return Err(err(format!("unsupported symmetry {other:?}"))),
    };
    Ok((field, symmetry))
}

pub fn parse_json(text: &str) -> Result<MatrixDocument, ParseError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| ParseError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    let obj = value.as_object().ok_or_else(|| ParseError::Schema("top level must be an object".into()))?;
    let dim = |key: &str| {
        obj.get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| ParseError::Schema(format!("\"{key}\" must be a non-negative integer")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Schema("\"entries\" must be an array".into()))?;
    if entries.len() != rows * cols {
        return Err(ParseError::EntryCount { expected: rows * cols, found: entries.len(), line: 0 });
    }
    let mut data = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        let z = json_complex(e).ok_or_else(|| ParseError::Schema(format!("entry {k} must be [re, im] or a number")))?;
        data.push(z);
    }
    let matrix = ComplexMatrix::new(rows, cols, data).map_err(|e| ParseError::Schema(e.to_string()))?;

    let mut metadata = BTreeMap::new();
    if let Some(meta) = obj.get("metadata") {
        let meta = meta.as_object().ok_or_else(|| ParseError::Schema("\"metadata\" must be an object".into()))?;
        for (k, v) in meta {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            metadata.insert(k.clone(), s);
        }
    }
    Ok(MatrixDocument { format: SourceFormat::Json, matrix, metadata })
}

fn json_complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?)),
        _ => None,
    }
}

/// Matrix Market `array complex general`, metadata as `% key: value`.
/// Values use the shortest representation that reads back bit-exactly.
pub fn write_matrix_market(doc: &MatrixDocument) -> String {
    let m = &doc.matrix;
    let mut out = String::from("%%MatrixMarket matrix array complex general\n");
    for (k, v) in &doc.metadata {
        let _ = writeln!(out, "% {k}: {v}");
    }
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m[(i, j)];
            let _ = writeln!(out, "{:?} {:?}", z.re, z.im);
        }
    }
    out
}

pub fn write_json(doc: &MatrixDocument) -> String {
    let m = &doc.matrix;
    let mut obj = Map::new();
    obj.insert("rows".into(), Value::from(m.rows()));
    obj.insert("cols".into(), Value::from(m.cols()));
    let entries = m.as_slice().iter().map(|z| super::output::exact_complex(*z)).collect();
    obj.insert("entries".into(), Value::Array(entries));
    if !doc.metadata.is_empty() {
        let meta = doc.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        obj.insert("metadata".into(), Value::Object(meta));
    }
    let mut s = serde_json::to_string(&Value::Object(obj)).expect("serializable");
    s.push('\n');
    s
}

pub fn write_matrix(doc: &MatrixDocument, format: SourceFormat) -> String {
    match format {
        SourceFormat::MatrixMarket => write_matrix_market(doc),
        SourceFormat::Json => write_json(doc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lacore::c64;

    const SKEW_MM: &str = "%%MatrixMarket matrix array complex general\n2 2\n0 0\n-1 0\n1 0\n0 0\n";

    #[test]
    fn matrix_market_is_column_major() {
        let doc = parse_matrix(SKEW_MM, SourceFormat::MatrixMarket).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert_eq!(doc.matrix, expect);
    }

    #[test]
    fn json_single_entry() {
        let doc = parse_matrix(r#"{"rows":1,"cols":1,"entries":[[2,-3]]}"#, SourceFormat::Json).unwrap();
        assert_eq!(doc.matrix[(0, 0)], c64(2.0, -3.0));
    }

    #[test]
    fn truncated_input_names_counts() {
        let text = "%%MatrixMarket matrix array complex general\n2 2\n0 0\n-1 0\n1 0\n";
        let err = parse_matrix(text, SourceFormat::MatrixMarket).unwrap_err();
        assert_eq!(err, ParseError::EntryCount { expected: 8, found: 6, line: 5 });
        assert!(err.to_string().contains("expected 8 values, found 6"));

        let err = parse_matrix(r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#, SourceFormat::Json).unwrap_err();
        assert!(matches!(err, ParseError::EntryCount { expected: 4, found: 1, .. }));
    }

    #[test]
    fn distinct_errors() {
        let bad_header = parse_matrix("%%MatrixMarket matrix coordinate complex general\n", SourceFormat::MatrixMarket);
        assert!(matches!(bad_header, Err(ParseError::Header { line: 1, .. })));
        let nan = parse_matrix("%%MatrixMarket matrix array real general\n1 1\nnan\n", SourceFormat::MatrixMarket);
        assert!(matches!(nan, Err(ParseError::NonFinite { line: 3, .. })));
        let junk = parse_matrix("%%MatrixMarket matrix array real general\n1 1\n1.0x\n", SourceFormat::MatrixMarket);
        assert!(matches!(junk, Err(ParseError::Number { line: 3, .. })));
        let json = parse_matrix("{\"rows\": 1,\n \"cols\": }", SourceFormat::Json);
        assert!(matches!(json, Err(ParseError::Json { line: 2, .. })));
    }

    #[test]
    fn storage_schemes() {
        let skew = "%%MatrixMarket matrix array real skew-symmetric\n3 3\n1\n2\n3\n";
        let m = parse_matrix(skew, SourceFormat::MatrixMarket).unwrap().matrix;
        assert_eq!(m.skew_residual(), 0.0);
        assert_eq!(m[(2, 1)], c64(3.0, 0.0));
        assert_eq!(m[(1, 2)], c64(-3.0, 0.0));

        let herm = "%%MatrixMarket matrix array complex hermitian\n2 2\n1 0\n2 5\n3 0\n";
        let m = parse_matrix(herm, SourceFormat::MatrixMarket).unwrap().matrix;
        assert_eq!(m[(0, 1)], c64(2.0, -5.0));
    }

    #[test]
    fn metadata_survives_round_trip() {
        let mut doc = MatrixDocument::new(
            SourceFormat::Json,
            ComplexMatrix::from_rows(&[vec![c64(0.1, -1.0 / 3.0), c64(1e-300, 2.5e10)], vec![c64(-0.0, 7.0), c64(1.0, 0.0)]]),
        );
        doc.metadata.insert("seed".into(), "17".into());
        for fmt in [SourceFormat::Json, SourceFormat::MatrixMarket] {
            let back = parse_matrix(&write_matrix(&doc, fmt), fmt).unwrap();
            assert_eq!(back.matrix, doc.matrix);
            assert_eq!(back.metadata, doc.metadata);
        }
    }
}
