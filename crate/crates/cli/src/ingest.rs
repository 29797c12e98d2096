// SPDX-License-Identifier: MIT OR Apache-2.0

//! Numeric CSV ingestion.

use std::path::Path;

use segwise_core::Series;

use crate::error::{CliError, CliResult};

/// A parsed series plus what was skipped on the way.
#[derive(Clone, Debug, PartialEq)]
pub struct Ingested {
    pub series: Series,
    pub header: Option<Vec<String>>,
    /// Rows dropped for empty fields or NA/NaN tokens.
    pub dropped_rows: usize,
}

fn is_missing(field: &str) -> bool {
    field.is_empty() || field.eq_ignore_ascii_case("na") || field.eq_ignore_ascii_case("nan")
}

enum Field {
    Value(f64),
    Missing,
    Text,
}

fn classify(field: &str) -> Field {
    if is_missing(field) {
        return Field::Missing;
    }
    match field.parse::<f64>() {
        Ok(v) => Field::Value(v),
        Err(_) => Field::Text,
    }
}

pub fn ingest_csv(path: &Path) -> CliResult<Ingested> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    ingest_bytes(&bytes)
}

/// Parses comma-separated rows. A first row with a non-numeric field is a
/// header; columns define the dimension.
pub fn ingest_bytes(bytes: &[u8]) -> CliResult<Ingested> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let mut header = None;
    let mut width: Option<usize> = None;
    let mut values = Vec::new();
    let mut rows = 0usize;
    let mut dropped_rows = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(idx as u64 + 1, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let fields: Vec<Field> = record.iter().map(classify).collect();
        if fields.iter().any(|f| matches!(f, Field::Text)) {
            if idx == 0 {
                header = Some(record.iter().map(str::to_owned).collect::<Vec<_>>());
                width = Some(record.len());
                continue;
            }
            return Err(CliError::Input(format!("line {line}: non-numeric field")));
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(CliError::Input(format!(
                    "line {line}: expected {w} fields, found {}",
                    record.len()
                )));
            }
            Some(_) => {}
        }
        if fields.iter().any(|f| matches!(f, Field::Missing)) {
            dropped_rows += 1;
            continue;
        }
        for f in fields {
            if let Field::Value(v) = f {
                if !v.is_finite() {
                    return Err(CliError::Input(format!("line {line}: non-finite value")));
                }
                values.push(v);
            }
        }
        rows += 1;
    }

    if rows == 0 {
        return Err(CliError::Input("no parseable numeric rows".into()));
    }
    let d = width.expect("at least one row");
    let series = Series::new(values, rows, d)?;
    Ok(Ingested { series, header, dropped_rows })
}
