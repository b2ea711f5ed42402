//! Reading input files.
//!
//! `.json` is a dataset document, `.csv` and `.tsv` are tabular datasets
//! (schema chosen by header), anything else is a numeric column: one value
//! per line, blank lines and `#` comments ignored.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use alphaindex::ingest::{read_dataset, read_tabular, IngestReport};
use alphaindex::Dataset;

use crate::CliError;

pub enum Input {
    Dataset(Dataset),
    Column(Vec<f64>),
}

enum Kind {
    Json,
    Tabular(u8),
    Column,
}

fn kind(path: &Path, tab: bool) -> Kind {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => Kind::Json,
        Some("tsv") => Kind::Tabular(b'\t'),
        Some("csv") => Kind::Tabular(if tab { b'\t' } else { b',' }),
        _ => Kind::Column,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        let msg = format!("cannot read {}: {e}", path.display());
        if e.kind() == ErrorKind::InvalidData {
            CliError::invalid(msg)
        } else {
            CliError::io(msg)
        }
    })
}

/// Ingests a dataset file without judging the result. Files that are not
/// `.json` or `.csv`/`.tsv` are read as tabular text.
pub fn ingest(path: &Path, tab: bool) -> Result<IngestReport, CliError> {
    let text = read_text(path)?;
    Ok(match kind(path, tab) {
        Kind::Json => read_dataset(&text),
        Kind::Tabular(d) => read_tabular(text.as_bytes(), d),
        Kind::Column => read_tabular(text.as_bytes(), if tab { b'\t' } else { b',' }),
    })
}

fn accept(report: IngestReport, path: &Path, warnings: &mut Vec<String>) -> Result<Dataset, CliError> {
    warnings.extend(report.warnings);
    match report.dataset {
        Some(d) if report.errors.is_empty() => Ok(d),
        _ => Err(CliError::invalid(format!(
            "{} is not a valid dataset:\n  {}",
            path.display(),
            report.errors.join("\n  ")
        ))),
    }
}

pub fn load_dataset(path: &Path, tab: bool, warnings: &mut Vec<String>) -> Result<Dataset, CliError> {
    let dataset = accept(ingest(path, tab)?, path, warnings)?;
    if dataset.is_empty() {
        return Err(CliError::invalid(format!("{} contains no groups", path.display())));
    }
    Ok(dataset)
}

pub fn load_input(path: &Path, tab: bool, warnings: &mut Vec<String>) -> Result<Input, CliError> {
    match kind(path, tab) {
        Kind::Column => parse_column(&read_text(path)?, path).map(Input::Column),
        _ => load_dataset(path, tab, warnings).map(Input::Dataset),
    }
}

fn parse_column(text: &str, path: &Path) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let token = line.split([',', '\t', ' ']).next().unwrap_or("");
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(CliError::invalid(format!(
                    "{}: line {}: `{token}` is not a finite number",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::invalid(format!("{} contains no values", path.display())));
    }
    Ok(values)
}
