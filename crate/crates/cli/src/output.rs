//! CSV, JSON and PGM writers.

use std::path::Path;

use crate::error::{out_err, CliError};

/// Formats a real with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header and rows of preformatted fields.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let csv_err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(out_err(path))
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(out_err(path))
}

/// Row-major image as `(row, col, value)` records.
pub fn write_image_csv(path: &Path, width: usize, data: &[f64]) -> Result<(), CliError> {
    write_csv(
        path,
        &["row", "col", "value"],
        data.iter()
            .enumerate()
            .map(|(p, &v)| vec![(p / width).to_string(), (p % width).to_string(), real(v)]),
    )
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(out_err(path))
}
