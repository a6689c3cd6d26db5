//! Plot-data tables: one CSV row per bar, columns `series,label,x,y,err`.

use std::path::Path;

use serde::Serialize;

use crate::error::FileError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotRow {
    pub series: String,
    pub label: String,
    pub x: f64,
    pub y: f64,
    /// One-sigma error bar, empty when not applicable.
    pub err: Option<f64>,
}

impl PlotRow {
    pub fn new(series: &str, label: &str, x: f64, y: f64) -> Self {
        PlotRow { series: series.to_owned(), label: label.to_owned(), x, y, err: None }
    }

    pub fn with_err(series: &str, label: &str, x: f64, y: f64, err: f64) -> Self {
        PlotRow { err: Some(err), ..Self::new(series, label, x, y) }
    }
}

pub fn to_csv(rows: &[PlotRow]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(w.into_inner().expect("flushed"))
}

pub fn write_csv(path: &Path, rows: &[PlotRow]) -> Result<(), FileError> {
    let bytes =
        to_csv(rows).map_err(|e| FileError::Parse { path: path.to_path_buf(), line: None, message: e.to_string() })?;
    std::fs::write(path, bytes).map_err(|source| FileError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_quoting() {
        let rows = [PlotRow::new("rho_re", "00,01", 1.0, 0.5), PlotRow::with_err("f", "x", 0.0, 0.9, 0.01)];
        let text = String::from_utf8(to_csv(&rows).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "series,label,x,y,err");
        assert_eq!(lines[1], "rho_re,\"00,01\",1.0,0.5,");
        assert_eq!(lines[2], "f,x,0.0,0.9,0.01");
    }
}
