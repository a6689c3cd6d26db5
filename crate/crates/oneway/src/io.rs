//! On-disk formats.
//!
//! * density matrix: `{"n": int, "rho": [[[re, im], ...], ...]}`, row-major;
//! * count records: JSON lines `{"bases": "ZXYX", "counts": [...]}`, outcome
//!   patterns in binary order with qubit 1 most significant;
//! * graph: `{"n": int, "edges": [[i, j], ...]}`, zero-based labels;
//! * timing configuration: `{"budget": {...}, "pipeline": {...}}`, any field
//!   may be omitted and falls back to its default.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use oneway_core::density::Tolerances;
use oneway_core::timing::{LatencyBudget, PipelineSpec};
use oneway_core::tomography::CountRecord;
use oneway_core::{DensityMatrix, GraphSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::FileError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FileError + '_ {
    move |source| FileError::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: Option<usize>, e: impl std::fmt::Display) -> FileError {
    FileError::Parse { path: path.to_path_buf(), line, message: e.to_string() }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, Some(e.line()), e))
}

/// Serializes `value` as pretty JSON followed by a newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), FileError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| parse_err(path, None, e))?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Reads and validates a density matrix with the file tolerances
/// (Hermiticity 1e−8, eigenvalues ≥ −1e−8, trace 1 ± 1e−8).
pub fn load_density(path: &Path) -> Result<DensityMatrix, FileError> {
    let rho: DensityMatrix = read_json(path)?;
    rho.validate(Tolerances::FILE).map_err(|source| FileError::Invalid { path: path.to_path_buf(), source })?;
    Ok(rho)
}

pub fn save_density(path: &Path, rho: &DensityMatrix) -> Result<(), FileError> {
    write_json(path, rho)
}

pub fn read_count_records(path: &Path) -> Result<Vec<CountRecord>, FileError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| parse_err(path, Some(i + 1), e))?);
    }
    Ok(out)
}

pub fn write_count_records(path: &Path, records: &[CountRecord]) -> Result<(), FileError> {
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, r).map_err(|e| parse_err(path, None, e))?;
        buf.push(b'\n');
    }
    fs::File::create(path).and_then(|mut f| f.write_all(&buf)).map_err(io_err(path))
}

pub fn load_graph(path: &Path) -> Result<GraphSpec, FileError> {
    read_json(path)
}

pub fn save_graph(path: &Path, g: &GraphSpec) -> Result<(), FileError> {
    write_json(path, g)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimingConfig {
    pub budget: LatencyBudget,
    pub pipeline: PipelineSpec,
}

pub fn load_timing_config(path: &Path) -> Result<TimingConfig, FileError> {
    read_json(path)
}
