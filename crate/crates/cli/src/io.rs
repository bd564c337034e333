//! File formats: probability matrix CSV with a JSON sidecar, state CSV,
//! run-length CSV and the weight file.
//!
//! The matrix CSV is headerless, T rows of L comma-separated decimals; the
//! metadata (sample rate, state names) lives in a sidecar JSON next to it
//! with the `.csv` suffix swapped for `.json`. State CSVs carry one integer
//! per line. Floats are written in Rust's shortest round-trip notation, so
//! write-then-read is lossless.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cycleseg::lstm::{DirectionWeights, LstmWeights, Matrix};
use cycleseg::types::ProbabilityMatrix;

use crate::error::{CliError, Result};

// ---------------------------------------------------------------------------
// Sidecar metadata
// ---------------------------------------------------------------------------

/// Sidecar JSON next to a matrix CSV.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Sidecar {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_names: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bursts: Option<Vec<BurstInfo>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BurstInfo {
    pub start_s: f64,
    pub length_s: f64,
    pub lambda: f64,
}

/// `foo.csv` -> `foo.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn read_sidecar(csv_path: &Path) -> Result<Option<Sidecar>> {
    let path = sidecar_path(csv_path);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(CliError::io(&path))?;
    let sidecar = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.clone(),
        line: e.line(),
        detail: e.to_string(),
    })?;
    Ok(Some(sidecar))
}

pub fn write_sidecar(csv_path: &Path, sidecar: &Sidecar) -> Result<()> {
    let path = sidecar_path(csv_path);
    let text = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    fs::write(&path, text).map_err(CliError::io(&path))
}

// ---------------------------------------------------------------------------
// Matrix CSV
// ---------------------------------------------------------------------------

/// Read a probability matrix; the sample rate comes from `rate_override`,
/// else the sidecar, else stays unknown.
pub fn read_matrix(path: &Path, rate_override: Option<f64>) -> Result<ProbabilityMatrix> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = line
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect();
        let row = row.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: format!("bad number: {e}"),
        })?;
        rows.push(row);
    }
    let rate = match rate_override {
        Some(r) => Some(r),
        None => read_sidecar(path)?.and_then(|s| s.rate_hz),
    };
    Ok(ProbabilityMatrix::new(rows, rate)?)
}

pub fn write_matrix(path: &Path, p: &ProbabilityMatrix) -> Result<()> {
    let mut text = String::new();
    for row in p.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(CliError::io(path))
}

// ---------------------------------------------------------------------------
// State CSV
// ---------------------------------------------------------------------------

pub fn read_states(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut states = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let state = trimmed.parse::<usize>().map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: format!("bad state index: {e}"),
        })?;
        states.push(state);
    }
    Ok(states)
}

pub fn write_states(path: &Path, states: &[usize]) -> Result<()> {
    let mut text = String::with_capacity(states.len() * 2);
    for s in states {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    fs::write(path, text).map_err(CliError::io(path))
}

/// Run-length annotation rows `start,end,state` (end inclusive).
pub fn write_runs(path: &Path, states: &[usize]) -> Result<()> {
    let mut text = String::new();
    for event in cycleseg::metrics::extract_events(states, None) {
        text.push_str(&format!("{},{},{}\n", event.start, event.end, event.state));
    }
    fs::write(path, text).map_err(CliError::io(path))
}

// ---------------------------------------------------------------------------
// Feature CSV
// ---------------------------------------------------------------------------

pub fn read_features(path: &Path) -> Result<cycleseg::lstm::FeatureSequence> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = line
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect();
        let row = row.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: format!("bad number: {e}"),
        })?;
        rows.push(row);
    }
    Ok(cycleseg::lstm::FeatureSequence::new(rows)?)
}

// ---------------------------------------------------------------------------
// Weight file
// ---------------------------------------------------------------------------

/// JSON weight file. Keys: `features` (N), `memory` (M), `states` (L),
/// `forward`/`backward` direction blocks with `w_xi`, `w_xf`, `w_xo`,
/// `w_xj` (M x N), `w_hi`, `w_hf`, `w_ho`, `w_hj` (M x M), `b_i`, `b_f`,
/// `b_o`, `b_j` (length M), and the shared `w_out` (L x 2M).
#[derive(Debug, Serialize, Deserialize)]
pub struct WeightsFile {
    pub features: usize,
    pub memory: usize,
    pub states: usize,
    pub forward: DirectionFile,
    pub backward: DirectionFile,
    pub w_out: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DirectionFile {
    pub w_xi: Vec<Vec<f64>>,
    pub w_xf: Vec<Vec<f64>>,
    pub w_xo: Vec<Vec<f64>>,
    pub w_xj: Vec<Vec<f64>>,
    pub w_hi: Vec<Vec<f64>>,
    pub w_hf: Vec<Vec<f64>>,
    pub w_ho: Vec<Vec<f64>>,
    pub w_hj: Vec<Vec<f64>>,
    pub b_i: Vec<f64>,
    pub b_f: Vec<f64>,
    pub b_o: Vec<f64>,
    pub b_j: Vec<f64>,
}

fn direction_from_file(dir: DirectionFile) -> Result<DirectionWeights> {
    Ok(DirectionWeights {
        w_xi: Matrix::from_rows(dir.w_xi)?,
        w_xf: Matrix::from_rows(dir.w_xf)?,
        w_xo: Matrix::from_rows(dir.w_xo)?,
        w_xj: Matrix::from_rows(dir.w_xj)?,
        w_hi: Matrix::from_rows(dir.w_hi)?,
        w_hf: Matrix::from_rows(dir.w_hf)?,
        w_ho: Matrix::from_rows(dir.w_ho)?,
        w_hj: Matrix::from_rows(dir.w_hj)?,
        b_i: dir.b_i,
        b_f: dir.b_f,
        b_o: dir.b_o,
        b_j: dir.b_j,
    })
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn direction_to_file(dir: &DirectionWeights) -> DirectionFile {
    DirectionFile {
        w_xi: matrix_rows(&dir.w_xi),
        w_xf: matrix_rows(&dir.w_xf),
        w_xo: matrix_rows(&dir.w_xo),
        w_xj: matrix_rows(&dir.w_xj),
        w_hi: matrix_rows(&dir.w_hi),
        w_hf: matrix_rows(&dir.w_hf),
        w_ho: matrix_rows(&dir.w_ho),
        w_hj: matrix_rows(&dir.w_hj),
        b_i: dir.b_i.clone(),
        b_f: dir.b_f.clone(),
        b_o: dir.b_o.clone(),
        b_j: dir.b_j.clone(),
    }
}

pub fn read_weights(path: &Path) -> Result<LstmWeights> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let file: WeightsFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        detail: e.to_string(),
    })?;
    let weights = LstmWeights::new(
        direction_from_file(file.forward)?,
        direction_from_file(file.backward)?,
        Matrix::from_rows(file.w_out)?,
    )?;
    let declared = (file.features, file.memory, file.states);
    let actual = (weights.features(), weights.memory(), weights.states());
    if declared != actual {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: 0,
            detail: format!("declared dims {declared:?} do not match matrices {actual:?}"),
        });
    }
    Ok(weights)
}

pub fn write_weights(path: &Path, weights: &LstmWeights) -> Result<()> {
    let file = WeightsFile {
        features: weights.features(),
        memory: weights.memory(),
        states: weights.states(),
        forward: direction_to_file(&weights.forward),
        backward: direction_to_file(&weights.backward),
        w_out: matrix_rows(&weights.w_out),
    };
    let text = serde_json::to_string(&file).expect("weights serialize");
    fs::write(path, text).map_err(CliError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let p = ProbabilityMatrix::new(
            vec![
                vec![1.0 / 3.0, 2.0 / 3.0],
                vec![0.123456789012345, 0.876543210987655],
            ],
            Some(50.0),
        )
        .unwrap();
        write_matrix(&path, &p).unwrap();
        write_sidecar(
            &path,
            &Sidecar {
                rate_hz: Some(50.0),
                ..Default::default()
            },
        )
        .unwrap();
        let back = read_matrix(&path, None).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn states_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let states = vec![0usize, 0, 1, 2, 3, 0];
        write_states(&path, &states).unwrap();
        assert_eq!(read_states(&path).unwrap(), states);
    }

    #[test]
    fn weights_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        let weights = LstmWeights::seeded_uniform(3, 4, 2, 77);
        write_weights(&path, &weights).unwrap();
        let back = read_weights(&path).unwrap();
        assert_eq!(weights, back);
    }

    #[test]
    fn parse_errors_name_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        fs::write(&path, "0.5,0.5\n0.5,oops\n").unwrap();
        let err = read_matrix(&path, None).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("p.csv"), "{message}");
        assert!(message.contains(":2:"), "{message}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn invalid_matrix_is_a_domain_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        fs::write(&path, "0.9,0.3\n").unwrap();
        let err = read_matrix(&path, None).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn run_length_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        write_runs(&path, &[0, 0, 1, 1, 1, 2]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "0,1,0\n2,4,1\n5,5,2\n");
    }
}
