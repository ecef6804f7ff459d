//! On-disk document formats. All files are JSON; floats are written in
//! shortest round-trip form, so reading a file back reproduces the
//! exact bit pattern that was serialized.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use sicrep::hermitian::PureState;
use sicrep::representation::{ConditionalMatrix, ProbVector};

use crate::CliError;

/// Fiducial vector document: `{dim, amplitudes: [[re, im], ...],
/// potential, deviation}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FiducialFile {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
    pub potential: f64,
    pub deviation: f64,
}

impl FiducialFile {
    pub fn from_state(state: &PureState, potential: f64, deviation: f64) -> Self {
        Self {
            dim: state.dim(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            potential,
            deviation,
        }
    }

    pub fn to_state(&self) -> Result<PureState, CliError> {
        if self.amplitudes.len() != self.dim {
            return Err(CliError::Io(format!(
                "fiducial file lists {} amplitudes for dimension {}",
                self.amplitudes.len(),
                self.dim
            )));
        }
        PureState::new(
            self.amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| CliError::Io(format!("fiducial file invalid: {e}")))
    }
}

/// Probability vector document: `{n, entries}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProbVectorFile {
    pub n: usize,
    pub entries: Vec<f64>,
}

impl ProbVectorFile {
    pub fn to_probs(&self) -> Result<ProbVector, CliError> {
        if self.entries.len() != self.n {
            return Err(CliError::Io(format!(
                "probability file lists {} entries for n = {}",
                self.entries.len(),
                self.n
            )));
        }
        ProbVector::new(self.entries.clone())
            .map_err(|e| CliError::Io(format!("probability file invalid: {e}")))
    }
}

/// Conditional matrix document: `{m, n, rows}` with rows[j][i] = r(j|i).
#[derive(Debug, Serialize, Deserialize)]
pub struct ConditionalMatrixFile {
    pub m: usize,
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl ConditionalMatrixFile {
    pub fn to_matrix(&self) -> Result<ConditionalMatrix, CliError> {
        if self.rows.len() != self.m || self.rows.iter().any(|row| row.len() != self.n) {
            return Err(CliError::Io(
                "conditional file shape disagrees with (m, n)".into(),
            ));
        }
        ConditionalMatrix::new(self.rows.clone())
            .map_err(|e| CliError::Io(format!("conditional file invalid: {e}")))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("cannot parse {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
