//! Domain types shared by every decoder: validated probability matrices,
//! the cyclic transition model, and decoded-sequence results.
//!
//! All types are immutable after construction and safe to share between
//! concurrent workers.

use crate::error::{Error, Result};

/// Tolerance for accepting a probability row as normalized. Rows whose sum
/// deviates from 1 by more than this are rejected rather than silently
/// rescaled, so the input stays auditable.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

// ---------------------------------------------------------------------------
// ProbabilityMatrix
// ---------------------------------------------------------------------------

/// A validated T×L matrix of per-sample state probabilities.
///
/// Row `t` is the output distribution over the `L` states at sample `t`.
/// Construction checks rectangularity, non-negativity and row normalization
/// (within [`ROW_SUM_TOLERANCE`]); accepted rows are renormalized so each
/// sums to 1 as exactly as floating point allows.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    t_len: usize,
    states: usize,
    data: Vec<f64>,
    rate_hz: Option<f64>,
}

impl ProbabilityMatrix {
    /// Validate a raw rectangular matrix and build a `ProbabilityMatrix`.
    pub fn new(raw: Vec<Vec<f64>>, rate_hz: Option<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let states = raw[0].len();
        if states < 2 {
            return Err(Error::TooFewStates { states });
        }
        if let Some(rate) = rate_hz {
            if !(rate > 0.0) || !rate.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "sample rate must be positive, got {rate}"
                )));
            }
        }

        let t_len = raw.len();
        let mut data = Vec::with_capacity(t_len * states);
        for (row_idx, row) in raw.iter().enumerate() {
            if row.len() != states {
                return Err(Error::NonRectangular {
                    row: row_idx,
                    expected: states,
                    found: row.len(),
                });
            }
            let mut sum = 0.0;
            for (col, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFiniteEntry { row: row_idx, col });
                }
                if value < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: row_idx,
                        col,
                        value,
                    });
                }
                sum += value;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::RowNotNormalized { row: row_idx, sum });
            }
            data.extend(row.iter().map(|&v| v / sum));
        }

        Ok(Self {
            t_len,
            states,
            data,
            rate_hz,
        })
    }

    /// Number of samples T.
    pub fn t_len(&self) -> usize {
        self.t_len
    }

    /// Number of states L.
    pub fn states(&self) -> usize {
        self.states
    }

    /// Sample frequency in Hz, when known.
    pub fn rate_hz(&self) -> Option<f64> {
        self.rate_hz
    }

    /// The probability row at sample `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.states..(t + 1) * self.states]
    }

    /// `p[t][s]`.
    pub fn get(&self, t: usize, s: usize) -> f64 {
        self.data[t * self.states + s]
    }

    /// A new matrix holding rows `range.start..range.end` of this one.
    pub fn submatrix(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.t_len, "submatrix out of range");
        Self {
            t_len: len,
            states: self.states,
            data: self.data[start * self.states..(start + len) * self.states].to_vec(),
            rate_hz: self.rate_hz,
        }
    }

    /// Rows as owned vectors, mostly for serialization.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.t_len).map(move |t| self.row(t))
    }
}

/// Validate a raw matrix; alias of [`ProbabilityMatrix::new`] under the
/// operation name used throughout the docs.
pub fn validate_probability_matrix(
    raw: Vec<Vec<f64>>,
    rate_hz: Option<f64>,
) -> Result<ProbabilityMatrix> {
    ProbabilityMatrix::new(raw, rate_hz)
}

// ---------------------------------------------------------------------------
// CyclicTransitionModel
// ---------------------------------------------------------------------------

/// Transition constraints for a cyclic process over `L` states: from state
/// `s` the only successors are `s` itself and `(s + 1) mod L`.
///
/// Note the degenerate case `L = 2`: the successor set of each state covers
/// both states, so every pairwise transition is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicTransitionModel {
    states: usize,
    state_names: Option<Vec<String>>,
}

impl CyclicTransitionModel {
    pub fn new(states: usize) -> Result<Self> {
        if states < 2 {
            return Err(Error::TooFewStates { states });
        }
        Ok(Self {
            states,
            state_names: None,
        })
    }

    pub fn with_state_names(states: usize, names: Vec<String>) -> Result<Self> {
        if names.len() != states {
            return Err(Error::InvalidConfig(format!(
                "expected {} state names, got {}",
                states,
                names.len()
            )));
        }
        let mut model = Self::new(states)?;
        model.state_names = Some(names);
        Ok(model)
    }

    /// Number of states L.
    pub fn states(&self) -> usize {
        self.states
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    /// The two allowed successors of `s`: stay, then advance.
    pub fn successors(&self, s: usize) -> [usize; 2] {
        [s, (s + 1) % self.states]
    }

    /// The two states that may precede `s`: stay, then the previous state.
    pub fn predecessors(&self, s: usize) -> [usize; 2] {
        [s, (s + self.states - 1) % self.states]
    }

    /// Whether the transition `from -> to` is allowed.
    pub fn allows(&self, from: usize, to: usize) -> bool {
        to == from || to == (from + 1) % self.states
    }

    /// The adjacency matrix: row `s` has ones exactly at columns `s` and
    /// `(s + 1) mod L`.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (0..self.states)
            .map(|s| {
                let mut row = vec![0u8; self.states];
                row[s] = 1;
                row[(s + 1) % self.states] = 1;
                row
            })
            .collect()
    }
}

/// True iff every adjacent pair of `states` is an allowed transition.
///
/// Errors on an empty sequence or out-of-range state indices.
pub fn is_valid_sequence(model: &CyclicTransitionModel, states: &[usize]) -> Result<bool> {
    if states.is_empty() {
        return Err(Error::EmptySequence);
    }
    for (index, &state) in states.iter().enumerate() {
        if state >= model.states() {
            return Err(Error::StateOutOfRange {
                index,
                state,
                states: model.states(),
            });
        }
    }
    Ok(states.windows(2).all(|w| model.allows(w[0], w[1])))
}

// ---------------------------------------------------------------------------
// Decode results
// ---------------------------------------------------------------------------

/// A length-T state assignment with its objective (the sum of the selected
/// probabilities). Produced by the decoders; the argmax baseline may emit
/// sequences that violate the transition model, the constrained decoders
/// never do.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedSequence {
    pub states: Vec<usize>,
    pub objective: f64,
}

/// The best contiguous window of `width` samples together with its in-window
/// state assignment and objective.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowDecodeResult {
    /// First sample of the window (0-indexed).
    pub start: usize,
    /// Window width W in samples.
    pub width: usize,
    /// In-window assignment, `states[i]` is the state at sample `start + i`.
    pub states: Vec<usize>,
    /// Sum of the selected probabilities over the window.
    pub objective: f64,
}

impl WindowDecodeResult {
    /// The unassigned-sample mask over a signal of `t_len` samples: true
    /// outside the window, false inside. Switches value at most twice.
    pub fn mask(&self, t_len: usize) -> Vec<bool> {
        (0..t_len)
            .map(|t| t < self.start || t >= self.start + self.width)
            .collect()
    }
}
