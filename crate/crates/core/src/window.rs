//! Optimal fixed-width region selection.
//!
//! Finds the contiguous window of exactly W samples whose best transition-
//! valid assignment has maximal summed probability. Windows may touch either
//! end of the signal. The solver decomposes the problem into one small
//! layered DP per candidate start, i.e. T-W+1 independent subproblems; those
//! are embarrassingly parallel, and [`window_decode`] fans them out while
//! [`window_decode_per_start`] walks them sequentially. Both return bitwise
//! identical results: per-start values are merged deterministically by
//! (objective descending, start ascending).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::{CyclicTransitionModel, DecodedSequence, ProbabilityMatrix, WindowDecodeResult};

// ---------------------------------------------------------------------------
// WindowSpec
// ---------------------------------------------------------------------------

/// A resolved window width in samples.
///
/// Built either from a sample count or from a duration in seconds at a given
/// sample rate; the conversion rounds half away from zero and must resolve to
/// at least one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    width: usize,
}

impl WindowSpec {
    pub fn samples(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidConfig(
                "window width must be at least 1 sample".into(),
            ));
        }
        Ok(Self { width })
    }

    pub fn seconds(seconds: f64, rate_hz: f64) -> Result<Self> {
        if !seconds.is_finite() || seconds <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "window duration must be positive, got {seconds}"
            )));
        }
        if !rate_hz.is_finite() || rate_hz <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample rate must be positive, got {rate_hz}"
            )));
        }
        let width = (seconds * rate_hz).round();
        if width < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "window of {seconds} s at {rate_hz} Hz resolves to zero samples"
            )));
        }
        Ok(Self {
            width: width as usize,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

// ---------------------------------------------------------------------------
// Window decoding
// ---------------------------------------------------------------------------

/// Decode the best window, evaluating candidate starts in parallel.
pub fn window_decode(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    spec: &WindowSpec,
) -> Result<WindowDecodeResult> {
    let width = check(p, model, spec)?;
    let values: Vec<f64> = (0..=p.t_len() - width)
        .into_par_iter()
        .map(|start| window_value(p, model, start, width))
        .collect();
    Ok(select_best(p, model, width, &values))
}

/// Decode the best window with a sequential sweep over the T-W+1 per-start
/// subproblems. Returns exactly the same result as [`window_decode`].
pub fn window_decode_per_start(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    spec: &WindowSpec,
) -> Result<WindowDecodeResult> {
    let width = check(p, model, spec)?;
    let values: Vec<f64> = (0..=p.t_len() - width)
        .map(|start| window_value(p, model, start, width))
        .collect();
    Ok(select_best(p, model, width, &values))
}

fn check(p: &ProbabilityMatrix, model: &CyclicTransitionModel, spec: &WindowSpec) -> Result<usize> {
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }
    let width = spec.width();
    if width > p.t_len() {
        return Err(Error::WindowTooLong {
            width,
            samples: p.t_len(),
        });
    }
    Ok(width)
}

fn select_best(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    width: usize,
    values: &[f64],
) -> WindowDecodeResult {
    let mut best_start = 0usize;
    for (start, &value) in values.iter().enumerate().skip(1) {
        if value > values[best_start] {
            best_start = start;
        }
    }
    let decoded = window_backtrack(p, model, best_start, width);
    debug_assert_eq!(decoded.objective, values[best_start]);
    WindowDecodeResult {
        start: best_start,
        width,
        states: decoded.states,
        objective: decoded.objective,
    }
}

/// Value of the best valid assignment over rows [start, start+width).
/// Same recurrence and tie handling as the full decoder, restricted to the
/// window.
fn window_value(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    start: usize,
    width: usize,
) -> f64 {
    let states = p.states();
    let mut value = p.row(start).to_vec();
    let mut prev = vec![0.0; states];
    for offset in 1..width {
        std::mem::swap(&mut prev, &mut value);
        let row = p.row(start + offset);
        for s in 0..states {
            let [a, b] = model.predecessors(s);
            value[s] = prev[a].max(prev[b]) + row[s];
        }
    }
    let mut best = value[0];
    for &v in &value[1..] {
        if v > best {
            best = v;
        }
    }
    best
}

/// Full in-window DP with backtracking; tie-breaks as in the full decoder.
fn window_backtrack(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    start: usize,
    width: usize,
) -> DecodedSequence {
    let states = p.states();
    let mut value = p.row(start).to_vec();
    let mut prev = value.clone();
    let mut psi = vec![0u32; width.saturating_sub(1) * states];

    for offset in 1..width {
        std::mem::swap(&mut prev, &mut value);
        let row = p.row(start + offset);
        for s in 0..states {
            let [stay, advance] = model.predecessors(s);
            let (best_prev, best_val) = if stay < advance {
                if prev[stay] >= prev[advance] {
                    (stay, prev[stay])
                } else {
                    (advance, prev[advance])
                }
            } else if prev[advance] >= prev[stay] {
                (advance, prev[advance])
            } else {
                (stay, prev[stay])
            };
            value[s] = best_val + row[s];
            psi[(offset - 1) * states + s] = best_prev as u32;
        }
    }

    let mut best_state = 0usize;
    for s in 1..states {
        if value[s] > value[best_state] {
            best_state = s;
        }
    }
    let mut sequence = vec![0usize; width];
    sequence[width - 1] = best_state;
    for offset in (1..width).rev() {
        sequence[offset - 1] = psi[(offset - 1) * states + sequence[offset]] as usize;
    }
    DecodedSequence {
        states: sequence,
        objective: value[best_state],
    }
}
