//! Exhaustive reference solvers for small instances.
//!
//! These enumerate every transition-valid assignment and therefore serve as
//! ground truth for the dynamic-programming decoders. Hard size guards keep
//! the exponential enumeration from running away: a full decode visits
//! exactly `L * 2^(T-1)` sequences.

use crate::error::{Error, Result};
use crate::types::{CyclicTransitionModel, DecodedSequence, ProbabilityMatrix, WindowDecodeResult};
use crate::window::WindowSpec;

const MAX_T: usize = 16;
const MAX_L: usize = 5;
const MAX_W: usize = 8;

/// Exhaustively decode the full sequence. Same tie-breaks as the DP decoder:
/// maximal objective, then the reversed state list lexicographically
/// smallest.
pub fn brute_force_full(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
) -> Result<DecodedSequence> {
    guard("T", p.t_len(), MAX_T)?;
    guard("L", p.states(), MAX_L)?;
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }

    let mut best: Option<DecodedSequence> = None;
    each_valid_sequence(p.t_len(), model, |states| {
        let mut objective = 0.0;
        for (t, &s) in states.iter().enumerate() {
            objective += p.get(t, s);
        }
        if better(states, objective, best.as_ref()) {
            best = Some(DecodedSequence {
                states: states.to_vec(),
                objective,
            });
        }
    });
    Ok(best.expect("at least one valid sequence exists"))
}

/// Exhaustively solve the window problem: every start, every valid in-window
/// assignment. Ties across starts go to the earliest start; in-window ties as
/// in [`brute_force_full`].
pub fn brute_force_window(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    spec: &WindowSpec,
) -> Result<WindowDecodeResult> {
    guard("T", p.t_len(), MAX_T)?;
    guard("L", p.states(), MAX_L)?;
    let width = spec.width();
    guard("W", width, MAX_W)?;
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }
    if width > p.t_len() {
        return Err(Error::WindowTooLong {
            width,
            samples: p.t_len(),
        });
    }

    let mut best: Option<WindowDecodeResult> = None;
    for start in 0..=p.t_len() - width {
        let mut best_here: Option<DecodedSequence> = None;
        each_valid_sequence(width, model, |states| {
            let mut objective = 0.0;
            for (offset, &s) in states.iter().enumerate() {
                objective += p.get(start + offset, s);
            }
            if better(states, objective, best_here.as_ref()) {
                best_here = Some(DecodedSequence {
                    states: states.to_vec(),
                    objective,
                });
            }
        });
        let candidate = best_here.expect("window is non-empty");
        let replace = match &best {
            None => true,
            Some(current) => candidate.objective > current.objective,
        };
        if replace {
            best = Some(WindowDecodeResult {
                start,
                width,
                states: candidate.states,
                objective: candidate.objective,
            });
        }
    }
    Ok(best.expect("at least one window exists"))
}

/// Number of transition-valid sequences of length `t_len`, by enumeration.
pub fn count_valid_sequences(t_len: usize, model: &CyclicTransitionModel) -> u64 {
    let mut count = 0u64;
    each_valid_sequence(t_len, model, |_| count += 1);
    count
}

/// Visit every transition-valid sequence of the given length. Two successor
/// choices per step (stay, advance), explored stay-first.
fn each_valid_sequence<F: FnMut(&[usize])>(t_len: usize, model: &CyclicTransitionModel, mut f: F) {
    let mut states = vec![0usize; t_len];
    for first in 0..model.states() {
        states[0] = first;
        descend(&mut states, 1, model, &mut f);
    }
}

fn descend<F: FnMut(&[usize])>(
    states: &mut Vec<usize>,
    depth: usize,
    model: &CyclicTransitionModel,
    f: &mut F,
) {
    if depth == states.len() {
        f(states);
        return;
    }
    for next in model.successors(states[depth - 1]) {
        states[depth] = next;
        descend(states, depth + 1, model, f);
    }
}

/// Candidate beats the incumbent on objective, or ties and its reversed
/// state list compares lexicographically smaller.
fn better(candidate: &[usize], objective: f64, incumbent: Option<&DecodedSequence>) -> bool {
    match incumbent {
        None => true,
        Some(best) => {
            if objective != best.objective {
                return objective > best.objective;
            }
            for (c, b) in candidate.iter().rev().zip(best.states.iter().rev()) {
                if c != b {
                    return c < b;
                }
            }
            false
        }
    }
}

fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::InstanceTooLarge { what, value, limit });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::is_valid_sequence;

    fn matrix(rows: &[&[f64]]) -> ProbabilityMatrix {
        ProbabilityMatrix::new(rows.iter().map(|r| r.to_vec()).collect(), None).unwrap()
    }

    #[test]
    fn enumerates_twelve_sequences_and_finds_optimum() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[&[0.5, 0.3, 0.2], &[0.1, 0.7, 0.2], &[0.3, 0.3, 0.4]]);
        assert_eq!(count_valid_sequences(3, &model), 12);
        let best = brute_force_full(&p, &model).unwrap();
        assert_eq!(best.states, vec![0, 1, 2]);
        assert!((best.objective - 1.6).abs() < 1e-15);
    }

    #[test]
    fn single_sample_reduces_to_argmax() {
        let model = CyclicTransitionModel::new(4).unwrap();
        let p = matrix(&[&[0.1, 0.2, 0.6, 0.1]]);
        let best = brute_force_full(&p, &model).unwrap();
        assert_eq!(best.states, vec![2]);
    }

    #[test]
    fn uniform_tie_returns_reversed_lex_smallest() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let third = 1.0 / 3.0;
        let p = matrix(&[
            &[third, third, third],
            &[third, third, third],
            &[third, third, third],
        ]);
        let best = brute_force_full(&p, &model).unwrap();
        assert!((best.objective - 1.0).abs() < 1e-12);
        // Every valid sequence ties at 1.0; the reversed-lex rule keeps the
        // one ending earliest, which is the all-zero sequence here.
        assert_eq!(best.states, vec![0, 0, 0]);
    }

    #[test]
    fn sequence_count_formula() {
        for l in 2..=4usize {
            let model = CyclicTransitionModel::new(l).unwrap();
            for t in 1..=8usize {
                let expected = (l as u64) << (t - 1);
                assert_eq!(count_valid_sequences(t, &model), expected);
            }
        }
    }

    #[test]
    fn outputs_are_valid_sequences() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[
            &[0.6, 0.2, 0.2],
            &[0.1, 0.2, 0.7],
            &[0.5, 0.3, 0.2],
            &[0.2, 0.5, 0.3],
        ]);
        let best = brute_force_full(&p, &model).unwrap();
        assert!(is_valid_sequence(&model, &best.states).unwrap());
    }

    #[test]
    fn window_fixture() {
        let model = CyclicTransitionModel::new(2).unwrap();
        let p = matrix(&[
            &[0.5, 0.5],
            &[0.1, 0.9],
            &[0.2, 0.8],
            &[0.9, 0.1],
            &[0.5, 0.5],
        ]);
        let result = brute_force_window(&p, &model, &WindowSpec::samples(2).unwrap()).unwrap();
        assert_eq!(result.start, 1);
        assert_eq!(result.states, vec![1, 1]);
        assert!((result.objective - 1.7).abs() < 1e-12);
    }

    #[test]
    fn window_equal_to_full_when_w_is_t() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[&[0.5, 0.3, 0.2], &[0.1, 0.7, 0.2], &[0.3, 0.3, 0.4]]);
        let windowed = brute_force_window(&p, &model, &WindowSpec::samples(3).unwrap()).unwrap();
        let full = brute_force_full(&p, &model).unwrap();
        assert_eq!(windowed.start, 0);
        assert_eq!(windowed.states, full.states);
        assert_eq!(windowed.objective, full.objective);
    }

    #[test]
    fn width_one_window_is_earliest_row_max() {
        let model = CyclicTransitionModel::new(2).unwrap();
        let p = matrix(&[&[0.5, 0.5], &[0.1, 0.9], &[0.9, 0.1]]);
        let result = brute_force_window(&p, &model, &WindowSpec::samples(1).unwrap()).unwrap();
        assert_eq!(result.start, 1);
        assert_eq!(result.states, vec![1]);
        assert!((result.objective - 0.9).abs() < 1e-12);
    }

    #[test]
    fn size_guards() {
        let model = CyclicTransitionModel::new(2).unwrap();
        let rows: Vec<Vec<f64>> = (0..17).map(|_| vec![0.5, 0.5]).collect();
        let p = ProbabilityMatrix::new(rows, None).unwrap();
        assert!(matches!(
            brute_force_full(&p, &model),
            Err(Error::InstanceTooLarge { what: "T", .. })
        ));
        assert!(matches!(
            brute_force_window(&p, &model, &WindowSpec::samples(2).unwrap()),
            Err(Error::InstanceTooLarge { what: "T", .. })
        ));
    }
}
