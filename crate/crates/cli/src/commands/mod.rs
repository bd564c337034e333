//! Command implementations. Each takes a plain argument struct so both the
//! binary and the integration tests can call it directly.

pub mod compare;
pub mod decode;
pub mod eval;
pub mod export_lp;
pub mod infer;
pub mod synth;
pub mod window;

use crate::error::{CliError, Result};

/// Parse a comma-separated state list like `0,2`.
pub fn parse_state_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Usage(format!("bad state list entry {tok:?}: {e}")))
        })
        .collect()
}

/// Parse a `start,len` sample window.
pub fn parse_sample_window(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "expected start,len window, got {text:?}"
        )));
    }
    let start = parts[0]
        .trim()
        .parse::<usize>()
        .map_err(|e| CliError::Usage(format!("bad window start: {e}")))?;
    let len = parts[1]
        .trim()
        .parse::<usize>()
        .map_err(|e| CliError::Usage(format!("bad window length: {e}")))?;
    Ok((start, start + len))
}

/// The states not listed as positive, within `0..states`.
pub fn complement_states(positive: &[usize], states: usize) -> Vec<usize> {
    (0..states).filter(|s| !positive.contains(s)).collect()
}
