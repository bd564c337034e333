use std::path::PathBuf;

use cycleseg::decode::{argmax_decode, viterbi_decode};
use cycleseg::lstm::GateMode;
use cycleseg::types::{is_valid_sequence, CyclicTransitionModel};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Argmax,
    Viterbi,
}

#[derive(Debug)]
pub struct DecodeArgs {
    pub probs: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub gate_mode: GateMode,
    pub states: usize,
    pub rate_hz: Option<f64>,
    pub method: Method,
    pub out: PathBuf,
}

/// Decode a full recording to a state CSV; prints the objective.
pub fn run(args: &DecodeArgs) -> Result<()> {
    let p = match (&args.probs, &args.weights, &args.features) {
        (Some(probs), None, None) => io::read_matrix(probs, args.rate_hz)?,
        (None, Some(weights), Some(features)) => {
            let weights = io::read_weights(weights)?;
            let x = io::read_features(features)?;
            cycleseg::lstm::infer(&weights, &x, args.gate_mode)?
        }
        _ => {
            return Err(CliError::Usage(
                "need exactly one probability source: --probs FILE, or --weights FILE with --features FILE"
                    .into(),
            ))
        }
    };
    if p.states() != args.states {
        return Err(CliError::Domain(cycleseg::Error::DimensionMismatch {
            left: p.states(),
            right: args.states,
        }));
    }

    let model = CyclicTransitionModel::new(args.states)?;
    let decoded = match args.method {
        Method::Viterbi => viterbi_decode(&p, &model)?,
        Method::Argmax => {
            let decoded = argmax_decode(&p);
            if !is_valid_sequence(&model, &decoded.states)? {
                eprintln!("warning: sequence violates transition model");
            }
            decoded
        }
    };

    io::write_states(&args.out, &decoded.states)?;
    println!("objective: {}", decoded.objective);
    Ok(())
}
