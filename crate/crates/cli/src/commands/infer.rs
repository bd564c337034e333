use std::path::PathBuf;

use cycleseg::lstm::{infer, GateMode};

use crate::error::Result;
use crate::io::{self, Sidecar};

#[derive(Debug)]
pub struct InferArgs {
    pub weights: PathBuf,
    pub features: PathBuf,
    pub gate_mode: GateMode,
    pub rate_hz: Option<f64>,
    pub out: PathBuf,
}

/// Run forward inference and write the probability matrix with a sidecar.
pub fn run(args: &InferArgs) -> Result<()> {
    let weights = io::read_weights(&args.weights)?;
    let x = io::read_features(&args.features)?;
    let p = infer(&weights, &x, args.gate_mode)?;

    io::write_matrix(&args.out, &p)?;
    io::write_sidecar(
        &args.out,
        &Sidecar {
            rate_hz: args.rate_hz,
            states: Some(p.states()),
            ..Default::default()
        },
    )?;
    println!(
        "wrote {} ({} samples, {} states)",
        args.out.display(),
        p.t_len(),
        p.states()
    );
    Ok(())
}
