use std::fs;
use std::path::PathBuf;

use cycleseg::lpexport::{export_p6_linearized, export_p8, CardinalityConvention};
use cycleseg::types::CyclicTransitionModel;

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpFormulation {
    P6Linearized,
    P8,
}

#[derive(Debug)]
pub struct ExportLpArgs {
    pub probs: PathBuf,
    pub states: usize,
    pub formulation: LpFormulation,
    pub seconds: Option<f64>,
    pub samples: Option<usize>,
    pub rate_hz: Option<f64>,
    pub cardinality: CardinalityConvention,
    pub out: PathBuf,
}

/// Write one formulation of the loaded instance as an LP file.
pub fn run(args: &ExportLpArgs) -> Result<()> {
    let p = io::read_matrix(&args.probs, args.rate_hz)?;
    if p.states() != args.states {
        return Err(CliError::Domain(cycleseg::Error::DimensionMismatch {
            left: p.states(),
            right: args.states,
        }));
    }
    let model = CyclicTransitionModel::new(args.states)?;

    let text = match args.formulation {
        LpFormulation::P6Linearized => export_p6_linearized(&p, &model)?,
        LpFormulation::P8 => {
            let spec = crate::commands::window::resolve_spec(
                args.seconds,
                args.samples,
                args.rate_hz.or(p.rate_hz()),
            )?;
            export_p8(&p, &model, &spec, args.cardinality)?
        }
    };
    fs::write(&args.out, text).map_err(CliError::io(&args.out))?;
    println!("wrote {}", args.out.display());
    Ok(())
}
