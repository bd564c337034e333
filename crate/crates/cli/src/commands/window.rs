use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use cycleseg::types::CyclicTransitionModel;
use cycleseg::window::{window_decode, WindowSpec};

use crate::error::{CliError, Result};
use crate::{io, plot};

#[derive(Debug)]
pub struct WindowArgs {
    pub probs: PathBuf,
    pub states: usize,
    pub seconds: Option<f64>,
    pub samples: Option<usize>,
    pub rate_hz: Option<f64>,
    pub out: PathBuf,
    pub emit_plot: Option<PathBuf>,
}

#[derive(Serialize)]
struct WindowFile<'a> {
    start: usize,
    width: usize,
    objective: f64,
    states: &'a [usize],
}

/// Resolve the window width from either `--samples` or `--seconds` plus a
/// sample rate (flag or sidecar).
pub fn resolve_spec(
    seconds: Option<f64>,
    samples: Option<usize>,
    rate_hz: Option<f64>,
) -> Result<WindowSpec> {
    match (seconds, samples) {
        (None, Some(w)) => Ok(WindowSpec::samples(w)?),
        (Some(j), None) => {
            let rate = rate_hz.ok_or_else(|| {
                CliError::Usage("--seconds needs a sample rate (--rate or sidecar)".into())
            })?;
            Ok(WindowSpec::seconds(j, rate)?)
        }
        _ => Err(CliError::Usage(
            "need exactly one of --samples W or --seconds J".into(),
        )),
    }
}

/// Select the best window and write it as JSON.
pub fn run(args: &WindowArgs) -> Result<()> {
    let p = io::read_matrix(&args.probs, args.rate_hz)?;
    if p.states() != args.states {
        return Err(CliError::Domain(cycleseg::Error::DimensionMismatch {
            left: p.states(),
            right: args.states,
        }));
    }
    let spec = resolve_spec(args.seconds, args.samples, args.rate_hz.or(p.rate_hz()))?;
    let model = CyclicTransitionModel::new(args.states)?;
    let result = window_decode(&p, &model, &spec)?;

    let text = serde_json::to_string_pretty(&WindowFile {
        start: result.start,
        width: result.width,
        objective: result.objective,
        states: &result.states,
    })
    .expect("window result serializes");
    fs::write(&args.out, text).map_err(CliError::io(&args.out))?;

    if let Some(plot_path) = &args.emit_plot {
        fs::write(plot_path, plot::window_plot(&p, &result)).map_err(CliError::io(plot_path))?;
    }

    println!(
        "window start={} width={} objective={}",
        result.start, result.width, result.objective
    );
    Ok(())
}
