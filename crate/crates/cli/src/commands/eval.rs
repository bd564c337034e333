use std::fs;
use std::path::PathBuf;

use cycleseg::metrics::evaluate;

use crate::commands::complement_states;
use crate::error::{CliError, Result};
use crate::io;
use crate::report::{EvalReport, ReportRow};

#[derive(Debug)]
pub struct EvalArgs {
    pub gt: PathBuf,
    pub est: PathBuf,
    pub rate_hz: f64,
    pub tolerance_ms: f64,
    pub window: Option<(usize, usize)>,
    pub positive: Vec<usize>,
    pub negative: Option<Vec<usize>>,
    pub out: PathBuf,
}

/// Evaluate an estimated state CSV against ground truth and write the report
/// as JSON.
pub fn run(args: &EvalArgs) -> Result<()> {
    let gt = io::read_states(&args.gt)?;
    let est = io::read_states(&args.est)?;

    let negative = match &args.negative {
        Some(states) => states.clone(),
        None => {
            let max_state = gt.iter().chain(est.iter()).copied().max().unwrap_or(0);
            complement_states(&args.positive, max_state + 1)
        }
    };

    let metrics = evaluate(
        &gt,
        &est,
        &args.positive,
        &negative,
        args.rate_hz,
        args.tolerance_ms,
        args.window,
    )?;

    let name = args
        .est
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "estimate".to_string());
    let report = EvalReport::single(ReportRow::new(&name, None, &metrics));
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    fs::write(&args.out, text).map_err(CliError::io(&args.out))?;

    println!(
        "accuracy={:.6} sensitivity={:.6} specificity={:.6} tp={} fp={} tn={} fn={}",
        metrics.accuracy,
        metrics.sensitivity,
        metrics.specificity,
        metrics.true_positives,
        metrics.false_positives,
        metrics.true_negatives,
        metrics.false_negatives
    );
    Ok(())
}
