//! The method comparison: full-signal argmax baseline versus the windowed
//! constrained decoder, plus argmax restricted to the optimal window and to
//! random windows of the same width.
//!
//! Windowed methods are scored only on the samples inside their window, with
//! ground truth and estimate both cut to the window, so run centers are
//! consistent on the two sides. Recordings are processed in name order;
//! random window draws come from a single seeded generator, trial by trial
//! over that fixed order, so reports are reproducible.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cycleseg::decode::argmax_decode;
use cycleseg::metrics::{evaluate, MetricsReport};
use cycleseg::types::{CyclicTransitionModel, ProbabilityMatrix};
use cycleseg::window::window_decode;

use crate::commands::complement_states;
use crate::error::{CliError, Result};
use crate::io;
use crate::report::{CompareReport, MethodReport, ReportRow};

#[derive(Debug)]
pub struct CompareArgs {
    pub corpus: PathBuf,
    pub seconds: Option<f64>,
    pub samples: Option<usize>,
    pub rate_hz: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub positive: Vec<usize>,
    pub negative: Option<Vec<usize>>,
    pub tolerance_ms: f64,
    pub out: Option<PathBuf>,
}

pub struct Recording {
    pub name: String,
    pub probs: ProbabilityMatrix,
    pub gt: Vec<usize>,
}

/// Load every `*.probs.csv` recording in a corpus directory, sorted by name.
pub fn load_corpus(dir: &Path, rate_override: Option<f64>) -> Result<Vec<Recording>> {
    let entries = fs::read_dir(dir).map_err(CliError::io(dir))?;
    let mut names: Vec<String> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(CliError::io(dir))?;
        let file_name = entry.file_name().to_string_lossy().into_owned();
        if let Some(stem) = file_name.strip_suffix(".probs.csv") {
            names.push(stem.to_string());
        }
    }
    if names.is_empty() {
        return Err(CliError::Usage(format!(
            "no *.probs.csv recordings in {}",
            dir.display()
        )));
    }
    names.sort();

    let mut recordings = Vec::with_capacity(names.len());
    for name in names {
        let probs_path = dir.join(format!("{name}.probs.csv"));
        let gt_path = dir.join(format!("{name}.gt.csv"));
        let probs = io::read_matrix(&probs_path, rate_override)?;
        let gt = io::read_states(&gt_path)?;
        if gt.len() != probs.t_len() {
            return Err(CliError::Domain(cycleseg::Error::LengthMismatch {
                left: gt.len(),
                right: probs.t_len(),
            }));
        }
        recordings.push(Recording { name, probs, gt });
    }
    Ok(recordings)
}

fn eval_slice(
    gt: &[usize],
    est: &[usize],
    positive: &[usize],
    negative: &[usize],
    rate: f64,
    tolerance_ms: f64,
) -> Result<MetricsReport> {
    Ok(evaluate(
        gt,
        est,
        positive,
        negative,
        rate,
        tolerance_ms,
        None,
    )?)
}

/// Run the comparison over loaded recordings.
pub fn run_compare(args: &CompareArgs, recordings: &[Recording]) -> Result<CompareReport> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let rate = args
        .rate_hz
        .or_else(|| recordings.iter().find_map(|r| r.probs.rate_hz()))
        .ok_or_else(|| CliError::Usage("no sample rate: pass --rate or provide sidecars".into()))?;
    let spec = crate::commands::window::resolve_spec(args.seconds, args.samples, Some(rate))?;
    let width = spec.width();

    let mut argmax_full = Vec::new();
    let mut window_viterbi = Vec::new();
    let mut argmax_in_window = Vec::new();
    let mut argmax_random_window = Vec::new();

    for rec in recordings {
        let states = rec.probs.states();
        let model = CyclicTransitionModel::new(states)?;
        let negative = match &args.negative {
            Some(n) => n.clone(),
            None => complement_states(&args.positive, states),
        };

        // (a) argmax over the full signal.
        let baseline = argmax_decode(&rec.probs);
        let metrics = eval_slice(
            &rec.gt,
            &baseline.states,
            &args.positive,
            &negative,
            rate,
            args.tolerance_ms,
        )?;
        argmax_full.push(ReportRow::new(&rec.name, None, &metrics));

        // (b) constrained decode inside the optimal window.
        let best = window_decode(&rec.probs, &model, &spec)?;
        let gt_window = &rec.gt[best.start..best.start + best.width];
        let metrics = eval_slice(
            gt_window,
            &best.states,
            &args.positive,
            &negative,
            rate,
            args.tolerance_ms,
        )?;
        window_viterbi
            .push(ReportRow::new(&rec.name, None, &metrics).with_window_start(best.start));

        // (c) argmax restricted to that same window.
        let sub = rec.probs.submatrix(best.start, best.width);
        let naive = argmax_decode(&sub);
        let metrics = eval_slice(
            gt_window,
            &naive.states,
            &args.positive,
            &negative,
            rate,
            args.tolerance_ms,
        )?;
        argmax_in_window
            .push(ReportRow::new(&rec.name, None, &metrics).with_window_start(best.start));
    }

    // (d) argmax inside random windows of the same width, per trial.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for trial in 0..args.trials {
        for rec in recordings {
            let states = rec.probs.states();
            let negative = match &args.negative {
                Some(n) => n.clone(),
                None => complement_states(&args.positive, states),
            };
            if width > rec.probs.t_len() {
                return Err(CliError::Domain(cycleseg::Error::WindowTooLong {
                    width,
                    samples: rec.probs.t_len(),
                }));
            }
            let start = rng.gen_range(0..=rec.probs.t_len() - width);
            let sub = rec.probs.submatrix(start, width);
            let naive = argmax_decode(&sub);
            let metrics = eval_slice(
                &rec.gt[start..start + width],
                &naive.states,
                &args.positive,
                &negative,
                rate,
                args.tolerance_ms,
            )?;
            argmax_random_window
                .push(ReportRow::new(&rec.name, Some(trial), &metrics).with_window_start(start));
        }
    }

    Ok(CompareReport {
        corpus: args.corpus.display().to_string(),
        recordings: recordings.len(),
        trials: args.trials,
        seed: args.seed,
        window_samples: width,
        rate_hz: rate,
        argmax_full: MethodReport::from_rows(argmax_full),
        window_viterbi: MethodReport::from_rows(window_viterbi),
        argmax_in_window: MethodReport::from_rows(argmax_in_window),
        argmax_random_window: MethodReport::from_rows(argmax_random_window),
    })
}

/// CLI entry: load the corpus, run, write JSON, print the table.
pub fn run(args: &CompareArgs) -> Result<()> {
    let recordings = load_corpus(&args.corpus, args.rate_hz)?;
    let report = run_compare(args, &recordings)?;
    if let Some(out) = &args.out {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(out, text).map_err(CliError::io(out))?;
    }
    print!("{}", report.table());
    Ok(())
}
