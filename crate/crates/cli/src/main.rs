//! `cycleseg`: decode physiological state sequences from per-sample
//! probability matrices under cyclic transition constraints, select the best
//! fixed-width window, evaluate against ground truth, generate synthetic
//! corpora and export the optimization formulations.
//!
//! Exit codes: 0 success, 2 usage or I/O problems, 3 validation and domain
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cycleseg::lpexport::CardinalityConvention;
use cycleseg::lstm::GateMode;
use cycleseg_cli::commands::{self, compare, decode, eval, export_lp, infer, synth, window};
use cycleseg_cli::error::CliError;

#[derive(Parser)]
#[command(
    name = "cycleseg",
    version,
    about = "Constrained state-sequence decoding and optimal window selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a full recording (argmax baseline or constrained decoder)
    Decode(DecodeCmd),
    /// Select the best fixed-width window and its in-window decode
    Window(WindowCmd),
    /// Evaluate an estimated state sequence against ground truth
    Eval(EvalCmd),
    /// Compare decoding methods over a synthetic corpus
    Compare(CompareCmd),
    /// Generate a seeded synthetic corpus
    Synth(SynthCmd),
    /// Export an optimization formulation as an LP file
    ExportLp(ExportLpCmd),
    /// Run bidirectional forward inference from a weight file
    Infer(InferCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GateModeArg {
    Paper,
    Standard,
}

impl From<GateModeArg> for GateMode {
    fn from(arg: GateModeArg) -> Self {
        match arg {
            GateModeArg::Paper => GateMode::Paper,
            GateModeArg::Standard => GateMode::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Argmax,
    Viterbi,
}

#[derive(Args)]
struct DecodeCmd {
    /// Probability matrix CSV (headerless, one row per sample)
    #[arg(long)]
    probs: Option<PathBuf>,
    /// Weight JSON file (needs --features)
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Feature CSV for inference (needs --weights)
    #[arg(long)]
    features: Option<PathBuf>,
    /// Gate activation placement for inference
    #[arg(long, value_enum, default_value = "paper")]
    gate_mode: GateModeArg,
    /// Number of states L
    #[arg(long)]
    states: usize,
    /// Sample rate in Hz (overrides any sidecar)
    #[arg(long)]
    rate: Option<f64>,
    /// Decoding method
    #[arg(long, value_enum, default_value = "viterbi")]
    method: MethodArg,
    /// Output state CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WindowCmd {
    #[arg(long)]
    probs: PathBuf,
    #[arg(long)]
    states: usize,
    /// Window length in seconds (needs a sample rate)
    #[arg(long)]
    seconds: Option<f64>,
    /// Window length in samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    /// Output JSON with start, width, objective and states
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG plot of the trace with the window shaded
    #[arg(long)]
    emit_plot: Option<PathBuf>,
}

#[derive(Args)]
struct EvalCmd {
    /// Ground-truth state CSV
    #[arg(long)]
    gt: PathBuf,
    /// Estimated state CSV
    #[arg(long)]
    est: PathBuf,
    #[arg(long)]
    rate: f64,
    /// Event matching tolerance in milliseconds (strict)
    #[arg(long, default_value_t = 60.0)]
    tolerance_ms: f64,
    /// Restrict evaluation to a sample window, as start,len
    #[arg(long)]
    window: Option<String>,
    /// Comma-separated positive states, e.g. 0,2
    #[arg(long)]
    positive: String,
    /// Comma-separated negative states (default: the complement)
    #[arg(long)]
    negative: Option<String>,
    /// Output report JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareCmd {
    /// Corpus directory with *.probs.csv and *.gt.csv files
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    seconds: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    /// Random-window trials
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "0,2")]
    positive: String,
    #[arg(long)]
    negative: Option<String>,
    #[arg(long, default_value_t = 60.0)]
    tolerance_ms: f64,
    /// Output report JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthCmd {
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Number of recordings
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20.0)]
    duration_s: f64,
    /// Emission temperature
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Burst length in seconds (0 disables bursts)
    #[arg(long, default_value_t = 4.0)]
    burst_seconds: f64,
    /// Burst uniformity in [0, 1]
    #[arg(long, default_value_t = 0.9)]
    burst_lambda: f64,
    /// Burst position: "random", "none", or a start in seconds
    #[arg(long, default_value = "random")]
    burst_start: String,
    /// Also write run-length annotation CSVs
    #[arg(long)]
    emit_runs: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormulationArg {
    P6Linearized,
    P8,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CardinalityArg {
    InnerExact,
    TotalExact,
    TotalAtLeast,
}

impl From<CardinalityArg> for CardinalityConvention {
    fn from(arg: CardinalityArg) -> Self {
        match arg {
            CardinalityArg::InnerExact => CardinalityConvention::InnerArcsExact,
            CardinalityArg::TotalExact => CardinalityConvention::TotalArcsExact,
            CardinalityArg::TotalAtLeast => CardinalityConvention::TotalArcsAtLeast,
        }
    }
}

#[derive(Args)]
struct ExportLpCmd {
    #[arg(long)]
    probs: PathBuf,
    #[arg(long)]
    states: usize,
    #[arg(long, value_enum)]
    formulation: FormulationArg,
    #[arg(long)]
    seconds: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    rate: Option<f64>,
    /// Window cardinality convention for the flow formulation
    #[arg(long, value_enum, default_value = "inner-exact")]
    cardinality: CardinalityArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InferCmd {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long, value_enum, default_value = "paper")]
    gate_mode: GateModeArg,
    /// Sample rate to record in the output sidecar
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decode(cmd) => decode::run(&decode::DecodeArgs {
            probs: cmd.probs,
            weights: cmd.weights,
            features: cmd.features,
            gate_mode: cmd.gate_mode.into(),
            states: cmd.states,
            rate_hz: cmd.rate,
            method: match cmd.method {
                MethodArg::Argmax => decode::Method::Argmax,
                MethodArg::Viterbi => decode::Method::Viterbi,
            },
            out: cmd.out,
        }),
        Command::Window(cmd) => window::run(&window::WindowArgs {
            probs: cmd.probs,
            states: cmd.states,
            seconds: cmd.seconds,
            samples: cmd.samples,
            rate_hz: cmd.rate,
            out: cmd.out,
            emit_plot: cmd.emit_plot,
        }),
        Command::Eval(cmd) => {
            let window = cmd
                .window
                .as_deref()
                .map(commands::parse_sample_window)
                .transpose()?;
            eval::run(&eval::EvalArgs {
                gt: cmd.gt,
                est: cmd.est,
                rate_hz: cmd.rate,
                tolerance_ms: cmd.tolerance_ms,
                window,
                positive: commands::parse_state_list(&cmd.positive)?,
                negative: cmd
                    .negative
                    .as_deref()
                    .map(commands::parse_state_list)
                    .transpose()?,
                out: cmd.out,
            })
        }
        Command::Compare(cmd) => compare::run(&compare::CompareArgs {
            corpus: cmd.corpus,
            seconds: cmd.seconds,
            samples: cmd.samples,
            rate_hz: cmd.rate,
            trials: cmd.trials,
            seed: cmd.seed,
            positive: commands::parse_state_list(&cmd.positive)?,
            negative: cmd
                .negative
                .as_deref()
                .map(commands::parse_state_list)
                .transpose()?,
            tolerance_ms: cmd.tolerance_ms,
            out: cmd.out,
        }),
        Command::Synth(cmd) => {
            let burst_placement = match cmd.burst_start.as_str() {
                _ if cmd.burst_seconds <= 0.0 => synth::BurstPlacement::None,
                "none" => synth::BurstPlacement::None,
                "random" => synth::BurstPlacement::Random,
                text => synth::BurstPlacement::At(
                    text.parse::<f64>()
                        .map_err(|e| CliError::Usage(format!("bad --burst-start {text:?}: {e}")))?,
                ),
            };
            synth::run(&synth::SynthArgs {
                out: cmd.out,
                count: cmd.count,
                seed: cmd.seed,
                duration_s: cmd.duration_s,
                tau: cmd.tau,
                burst_seconds: cmd.burst_seconds,
                burst_lambda: cmd.burst_lambda,
                burst_placement,
                emit_runs: cmd.emit_runs,
            })
        }
        Command::ExportLp(cmd) => export_lp::run(&export_lp::ExportLpArgs {
            probs: cmd.probs,
            states: cmd.states,
            formulation: match cmd.formulation {
                FormulationArg::P6Linearized => export_lp::LpFormulation::P6Linearized,
                FormulationArg::P8 => export_lp::LpFormulation::P8,
            },
            seconds: cmd.seconds,
            samples: cmd.samples,
            rate_hz: cmd.rate,
            cardinality: cmd.cardinality.into(),
            out: cmd.out,
        }),
        Command::Infer(cmd) => infer::run(&infer::InferArgs {
            weights: cmd.weights,
            features: cmd.features,
            gate_mode: cmd.gate_mode.into(),
            rate_hz: cmd.rate,
            out: cmd.out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
