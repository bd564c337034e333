//! Corpus generation: writes `rec_###.probs.csv` matrices with sidecars,
//! `rec_###.gt.csv` state files and optional run-length annotations. Each
//! recording gets its own seed and burst position drawn from a master
//! generator, so a corpus is a pure function of the master seed.

use std::fs;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cycleseg::synth::{generate_recording, NoiseBurst, SynthConfig};

use crate::error::{CliError, Result};
use crate::io::{self, BurstInfo, Sidecar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BurstPlacement {
    None,
    Random,
    At(f64),
}

#[derive(Debug)]
pub struct SynthArgs {
    pub out: PathBuf,
    pub count: usize,
    pub seed: u64,
    pub duration_s: f64,
    pub tau: f64,
    pub burst_seconds: f64,
    pub burst_lambda: f64,
    pub burst_placement: BurstPlacement,
    pub emit_runs: bool,
}

/// Build the per-recording configurations for a corpus.
pub fn corpus_configs(args: &SynthArgs) -> Result<Vec<SynthConfig>> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(args.seed);
    let mut configs = Vec::with_capacity(args.count);
    for _ in 0..args.count {
        let seed = master.gen::<u64>();
        let mut cfg = SynthConfig::pcg_like(args.duration_s, seed);
        cfg.tau = args.tau;
        let burst_start = match args.burst_placement {
            BurstPlacement::None => None,
            BurstPlacement::At(start) => Some(start),
            BurstPlacement::Random => {
                let max_start = args.duration_s - args.burst_seconds;
                if max_start < 0.0 {
                    return Err(CliError::Usage("burst longer than the recording".into()));
                }
                Some(master.gen_range(0.0..=max_start))
            }
        };
        if let Some(start_s) = burst_start {
            cfg = cfg.with_burst(NoiseBurst {
                start_s,
                length_s: args.burst_seconds,
                lambda: args.burst_lambda,
            });
        }
        configs.push(cfg);
    }
    Ok(configs)
}

/// Generate and write the corpus.
pub fn run(args: &SynthArgs) -> Result<()> {
    let configs = corpus_configs(args)?;
    fs::create_dir_all(&args.out).map_err(CliError::io(&args.out))?;

    let state_names: Vec<String> = ["S1", "systole", "S2", "diastole"]
        .iter()
        .map(|s| s.to_string())
        .collect();

    for (i, cfg) in configs.iter().enumerate() {
        let (gt, probs) = generate_recording(cfg)?;
        let base = args.out.join(format!("rec_{i:03}"));
        let probs_path = base.with_extension("probs.csv");
        io::write_matrix(&probs_path, &probs)?;
        io::write_sidecar(
            &probs_path,
            &Sidecar {
                rate_hz: Some(cfg.rate_hz),
                states: Some(cfg.states),
                state_names: Some(state_names.clone()),
                seed: Some(cfg.seed),
                bursts: Some(
                    cfg.bursts
                        .iter()
                        .map(|b| BurstInfo {
                            start_s: b.start_s,
                            length_s: b.length_s,
                            lambda: b.lambda,
                        })
                        .collect(),
                ),
            },
        )?;
        io::write_states(&base.with_extension("gt.csv"), &gt)?;
        if args.emit_runs {
            io::write_runs(&base.with_extension("runs.csv"), &gt)?;
        }
    }
    println!(
        "wrote {} recordings to {}",
        configs.len(),
        args.out.display()
    );
    Ok(())
}
