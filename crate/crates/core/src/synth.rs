//! Seeded synthetic corpus generation: cyclic ground-truth sequences with
//! semi-Markov state durations, plus probability emissions degraded by
//! configurable noise bursts.
//!
//! The generator stands in for recordings that cannot be redistributed.
//! Ground truth walks the cycle 0, 1, ..., L-1, 0, ... with per-state
//! durations drawn from a truncated normal (at least one sample). Emission
//! rows are the tempered softmax of the one-hot truth; inside a burst the
//! logits are perturbed by seeded Gaussian noise scaled with the burst's
//! uniformity and the row is then blended toward the uniform distribution,
//! so uniformity 1 yields exactly uniform rows and samples outside any burst
//! are noise-free. Everything is deterministic given the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::lstm::softmax;
use crate::types::ProbabilityMatrix;

/// Gain applied to in-burst logit noise, relative to the one-hot logit gap.
/// At uniformity 0.9 the perturbation overwhelms the clean signal, which is
/// the point of a burst.
const BURST_NOISE_GAIN: f64 = 2.5;

/// In-burst corruption is held piecewise constant over segments of roughly
/// this length, emulating transient noise sources (a cough, a movement)
/// rather than per-sample flicker.
const BURST_SEGMENT_S: f64 = 0.2;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Mean/std of one state's duration, in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDuration {
    pub mean: f64,
    pub std: f64,
}

/// A noise burst: an interval (in seconds) and its uniformity.
///
/// Uniformity 0 leaves the rows untouched; 1 replaces them with the uniform
/// distribution. In between, rows are corrupted by noise of matching
/// strength and blended toward uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBurst {
    pub start_s: f64,
    pub length_s: f64,
    pub lambda: f64,
}

/// Full generator configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub states: usize,
    pub rate_hz: f64,
    pub duration_s: f64,
    /// Per-state duration models, indexed by state.
    pub durations: Vec<StateDuration>,
    /// Emission temperature; lower is sharper.
    pub tau: f64,
    pub bursts: Vec<NoiseBurst>,
    pub seed: u64,
}

impl SynthConfig {
    /// Heart-cycle-like preset: four states at 50 Hz with durations of
    /// roughly 0.12 s, 0.30 s, 0.10 s and 0.45 s (short sound, long interval,
    /// short sound, longer interval). Generator defaults, not clinical
    /// claims.
    pub fn pcg_like(duration_s: f64, seed: u64) -> Self {
        let rate = 50.0;
        let durations = [0.12, 0.30, 0.10, 0.45]
            .iter()
            .map(|&seconds| StateDuration {
                mean: seconds * rate,
                std: 0.1 * seconds * rate,
            })
            .collect();
        Self {
            states: 4,
            rate_hz: rate,
            duration_s,
            durations,
            tau: 0.5,
            bursts: Vec::new(),
            seed,
        }
    }

    pub fn with_burst(mut self, burst: NoiseBurst) -> Self {
        self.bursts.push(burst);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Total sample count implied by duration and rate.
    pub fn t_len(&self) -> usize {
        (self.duration_s * self.rate_hz).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.states < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 states, got {}",
                self.states
            )));
        }
        if !(self.rate_hz > 0.0) || !self.rate_hz.is_finite() {
            return Err(Error::InvalidConfig("sample rate must be positive".into()));
        }
        if !(self.duration_s > 0.0) || self.t_len() == 0 {
            return Err(Error::InvalidConfig(
                "duration must cover at least one sample".into(),
            ));
        }
        if self.durations.len() != self.states {
            return Err(Error::InvalidConfig(format!(
                "expected {} duration models, got {}",
                self.states,
                self.durations.len()
            )));
        }
        for (s, d) in self.durations.iter().enumerate() {
            if !(d.mean > 0.0) || d.std < 0.0 || !d.mean.is_finite() || !d.std.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "state {s} duration must have positive mean and non-negative std"
                )));
            }
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidConfig("temperature must be positive".into()));
        }
        for (i, b) in self.bursts.iter().enumerate() {
            if !(0.0..=1.0).contains(&b.lambda) {
                return Err(Error::InvalidConfig(format!(
                    "burst {i} uniformity {} outside [0, 1]",
                    b.lambda
                )));
            }
            if b.start_s < 0.0 || b.length_s <= 0.0 || b.start_s + b.length_s > self.duration_s {
                return Err(Error::InvalidConfig(format!(
                    "burst {i} [{}, {}) outside signal of {} s",
                    b.start_s,
                    b.start_s + b.length_s,
                    self.duration_s
                )));
            }
        }
        Ok(())
    }

    /// Uniformity in effect at sample `t`: the maximum over covering bursts,
    /// 0 outside all of them.
    fn lambda_at(&self, t: usize) -> f64 {
        let mut lambda: f64 = 0.0;
        for b in &self.bursts {
            let lo = (b.start_s * self.rate_hz).round() as usize;
            let hi = ((b.start_s + b.length_s) * self.rate_hz).round() as usize;
            if t >= lo && t < hi {
                lambda = lambda.max(b.lambda);
            }
        }
        lambda
    }
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Generate the cyclic ground-truth state sequence for `cfg`.
pub fn generate_ground_truth(cfg: &SynthConfig) -> Result<Vec<usize>> {
    cfg.validate()?;
    let t_len = cfg.t_len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);

    let mut states = Vec::with_capacity(t_len);
    let mut state = 0usize;
    while states.len() < t_len {
        let model = cfg.durations[state];
        let duration = if model.std == 0.0 {
            model.mean.round().max(1.0) as usize
        } else {
            let normal = Normal::new(model.mean, model.std)
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            normal.sample(&mut rng).round().max(1.0) as usize
        };
        for _ in 0..duration {
            if states.len() == t_len {
                break;
            }
            states.push(state);
        }
        state = (state + 1) % cfg.states;
    }
    Ok(states)
}

/// Emit the probability matrix for a ground-truth sequence under `cfg`.
///
/// Row `t` is `(1 - lambda) * softmax((one_hot(gt[t]) + noise) / tau) +
/// lambda * uniform` where `lambda` comes from the burst covering `t` (0
/// elsewhere, which also zeroes the noise term). The noise vector is redrawn
/// only every [`BURST_SEGMENT_S`] seconds while inside a burst, so corrupted
/// stretches hold a wrong tendency for a while instead of flickering.
pub fn emit_probabilities(gt: &[usize], cfg: &SynthConfig) -> Result<ProbabilityMatrix> {
    cfg.validate()?;
    if gt.is_empty() {
        return Err(Error::InvalidConfig("ground truth is empty".into()));
    }
    if let Some(&bad) = gt.iter().find(|&&s| s >= cfg.states) {
        return Err(Error::InvalidConfig(format!(
            "ground-truth state {bad} outside 0..{}",
            cfg.states
        )));
    }

    let states = cfg.states;
    let uniform = 1.0 / states as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let unit_normal = Normal::new(0.0, 1.0).expect("unit normal is valid");
    let segment_samples = ((BURST_SEGMENT_S * cfg.rate_hz).round() as usize).max(1);

    let mut rows = Vec::with_capacity(gt.len());
    let mut logits = vec![0.0; states];
    let mut noise = vec![0.0; states];
    let mut hold_left = 0usize;
    for (t, &truth) in gt.iter().enumerate() {
        let lambda = cfg.lambda_at(t);
        for (s, logit) in logits.iter_mut().enumerate() {
            *logit = if s == truth { 1.0 / cfg.tau } else { 0.0 };
        }
        if lambda > 0.0 {
            if hold_left == 0 {
                for n in noise.iter_mut() {
                    *n = unit_normal.sample(&mut rng);
                }
                hold_left = segment_samples;
            }
            hold_left -= 1;
            let noise_std = lambda * BURST_NOISE_GAIN / cfg.tau;
            for (logit, n) in logits.iter_mut().zip(&noise) {
                *logit += noise_std * n;
            }
        } else {
            hold_left = 0;
        }
        let soft = softmax(&logits);
        let row: Vec<f64> = soft
            .into_iter()
            .map(|p| (1.0 - lambda) * p + lambda * uniform)
            .collect();
        rows.push(row);
    }
    ProbabilityMatrix::new(rows, Some(cfg.rate_hz))
}

/// Ground truth and emissions in one call.
pub fn generate_recording(cfg: &SynthConfig) -> Result<(Vec<usize>, ProbabilityMatrix)> {
    let gt = generate_ground_truth(cfg)?;
    let p = emit_probabilities(&gt, cfg)?;
    Ok((gt, p))
}
