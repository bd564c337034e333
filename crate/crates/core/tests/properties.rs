//! Cross-module invariants, mostly property-based: the DP decoders against
//! the exhaustive oracles, transition validity against the adjacency-product
//! encoding, window-method equivalence, metric symmetries and emission
//! behavior of the synthetic generator.

use proptest::prelude::*;

use cycleseg::decode::{argmax_decode, build_decoding_graph, viterbi_decode, DecodingGraph};
use cycleseg::lstm::{infer, lstm_forward, FeatureSequence, GateMode, LstmWeights};
use cycleseg::metrics::evaluate;
use cycleseg::oracle::{brute_force_full, brute_force_window};
use cycleseg::synth::{generate_recording, NoiseBurst, SynthConfig};
use cycleseg::types::{is_valid_sequence, CyclicTransitionModel, ProbabilityMatrix};
use cycleseg::window::{window_decode, window_decode_per_start, WindowSpec};

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn instance(
    max_t: usize,
    max_l: usize,
) -> impl Strategy<Value = (ProbabilityMatrix, CyclicTransitionModel)> {
    (1..=max_t, 2..=max_l).prop_flat_map(|(t, l)| {
        prop::collection::vec(prop::collection::vec(0.01f64..1.0, l), t).prop_map(move |rows| {
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .map(|row| {
                    let sum: f64 = row.iter().sum();
                    row.into_iter().map(|v| v / sum).collect()
                })
                .collect();
            (
                ProbabilityMatrix::new(rows, None).expect("normalized rows"),
                CyclicTransitionModel::new(l).expect("l >= 2"),
            )
        })
    })
}

fn objective_of(p: &ProbabilityMatrix, states: &[usize], offset: usize) -> f64 {
    states
        .iter()
        .enumerate()
        .map(|(i, &s)| p.get(offset + i, s))
        .sum()
}

// ---------------------------------------------------------------------------
// Transition model
// ---------------------------------------------------------------------------

proptest! {
    /// A sequence passes validity iff every step has a one-hot adjacency
    /// product of exactly 1.
    #[test]
    fn validity_matches_adjacency_product(
        l in 2usize..=5,
        seq in prop::collection::vec(0usize..5, 1..12),
    ) {
        let seq: Vec<usize> = seq.into_iter().map(|s| s % l).collect();
        let model = CyclicTransitionModel::new(l).unwrap();
        let q = model.adjacency();
        let product_ok = seq.windows(2).all(|w| {
            // one_hot(u)^T Q one_hot(v) = Q[u][v]
            q[w[0]][w[1]] == 1
        });
        prop_assert_eq!(is_valid_sequence(&model, &seq).unwrap(), product_ok);
    }
}

// ---------------------------------------------------------------------------
// Full decode
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn viterbi_matches_brute_force((p, model) in instance(12, 4)) {
        let dp = viterbi_decode(&p, &model).unwrap();
        let exhaustive = brute_force_full(&p, &model).unwrap();
        prop_assert!((dp.objective - exhaustive.objective).abs() <= 1e-12);
        prop_assert_eq!(dp.states, exhaustive.states);
    }

    #[test]
    fn viterbi_output_is_valid_and_dominant(
        (p, model) in instance(12, 4),
        seed_seq in prop::collection::vec(any::<bool>(), 12),
        start in 0usize..4,
    ) {
        let dp = viterbi_decode(&p, &model).unwrap();
        prop_assert!(is_valid_sequence(&model, &dp.states).unwrap());

        // Bounded above by the per-row maxima.
        let baseline = argmax_decode(&p);
        prop_assert!(dp.objective <= baseline.objective + 1e-12);

        // Dominates any specific valid assignment.
        let l = model.states();
        let mut seq = vec![start % l];
        for &advance in seed_seq.iter().take(p.t_len() - 1) {
            let last = *seq.last().unwrap();
            seq.push(if advance { (last + 1) % l } else { last });
        }
        prop_assert!(dp.objective >= objective_of(&p, &seq, 0) - 1e-12);
    }

    /// The DP value equals the longest origin-destination path on the
    /// explicit graph, computed by Bellman-Ford over negated distances.
    #[test]
    fn dp_equals_bellman_ford((p, model) in instance(10, 4)) {
        let graph = build_decoding_graph(&p, &model).unwrap();
        let n = graph.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        dist[DecodingGraph::ORIGIN] = 0.0;
        for _ in 0..n - 1 {
            let mut changed = false;
            for arc in graph.arcs() {
                let candidate = dist[arc.from] - arc.dist;
                if candidate < dist[arc.to] {
                    dist[arc.to] = candidate;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let dp = viterbi_decode(&p, &model).unwrap();
        prop_assert!((-dist[DecodingGraph::DESTINATION] - dp.objective).abs() <= 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Window decode
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn window_methods_agree_and_match_oracle(
        (p, model) in instance(12, 4),
        w in 1usize..=6,
    ) {
        let width = w.min(p.t_len());
        let spec = WindowSpec::samples(width).unwrap();
        let parallel = window_decode(&p, &model, &spec).unwrap();
        let sequential = window_decode_per_start(&p, &model, &spec).unwrap();
        prop_assert_eq!(&parallel, &sequential);

        let exhaustive = brute_force_window(&p, &model, &spec).unwrap();
        prop_assert!((parallel.objective - exhaustive.objective).abs() <= 1e-12);
        prop_assert_eq!(parallel.start, exhaustive.start);
        prop_assert_eq!(&parallel.states, &exhaustive.states);

        prop_assert!(is_valid_sequence(&model, &parallel.states).unwrap());
    }

    /// The selected window dominates any specific contiguous valid
    /// assignment of the same width.
    #[test]
    fn window_dominates_fixed_assignments(
        (p, model) in instance(12, 4),
        w in 1usize..=6,
        start_frac in 0.0f64..1.0,
        seq_seed in prop::collection::vec(any::<bool>(), 6),
        first in 0usize..4,
    ) {
        let width = w.min(p.t_len());
        let spec = WindowSpec::samples(width).unwrap();
        let best = window_decode(&p, &model, &spec).unwrap();

        let max_start = p.t_len() - width;
        let start = ((max_start as f64 + 1.0) * start_frac) as usize;
        let start = start.min(max_start);
        let l = model.states();
        let mut seq = vec![first % l];
        for &advance in seq_seed.iter().take(width - 1) {
            let last = *seq.last().unwrap();
            seq.push(if advance { (last + 1) % l } else { last });
        }
        prop_assert!(best.objective >= objective_of(&p, &seq, start) - 1e-12);
    }

    /// In-window states are an optimal constrained decode of the submatrix.
    #[test]
    fn window_restriction_consistency(
        (p, model) in instance(12, 4),
        w in 1usize..=6,
    ) {
        let width = w.min(p.t_len());
        let spec = WindowSpec::samples(width).unwrap();
        let best = window_decode(&p, &model, &spec).unwrap();
        let sub = p.submatrix(best.start, best.width);
        let direct = viterbi_decode(&sub, &model).unwrap();
        prop_assert_eq!(best.states, direct.states);
        prop_assert_eq!(best.objective, direct.objective);
    }
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

proptest! {
    /// Accuracy is invariant under a consistent relabeling of both
    /// sequences.
    #[test]
    fn accuracy_relabel_invariance(
        gt in prop::collection::vec(0usize..4, 4..40),
        flips in prop::collection::vec(any::<bool>(), 4..40),
        shift in 1usize..4,
    ) {
        let est: Vec<usize> = gt
            .iter()
            .zip(flips.iter().chain(std::iter::repeat(&false)))
            .map(|(&s, &flip)| if flip { (s + 1) % 4 } else { s })
            .collect();
        let relabel = |v: &[usize]| -> Vec<usize> { v.iter().map(|&s| (s + shift) % 4).collect() };
        let pos = [0usize, 2];
        let neg = [1usize, 3];
        let pos_r: Vec<usize> = pos.iter().map(|&s| (s + shift) % 4).collect();
        let neg_r: Vec<usize> = neg.iter().map(|&s| (s + shift) % 4).collect();
        let a = evaluate(&gt, &est, &pos, &neg, 50.0, 60.0, None).unwrap();
        let b = evaluate(&relabel(&gt), &relabel(&est), &pos_r, &neg_r, 50.0, 60.0, None).unwrap();
        prop_assert_eq!(a.accuracy, b.accuracy);
        prop_assert_eq!(a.true_positives, b.true_positives);
        prop_assert_eq!(a.false_positives, b.false_positives);
    }

    /// Restricting to the full range changes nothing.
    #[test]
    fn restrict_full_equals_unrestricted(
        gt in prop::collection::vec(0usize..3, 3..30),
        flips in prop::collection::vec(any::<bool>(), 3..30),
    ) {
        let est: Vec<usize> = gt
            .iter()
            .zip(flips.iter().chain(std::iter::repeat(&false)))
            .map(|(&s, &flip)| if flip { (s + 1) % 3 } else { s })
            .collect();
        let a = evaluate(&gt, &est, &[0], &[1, 2], 50.0, 60.0, None).unwrap();
        let b = evaluate(&gt, &est, &[0], &[1, 2], 50.0, 60.0, Some((0, gt.len()))).unwrap();
        prop_assert_eq!(a.accuracy, b.accuracy);
        prop_assert_eq!(a.sensitivity, b.sensitivity);
        prop_assert_eq!(a.specificity, b.specificity);
    }

    /// Shrinking the tolerance never increases the matched count.
    #[test]
    fn tolerance_monotonicity(
        gt in prop::collection::vec(0usize..3, 8..40),
        flips in prop::collection::vec(any::<bool>(), 8..40),
    ) {
        let est: Vec<usize> = gt
            .iter()
            .zip(flips.iter().chain(std::iter::repeat(&false)))
            .map(|(&s, &flip)| if flip { (s + 2) % 3 } else { s })
            .collect();
        let mut last = usize::MAX;
        for tol in [80.0, 60.0, 40.0, 20.0] {
            let report = evaluate(&gt, &est, &[0], &[1, 2], 50.0, tol, None).unwrap();
            prop_assert!(report.true_positives <= last);
            last = report.true_positives;
        }
    }
}

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn inference_rows_validate_and_hidden_is_bounded(
        seed in any::<u64>(),
        t in 1usize..12,
    ) {
        let weights = LstmWeights::seeded_uniform(3, 4, 4, seed);
        let rows: Vec<Vec<f64>> = (0..t)
            .map(|i| (0..3).map(|k| ((i * 3 + k) as f64 * 0.17).sin() * 2.0).collect())
            .collect();
        let x = FeatureSequence::new(rows).unwrap();
        for mode in [GateMode::Paper, GateMode::Standard] {
            let hidden = lstm_forward(&weights, &x, mode).unwrap();
            for t in 0..hidden.rows() {
                for &v in hidden.row(t) {
                    prop_assert!(v.abs() <= 1.0);
                }
            }
            let p = infer(&weights, &x, mode).unwrap();
            for t in 0..p.t_len() {
                let sum: f64 = p.row(t).iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-9);
            }
        }
    }

    /// The shifted softmax agrees with the naive exponentiation whenever the
    /// latter is representable.
    #[test]
    fn softmax_shift_stability(logits in prop::collection::vec(-30.0f64..30.0, 2..6)) {
        let shifted = cycleseg::lstm::softmax(&logits);
        let exps: Vec<f64> = logits.iter().map(|&x| x.exp()).collect();
        let sum: f64 = exps.iter().sum();
        for (a, e) in shifted.iter().zip(&exps) {
            prop_assert!((a - e / sum).abs() <= 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// Synthetic generator + window selection
// ---------------------------------------------------------------------------

/// With a mid-signal burst and a window narrower than the burst-free span,
/// the selected window avoids the burst in at least 95 of 100 seeds.
#[test]
fn selected_window_avoids_mid_signal_burst() {
    let model = CyclicTransitionModel::new(4).unwrap();
    let spec = WindowSpec::samples(250).unwrap();
    let burst_range = (8.0 * 50.0) as usize..(12.0 * 50.0) as usize;
    let mut disjoint = 0;
    for seed in 0..100 {
        let cfg = SynthConfig::pcg_like(20.0, seed).with_burst(NoiseBurst {
            start_s: 8.0,
            length_s: 4.0,
            lambda: 0.9,
        });
        let (_, p) = generate_recording(&cfg).unwrap();
        let result = window_decode(&p, &model, &spec).unwrap();
        let window = result.start..result.start + result.width;
        if window.end <= burst_range.start || window.start >= burst_range.end {
            disjoint += 1;
        }
    }
    assert!(
        disjoint >= 95,
        "only {disjoint}/100 windows avoided the burst"
    );
}
