//! Evaluation of decoded sequences against ground truth: sample accuracy
//! plus event-level sensitivity and specificity under center-distance
//! matching.
//!
//! An event is a maximal run of one state. Ground-truth and estimated events
//! of the same state are paired one-to-one, nearest centers first; a pair is
//! admissible only when its center distance is strictly below the tolerance
//! (default 60 ms, converted to samples at the recording rate). Matched
//! events of a positive state are true positives, matched events of a
//! negative state true negatives; unmatched estimated positives are false
//! positives and unmatched ground-truth positives false negatives.
//! Unmatched events of negative states land in no bucket.

use std::collections::HashSet;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

/// A maximal run of one state; `start` and `end` are inclusive sample
/// indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub state: usize,
    pub start: usize,
    pub end: usize,
}

impl Event {
    pub fn center(&self) -> f64 {
        (self.start + self.end) as f64 / 2.0
    }
}

/// Extract the maximal runs of `states`, ordered by start.
///
/// With `restrict = Some((start, end))` only events whose center lies inside
/// the half-open window `[start, end)` are kept; runs are still formed over
/// the whole sequence, so centers are unaffected by the restriction.
pub fn extract_events(states: &[usize], restrict: Option<(usize, usize)>) -> Vec<Event> {
    let mut events = Vec::new();
    if states.is_empty() {
        return events;
    }
    let mut run_start = 0usize;
    for t in 1..=states.len() {
        if t == states.len() || states[t] != states[run_start] {
            events.push(Event {
                state: states[run_start],
                start: run_start,
                end: t - 1,
            });
            run_start = t;
        }
    }
    if let Some((lo, hi)) = restrict {
        events.retain(|e| {
            let c = e.center();
            c >= lo as f64 && c < hi as f64
        });
    }
    events
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

/// Metrics of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Fraction of correctly assigned samples over the evaluated range.
    pub accuracy: f64,
    /// TP / (TP + FN); 1.0 when the denominator is zero (see the flag).
    pub sensitivity: f64,
    /// TN / (TN + FP); 1.0 when the denominator is zero (see the flag).
    pub specificity: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    /// False when TP + FN = 0 and the 0/0 convention kicked in.
    pub sensitivity_defined: bool,
    /// False when TN + FP = 0 and the 0/0 convention kicked in.
    pub specificity_defined: bool,
    /// The evaluated half-open sample range, when restricted.
    pub evaluated_range: Option<(usize, usize)>,
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluate an estimated state sequence against ground truth.
///
/// `tolerance_ms` is converted at `rate_hz` to a strict sample-distance bound
/// for center matching. `restrict` limits both the accuracy computation and
/// the events considered (by run center) to a half-open sample window.
pub fn evaluate(
    gt: &[usize],
    est: &[usize],
    positive_states: &[usize],
    negative_states: &[usize],
    rate_hz: f64,
    tolerance_ms: f64,
    restrict: Option<(usize, usize)>,
) -> Result<MetricsReport> {
    if gt.len() != est.len() {
        return Err(Error::LengthMismatch {
            left: gt.len(),
            right: est.len(),
        });
    }
    if !(rate_hz > 0.0) || !rate_hz.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "sample rate must be positive, got {rate_hz}"
        )));
    }
    let (lo, hi) = match restrict {
        Some((lo, hi)) => {
            if lo >= hi || hi > gt.len() {
                return Err(Error::EmptyEvaluationRange);
            }
            (lo, hi)
        }
        None => {
            if gt.is_empty() {
                return Err(Error::EmptyEvaluationRange);
            }
            (0, gt.len())
        }
    };

    let correct = (lo..hi).filter(|&t| gt[t] == est[t]).count();
    let accuracy = correct as f64 / (hi - lo) as f64;

    let gt_events = extract_events(gt, restrict);
    let est_events = extract_events(est, restrict);
    let tolerance_samples = tolerance_ms * rate_hz / 1000.0;
    let (gt_matched, est_matched) = match_events(&gt_events, &est_events, tolerance_samples);

    let positives: HashSet<usize> = positive_states.iter().copied().collect();
    let negatives: HashSet<usize> = negative_states.iter().copied().collect();

    let mut tp = 0usize;
    let mut fn_count = 0usize;
    let mut tn = 0usize;
    let mut fp = 0usize;
    for (event, matched) in gt_events.iter().zip(&gt_matched) {
        if positives.contains(&event.state) {
            if *matched {
                tp += 1;
            } else {
                fn_count += 1;
            }
        }
    }
    for (event, matched) in est_events.iter().zip(&est_matched) {
        if *matched {
            if negatives.contains(&event.state) {
                tn += 1;
            }
        } else if positives.contains(&event.state) {
            fp += 1;
        }
    }

    let sensitivity_defined = tp + fn_count > 0;
    let specificity_defined = tn + fp > 0;
    Ok(MetricsReport {
        accuracy,
        sensitivity: if sensitivity_defined {
            tp as f64 / (tp + fn_count) as f64
        } else {
            1.0
        },
        specificity: if specificity_defined {
            tn as f64 / (tn + fp) as f64
        } else {
            1.0
        },
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fn_count,
        sensitivity_defined,
        specificity_defined,
        evaluated_range: restrict,
    })
}

/// One-to-one greedy matching between same-state events, nearest centers
/// first; a pair is admissible iff its center distance is strictly below
/// `tolerance_samples`. Equal distances are ordered by (ground-truth index,
/// estimate index) for determinism. Returns matched flags for both sides.
fn match_events(
    gt_events: &[Event],
    est_events: &[Event],
    tolerance_samples: f64,
) -> (Vec<bool>, Vec<bool>) {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (gi, g) in gt_events.iter().enumerate() {
        for (ei, e) in est_events.iter().enumerate() {
            if g.state != e.state {
                continue;
            }
            let distance = (g.center() - e.center()).abs();
            if distance < tolerance_samples {
                candidates.push((distance, gi, ei));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("distances are finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut gt_matched = vec![false; gt_events.len()];
    let mut est_matched = vec![false; est_events.len()];
    for (_, gi, ei) in candidates {
        if !gt_matched[gi] && !est_matched[ei] {
            gt_matched[gi] = true;
            est_matched[ei] = true;
        }
    }
    (gt_matched, est_matched)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_length_extraction() {
        let events = extract_events(&[0, 0, 1, 1, 1, 2], None);
        assert_eq!(
            events,
            vec![
                Event {
                    state: 0,
                    start: 0,
                    end: 1
                },
                Event {
                    state: 1,
                    start: 2,
                    end: 4
                },
                Event {
                    state: 2,
                    start: 5,
                    end: 5
                },
            ]
        );
        assert_eq!(events[0].center(), 0.5);
        assert_eq!(events[1].center(), 3.0);
        assert_eq!(events[2].center(), 5.0);
    }

    #[test]
    fn all_same_state_is_one_event() {
        let events = extract_events(&[3; 7], None);
        assert_eq!(
            events,
            vec![Event {
                state: 3,
                start: 0,
                end: 6
            }]
        );
    }

    #[test]
    fn restriction_keeps_centers_inside() {
        let events = extract_events(&[0, 0, 1, 1, 1, 2], Some((2, 5)));
        // Center 0.5 falls before the window, center 5.0 lands on the open
        // end; only the middle event survives.
        assert_eq!(
            events,
            vec![Event {
                state: 1,
                start: 2,
                end: 4
            }]
        );
    }

    #[test]
    fn identity_scores_perfectly() {
        let gt = vec![0, 0, 1, 1, 2, 2, 3, 3, 0, 0];
        let report = evaluate(&gt, &gt, &[0, 2], &[1, 3], 50.0, 60.0, None).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.sensitivity, 1.0);
        assert_eq!(report.specificity, 1.0);
        assert_eq!(report.false_positives, 0);
        assert_eq!(report.false_negatives, 0);
        assert!(report.sensitivity_defined);
    }

    #[test]
    fn forty_ms_offset_at_50hz_is_a_match() {
        // gt run [10,14] centers at 12, est run [12,16] at 14: the distance
        // of 2 samples is 40 ms at 50 Hz, inside the 60 ms bound.
        let mut gt = vec![1usize; 30];
        for t in 10..=14 {
            gt[t] = 0;
        }
        let mut est = vec![1usize; 30];
        for t in 12..=16 {
            est[t] = 0;
        }
        let report = evaluate(&gt, &est, &[0], &[1], 50.0, 60.0, None).unwrap();
        assert_eq!(report.true_positives, 1);
        assert_eq!(report.false_positives, 0);
        assert_eq!(report.false_negatives, 0);
    }

    #[test]
    fn sixty_ms_offset_at_50hz_is_not_a_match() {
        // Center distance of exactly 3 samples = 60 ms; the bound is strict.
        let mut gt = vec![1usize; 30];
        for t in 10..=14 {
            gt[t] = 0;
        }
        let mut est = vec![1usize; 30];
        for t in 13..=17 {
            est[t] = 0;
        }
        let report = evaluate(&gt, &est, &[0], &[1], 50.0, 60.0, None).unwrap();
        assert_eq!(report.true_positives, 0);
        assert_eq!(report.false_positives, 1);
        assert_eq!(report.false_negatives, 1);
    }

    #[test]
    fn spurious_positive_event_lowers_specificity() {
        // 30 samples at 50 Hz. Ground truth: one S1-like event and one
        // negative stretch. Estimate adds a far-away spurious positive.
        let mut gt = vec![1usize; 30];
        for t in 2..=6 {
            gt[t] = 0;
        }
        let mut est = gt.clone();
        for t in 20..=24 {
            est[t] = 0;
        }
        let baseline = evaluate(&gt, &gt, &[0], &[1], 50.0, 60.0, None).unwrap();
        let with_spurious = evaluate(&gt, &est, &[0], &[1], 50.0, 60.0, None).unwrap();
        assert_eq!(with_spurious.false_positives, baseline.false_positives + 1);
        assert!(with_spurious.specificity < baseline.specificity);
        assert_eq!(with_spurious.true_positives, 1);
    }

    #[test]
    fn closed_form_counts_on_hand_fixture() {
        // gt: 0 at [0,2], 1 at [3,7], 2 at [8,10], 3 at [11,14], 0 at [15,19]
        let gt = vec![0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3, 0, 0, 0, 0, 0];
        // est shifts the first event by one sample (20 ms at 50 Hz, match),
        // misses the state-2 event entirely, keeps everything else.
        let est = vec![1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 3, 3, 3, 3, 0, 0, 0, 0, 0];
        let report = evaluate(&gt, &est, &[0, 2], &[1, 3], 50.0, 60.0, None).unwrap();
        // gt positives: 0@[0,2] matched, 2@[8,10] unmatched, 0@[15,19] matched.
        assert_eq!(report.true_positives, 2);
        assert_eq!(report.false_negatives, 1);
        // est events: 1@0 unmatched negative (no bucket), 0@[1,3] TP,
        // 1@[4,10] matched to gt 1@[3,7]? centers 7.0 vs 5.0 -> 40 ms, TN.
        // 3@[11,14] TN, 0@[15,19] TP. No unmatched est positives.
        assert_eq!(report.false_positives, 0);
        assert_eq!(report.true_negatives, 2);
        assert!((report.sensitivity - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.specificity, 1.0);
        // Accuracy: mismatches at t = 0, 3, 8, 9, 10 -> 15/20.
        assert!((report.accuracy - 0.75).abs() < 1e-12);
    }

    #[test]
    fn zero_over_zero_flags() {
        let gt = vec![1, 1, 1];
        let report = evaluate(&gt, &gt, &[0], &[], 50.0, 60.0, None).unwrap();
        assert!(!report.sensitivity_defined);
        assert!(!report.specificity_defined);
        assert_eq!(report.sensitivity, 1.0);
        assert_eq!(report.specificity, 1.0);
    }

    #[test]
    fn matched_counts_are_symmetric() {
        let gt = vec![0, 0, 1, 1, 0, 0, 1, 1, 0, 0];
        let est = vec![0, 1, 1, 0, 0, 1, 1, 0, 0, 0];
        let gt_events = extract_events(&gt, None);
        let est_events = extract_events(&est, None);
        let (gm, em) = match_events(&gt_events, &est_events, 3.0);
        let gt_count: usize = gm.iter().filter(|&&m| m).count();
        let est_count: usize = em.iter().filter(|&&m| m).count();
        assert_eq!(gt_count, est_count);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            evaluate(&[0, 1], &[0], &[0], &[1], 50.0, 60.0, None),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
        assert!(matches!(
            evaluate(&[0, 1], &[0, 1], &[0], &[1], 50.0, 60.0, Some((1, 1))),
            Err(Error::EmptyEvaluationRange)
        ));
        assert!(matches!(
            evaluate(&[0, 1], &[0, 1], &[0], &[1], 50.0, 60.0, Some((0, 3))),
            Err(Error::EmptyEvaluationRange)
        ));
    }

    #[test]
    fn restrict_full_range_equals_none() {
        let gt = vec![0, 0, 1, 1, 2, 2, 3, 3];
        let est = vec![0, 1, 1, 1, 2, 2, 3, 0];
        let a = evaluate(&gt, &est, &[0, 2], &[1, 3], 50.0, 60.0, None).unwrap();
        let b = evaluate(&gt, &est, &[0, 2], &[1, 3], 50.0, 60.0, Some((0, 8))).unwrap();
        assert_eq!(a.accuracy, b.accuracy);
        assert_eq!(a.true_positives, b.true_positives);
        assert_eq!(a.false_positives, b.false_positives);
        assert_eq!(a.true_negatives, b.true_negatives);
        assert_eq!(a.false_negatives, b.false_negatives);
    }

    #[test]
    fn shrinking_tolerance_never_increases_tp() {
        let gt = vec![1, 0, 0, 1, 1, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 1];
        let est = vec![0, 0, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0, 1, 1, 0, 0];
        let mut last_tp = usize::MAX;
        for tol in [80.0, 60.0, 40.0, 20.0] {
            let report = evaluate(&gt, &est, &[0], &[1], 50.0, tol, None).unwrap();
            assert!(report.true_positives <= last_tp);
            last_tp = report.true_positives;
        }
    }
}
