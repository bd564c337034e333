//! Report structures for evaluation output: single-recording reports and the
//! multi-method comparison report with per-row detail and aggregates.

use serde::Serialize;

use cycleseg::metrics::MetricsReport;

/// One evaluated row.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub recording: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub sensitivity_defined: bool,
    pub specificity_defined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_start: Option<usize>,
}

impl ReportRow {
    pub fn new(recording: &str, trial: Option<usize>, metrics: &MetricsReport) -> Self {
        Self {
            recording: recording.to_string(),
            trial,
            accuracy: metrics.accuracy,
            sensitivity: metrics.sensitivity,
            specificity: metrics.specificity,
            true_positives: metrics.true_positives,
            false_positives: metrics.false_positives,
            true_negatives: metrics.true_negatives,
            false_negatives: metrics.false_negatives,
            sensitivity_defined: metrics.sensitivity_defined,
            specificity_defined: metrics.specificity_defined,
            window_start: None,
        }
    }

    pub fn with_window_start(mut self, start: usize) -> Self {
        self.window_start = Some(start);
        self
    }
}

/// Mean/median triple over rows.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Aggregate {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
}

/// Rowsplus aggregates of one method.
#[derive(Debug, Clone, Serialize)]
pub struct MethodReport {
    pub mean: Aggregate,
    pub median: Aggregate,
    pub rows: Vec<ReportRow>,
}

impl MethodReport {
    pub fn from_rows(rows: Vec<ReportRow>) -> Self {
        let mean = Aggregate {
            accuracy: mean(rows.iter().map(|r| r.accuracy)),
            sensitivity: mean(rows.iter().map(|r| r.sensitivity)),
            specificity: mean(rows.iter().map(|r| r.specificity)),
        };
        let median = Aggregate {
            accuracy: median(rows.iter().map(|r| r.accuracy)),
            sensitivity: median(rows.iter().map(|r| r.sensitivity)),
            specificity: median(rows.iter().map(|r| r.specificity)),
        };
        Self { mean, median, rows }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let collected: Vec<f64> = values.collect();
    if collected.is_empty() {
        return f64::NAN;
    }
    collected.iter().sum::<f64>() / collected.len() as f64
}

fn median(values: impl Iterator<Item = f64>) -> f64 {
    let mut collected: Vec<f64> = values.collect();
    if collected.is_empty() {
        return f64::NAN;
    }
    collected.sort_by(|a, b| a.partial_cmp(b).expect("finite metric"));
    let n = collected.len();
    if n % 2 == 1 {
        collected[n / 2]
    } else {
        (collected[n / 2 - 1] + collected[n / 2]) / 2.0
    }
}

/// The full comparison report.
#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub corpus: String,
    pub recordings: usize,
    pub trials: usize,
    pub seed: u64,
    pub window_samples: usize,
    pub rate_hz: f64,
    pub argmax_full: MethodReport,
    pub window_viterbi: MethodReport,
    pub argmax_in_window: MethodReport,
    pub argmax_random_window: MethodReport,
}

impl CompareReport {
    pub fn methods(&self) -> [(&'static str, &MethodReport); 4] {
        [
            ("argmax_full", &self.argmax_full),
            ("window_viterbi", &self.window_viterbi),
            ("argmax_in_window", &self.argmax_in_window),
            ("argmax_random_window", &self.argmax_random_window),
        ]
    }

    /// Aligned text table of the aggregates.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<22} {:>10} {:>10} {:>10}\n",
            "method", "mean A", "mean Sens", "mean Spec"
        ));
        for (name, report) in self.methods() {
            out.push_str(&format!(
                "{:<22} {:>10.4} {:>10.4} {:>10.4}\n",
                name, report.mean.accuracy, report.mean.sensitivity, report.mean.specificity
            ));
        }
        out
    }
}

/// Report for a single evaluation run.
#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub mean: Aggregate,
    pub rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn single(row: ReportRow) -> Self {
        let mean = Aggregate {
            accuracy: row.accuracy,
            sensitivity: row.sensitivity,
            specificity: row.specificity,
        };
        Self {
            mean,
            rows: vec![row],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(recording: &str, a: f64, sens: f64, spec: f64) -> ReportRow {
        ReportRow {
            recording: recording.to_string(),
            trial: None,
            accuracy: a,
            sensitivity: sens,
            specificity: spec,
            true_positives: 0,
            false_positives: 0,
            true_negatives: 0,
            false_negatives: 0,
            sensitivity_defined: true,
            specificity_defined: true,
            window_start: None,
        }
    }

    #[test]
    fn means_are_arithmetic_means_of_rows() {
        let rows = vec![
            row("a", 0.5, 0.25, 1.0),
            row("b", 0.75, 0.5, 0.5),
            row("c", 1.0, 0.75, 0.25),
        ];
        let report = MethodReport::from_rows(rows.clone());
        let expected: f64 = rows.iter().map(|r| r.accuracy).sum::<f64>() / 3.0;
        assert!((report.mean.accuracy - expected).abs() < 1e-12);
        assert!((report.mean.sensitivity - 0.5).abs() < 1e-12);
        assert!((report.median.accuracy - 0.75).abs() < 1e-12);
    }

    #[test]
    fn even_count_median_averages_middles() {
        let rows = vec![row("a", 0.2, 0.0, 0.0), row("b", 0.8, 0.0, 0.0)];
        let report = MethodReport::from_rows(rows);
        assert!((report.median.accuracy - 0.5).abs() < 1e-12);
    }
}
