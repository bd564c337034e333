//! Bidirectional recurrent forward inference: feature sequences in,
//! per-sample state probability distributions out.
//!
//! One cell layer runs forward over time, a second runs backward; the two
//! hidden states of each instant are concatenated and mapped through a
//! softmax output layer. Hidden and cell vectors are zero-initialized at
//! both sequence ends. All computation is in f64 and fully deterministic:
//! identical weights and features give bit-identical output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::ProbabilityMatrix;

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix of f64, just big enough for inference weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ShapeMismatch("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::ShapeMismatch(
                "matrix needs at least one column".into(),
            ));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for &x in row {
                if !x.is_finite() {
                    return Err(Error::NonFiniteInput(format!("row {i}")));
                }
                data.push(x);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// y += A x
    fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[r] += acc;
        }
    }
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Gate weights of one direction: input matrices (M x N), hidden matrices
/// (M x M) and bias vectors (M) for the input, forget and output gates and
/// the cell candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionWeights {
    pub w_xi: Matrix,
    pub w_xf: Matrix,
    pub w_xo: Matrix,
    pub w_xj: Matrix,
    pub w_hi: Matrix,
    pub w_hf: Matrix,
    pub w_ho: Matrix,
    pub w_hj: Matrix,
    pub b_i: Vec<f64>,
    pub b_f: Vec<f64>,
    pub b_o: Vec<f64>,
    pub b_j: Vec<f64>,
}

/// Full bidirectional weight set plus the shared L x 2M output matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmWeights {
    pub forward: DirectionWeights,
    pub backward: DirectionWeights,
    pub w_out: Matrix,
    features: usize,
    memory: usize,
    states: usize,
}

impl LstmWeights {
    pub fn new(
        forward: DirectionWeights,
        backward: DirectionWeights,
        w_out: Matrix,
    ) -> Result<Self> {
        let memory = forward.w_xi.rows();
        let features = forward.w_xi.cols();
        for (name, dir) in [("forward", &forward), ("backward", &backward)] {
            for (mat_name, m) in [
                ("w_xi", &dir.w_xi),
                ("w_xf", &dir.w_xf),
                ("w_xo", &dir.w_xo),
                ("w_xj", &dir.w_xj),
            ] {
                if m.rows() != memory || m.cols() != features {
                    return Err(Error::ShapeMismatch(format!(
                        "{name}.{mat_name} is {}x{}, expected {memory}x{features}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            for (mat_name, m) in [
                ("w_hi", &dir.w_hi),
                ("w_hf", &dir.w_hf),
                ("w_ho", &dir.w_ho),
                ("w_hj", &dir.w_hj),
            ] {
                if m.rows() != memory || m.cols() != memory {
                    return Err(Error::ShapeMismatch(format!(
                        "{name}.{mat_name} is {}x{}, expected {memory}x{memory}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            for (vec_name, v) in [
                ("b_i", &dir.b_i),
                ("b_f", &dir.b_f),
                ("b_o", &dir.b_o),
                ("b_j", &dir.b_j),
            ] {
                if v.len() != memory {
                    return Err(Error::ShapeMismatch(format!(
                        "{name}.{vec_name} has {} entries, expected {memory}",
                        v.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFiniteInput(format!("{name}.{vec_name}")));
                }
            }
        }
        if w_out.cols() != 2 * memory {
            return Err(Error::ShapeMismatch(format!(
                "output matrix has {} columns, expected 2M = {}",
                w_out.cols(),
                2 * memory
            )));
        }
        if w_out.rows() < 2 {
            return Err(Error::TooFewStates {
                states: w_out.rows(),
            });
        }
        let states = w_out.rows();
        Ok(Self {
            forward,
            backward,
            w_out,
            features,
            memory,
            states,
        })
    }

    /// Feature count N.
    pub fn features(&self) -> usize {
        self.features
    }

    /// Memory size M of each cell.
    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Output state count L.
    pub fn states(&self) -> usize {
        self.states
    }

    /// Deterministic random weights, uniform over [-0.05, 0.05].
    ///
    /// Exists to build test fixtures and demo inputs; there is no training
    /// here, real weights come from a weight file.
    pub fn seeded_uniform(features: usize, memory: usize, states: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mat = |r: usize, c: usize| {
            let rows = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-0.05..=0.05)).collect())
                .collect();
            Matrix::from_rows(rows).expect("generated matrix is rectangular")
        };
        let dir = |mat: &mut dyn FnMut(usize, usize) -> Matrix| DirectionWeights {
            w_xi: mat(memory, features),
            w_xf: mat(memory, features),
            w_xo: mat(memory, features),
            w_xj: mat(memory, features),
            w_hi: mat(memory, memory),
            w_hf: mat(memory, memory),
            w_ho: mat(memory, memory),
            w_hj: mat(memory, memory),
            b_i: mat(1, memory).row(0).to_vec(),
            b_f: mat(1, memory).row(0).to_vec(),
            b_o: mat(1, memory).row(0).to_vec(),
            b_j: mat(1, memory).row(0).to_vec(),
        };
        let forward = dir(&mut mat);
        let backward = dir(&mut mat);
        let w_out = mat(states, 2 * memory);
        Self::new(forward, backward, w_out).expect("generated shapes are consistent")
    }

    /// All-zero weights; useful as a fixed point in tests.
    pub fn zeros(features: usize, memory: usize, states: usize) -> Self {
        let dir = || DirectionWeights {
            w_xi: Matrix::zeros(memory, features),
            w_xf: Matrix::zeros(memory, features),
            w_xo: Matrix::zeros(memory, features),
            w_xj: Matrix::zeros(memory, features),
            w_hi: Matrix::zeros(memory, memory),
            w_hf: Matrix::zeros(memory, memory),
            w_ho: Matrix::zeros(memory, memory),
            w_hj: Matrix::zeros(memory, memory),
            b_i: vec![0.0; memory],
            b_f: vec![0.0; memory],
            b_o: vec![0.0; memory],
            b_j: vec![0.0; memory],
        };
        Self::new(dir(), dir(), Matrix::zeros(states, 2 * memory)).expect("zero shapes consistent")
    }
}

/// A T x N sequence of feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence(Matrix);

impl FeatureSequence {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Self(Matrix::from_rows(rows)?))
    }

    pub fn t_len(&self) -> usize {
        self.0.rows()
    }

    pub fn features(&self) -> usize {
        self.0.cols()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        self.0.row(t)
    }
}

// ---------------------------------------------------------------------------
// Forward pass
// ---------------------------------------------------------------------------

/// Gate activation placement.
///
/// `Paper` puts tanh on the input and output gates and a logistic sigmoid
/// on the forget gate and cell candidate. `Standard` is the conventional
/// cell: sigmoid on all three gates, tanh on the candidate. Both share
/// `c_t = c_(t-1) * f_t + i_t * g_t` and `h_t = tanh(c_t) * o_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GateMode {
    #[default]
    Paper,
    Standard,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Run the bidirectional forward pass; returns the T x 2M hidden matrix,
/// each row the concatenation of the forward and backward hidden states of
/// that instant.
pub fn lstm_forward(weights: &LstmWeights, x: &FeatureSequence, mode: GateMode) -> Result<Matrix> {
    if x.features() != weights.features() {
        return Err(Error::ShapeMismatch(format!(
            "feature sequence has {} features, weights expect {}",
            x.features(),
            weights.features()
        )));
    }
    let t_len = x.t_len();
    let memory = weights.memory();

    let mut hidden = Matrix::zeros(t_len, 2 * memory);

    // Lower layer: t = 1..T.
    let mut h = vec![0.0; memory];
    let mut c = vec![0.0; memory];
    for t in 0..t_len {
        step(&weights.forward, x.row(t), &mut h, &mut c, mode);
        hidden.data[t * 2 * memory..t * 2 * memory + memory].copy_from_slice(&h);
    }

    // Upper layer: t = T..1.
    let mut h = vec![0.0; memory];
    let mut c = vec![0.0; memory];
    for t in (0..t_len).rev() {
        step(&weights.backward, x.row(t), &mut h, &mut c, mode);
        hidden.data[t * 2 * memory + memory..(t + 1) * 2 * memory].copy_from_slice(&h);
    }

    Ok(hidden)
}

/// One cell update in place.
fn step(w: &DirectionWeights, x: &[f64], h: &mut [f64], c: &mut [f64], mode: GateMode) {
    let m = h.len();
    let mut gate_i = w.b_i.clone();
    w.w_xi.matvec_into(x, &mut gate_i);
    w.w_hi.matvec_into(h, &mut gate_i);
    let mut gate_f = w.b_f.clone();
    w.w_xf.matvec_into(x, &mut gate_f);
    w.w_hf.matvec_into(h, &mut gate_f);
    let mut gate_o = w.b_o.clone();
    w.w_xo.matvec_into(x, &mut gate_o);
    w.w_ho.matvec_into(h, &mut gate_o);
    let mut candidate = w.b_j.clone();
    w.w_xj.matvec_into(x, &mut candidate);
    w.w_hj.matvec_into(h, &mut candidate);

    for k in 0..m {
        let (i_k, f_k, o_k, g_k) = match mode {
            GateMode::Paper => (
                gate_i[k].tanh(),
                sigmoid(gate_f[k]),
                gate_o[k].tanh(),
                sigmoid(candidate[k]),
            ),
            GateMode::Standard => (
                sigmoid(gate_i[k]),
                sigmoid(gate_f[k]),
                sigmoid(gate_o[k]),
                candidate[k].tanh(),
            ),
        };
        c[k] = c[k] * f_k + i_k * g_k;
        h[k] = c[k].tanh() * o_k;
    }
}

// ---------------------------------------------------------------------------
// Output layer
// ---------------------------------------------------------------------------

/// Map a T x 2M hidden matrix through the output layer; row t becomes
/// `softmax(w_out * h_t)`. Softmax uses the max-shift for stability; rows of
/// the result sum to 1.
pub fn output_probabilities(w_out: &Matrix, hidden: &Matrix) -> Result<ProbabilityMatrix> {
    if w_out.cols() != hidden.cols() {
        return Err(Error::ShapeMismatch(format!(
            "output matrix has {} columns, hidden vectors have {}",
            w_out.cols(),
            hidden.cols()
        )));
    }
    let states = w_out.rows();
    if states < 2 {
        return Err(Error::TooFewStates { states });
    }

    let mut rows = Vec::with_capacity(hidden.rows());
    let mut logits = vec![0.0; states];
    for t in 0..hidden.rows() {
        logits.iter_mut().for_each(|v| *v = 0.0);
        let h = hidden.row(t);
        for s in 0..states {
            let mut acc = 0.0;
            for (a, b) in w_out.row(s).iter().zip(h) {
                acc += a * b;
            }
            logits[s] = acc;
        }
        rows.push(softmax(&logits));
    }
    ProbabilityMatrix::new(rows, None)
}

/// Softmax with the max-logit shift.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Full inference pipeline: forward pass then output layer.
pub fn infer(
    weights: &LstmWeights,
    x: &FeatureSequence,
    mode: GateMode,
) -> Result<ProbabilityMatrix> {
    let hidden = lstm_forward(weights, x, mode)?;
    output_probabilities(&weights.w_out, &hidden)
}
