//! Full-sequence decoding: the per-sample argmax baseline and the exact
//! constrained decoder.
//!
//! The constrained problem is a longest-path problem in a time-layered DAG
//! (one vertex per sample/state pair plus an origin and a destination). The
//! production decoder runs a single dynamic-programming sweep over the time
//! layers, which is O(T·L) on this graph; [`build_decoding_graph`] exposes
//! the explicit graph for formulation export and for independent path-based
//! cross-checks.

use crate::error::{Error, Result};
use crate::types::{CyclicTransitionModel, DecodedSequence, ProbabilityMatrix};

// ---------------------------------------------------------------------------
// Argmax baseline
// ---------------------------------------------------------------------------

/// Pick the most likely state independently at every sample.
///
/// Ties go to the smaller state index. The result is *not* guaranteed to
/// satisfy the transition model; that is the documented flaw of the baseline,
/// which the constrained decoder fixes.
pub fn argmax_decode(p: &ProbabilityMatrix) -> DecodedSequence {
    let mut states = Vec::with_capacity(p.t_len());
    let mut objective = 0.0;
    for t in 0..p.t_len() {
        let row = p.row(t);
        let mut best = 0usize;
        for (s, &value) in row.iter().enumerate().skip(1) {
            if value > row[best] {
                best = s;
            }
        }
        states.push(best);
        objective += row[best];
    }
    DecodedSequence { states, objective }
}

// ---------------------------------------------------------------------------
// Decoding graph
// ---------------------------------------------------------------------------

/// Vertex id inside a [`DecodingGraph`]. The origin is 0, the destination 1
/// and grid vertex (t, s) maps to `2 + t*L + s`, so ids increase with the
/// time layer and the arc list is already in topological order.
pub type VertexId = usize;

/// An arc with its distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
    pub dist: f64,
}

/// Explicit time-layered DAG for the full decoding problem.
///
/// Arcs are exactly: origin to every first-layer vertex, the two allowed
/// transitions out of every grid vertex of layers 1..T-1, and every
/// last-layer vertex to the destination. Every arc entering grid vertex
/// (t, s) carries distance `p[t][s]`; arcs into the destination carry 0.
/// Totals: |V| = T·L + 2 and |A| = 2·L·T.
#[derive(Debug, Clone)]
pub struct DecodingGraph {
    t_len: usize,
    states: usize,
    arcs: Vec<Arc>,
}

impl DecodingGraph {
    pub const ORIGIN: VertexId = 0;
    pub const DESTINATION: VertexId = 1;

    /// Id of grid vertex (t, s).
    pub fn vertex(&self, t: usize, s: usize) -> VertexId {
        2 + t * self.states + s
    }

    pub fn vertex_count(&self) -> usize {
        self.t_len * self.states + 2
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs in topological order of their target layer.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn t_len(&self) -> usize {
        self.t_len
    }

    pub fn states(&self) -> usize {
        self.states
    }
}

/// Build the explicit decoding DAG for `p` under `model`.
pub fn build_decoding_graph(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
) -> Result<DecodingGraph> {
    check_dims(p, model)?;
    let t_len = p.t_len();
    let states = p.states();
    let mut graph = DecodingGraph {
        t_len,
        states,
        arcs: Vec::with_capacity(2 * states * t_len),
    };

    for s in 0..states {
        graph.arcs.push(Arc {
            from: DecodingGraph::ORIGIN,
            to: graph.vertex(0, s),
            dist: p.get(0, s),
        });
    }
    for t in 0..t_len - 1 {
        for s in 0..states {
            for succ in model.successors(s) {
                graph.arcs.push(Arc {
                    from: graph.vertex(t, s),
                    to: graph.vertex(t + 1, succ),
                    dist: p.get(t + 1, succ),
                });
            }
        }
    }
    for s in 0..states {
        graph.arcs.push(Arc {
            from: graph.vertex(t_len - 1, s),
            to: DecodingGraph::DESTINATION,
            dist: 0.0,
        });
    }

    debug_assert_eq!(graph.arc_count(), 2 * states * t_len);
    Ok(graph)
}

// ---------------------------------------------------------------------------
// Constrained decoding
// ---------------------------------------------------------------------------

/// Decode the transition-valid sequence maximizing the summed probability.
///
/// Single forward DP sweep over the time layers with backtracking.
/// Deterministic tie-breaking: among equally good predecessors the smaller
/// state index wins, and so does the smaller index among optimal final
/// states. Equivalently, among all optimal sequences this returns the one
/// whose reversed state list is lexicographically smallest.
pub fn viterbi_decode(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
) -> Result<DecodedSequence> {
    check_dims(p, model)?;
    let t_len = p.t_len();
    let states = p.states();

    let mut value = p.row(0).to_vec();
    let mut prev = value.clone();
    // psi[t][s]: chosen predecessor of state s at time t (t >= 1).
    let mut psi = vec![0u32; t_len.saturating_sub(1) * states];

    for t in 1..t_len {
        std::mem::swap(&mut prev, &mut value);
        let row = p.row(t);
        for s in 0..states {
            let [stay, advance] = model.predecessors(s);
            // `predecessors` yields stay first; prefer the smaller index on ties.
            let (best_prev, best_val) = if stay < advance {
                if prev[stay] >= prev[advance] {
                    (stay, prev[stay])
                } else {
                    (advance, prev[advance])
                }
            } else if prev[advance] >= prev[stay] {
                (advance, prev[advance])
            } else {
                (stay, prev[stay])
            };
            value[s] = best_val + row[s];
            psi[(t - 1) * states + s] = best_prev as u32;
        }
    }

    let mut best_state = 0usize;
    for s in 1..states {
        if value[s] > value[best_state] {
            best_state = s;
        }
    }

    let mut sequence = vec![0usize; t_len];
    sequence[t_len - 1] = best_state;
    for t in (1..t_len).rev() {
        sequence[t - 1] = psi[(t - 1) * states + sequence[t]] as usize;
    }

    Ok(DecodedSequence {
        states: sequence,
        objective: value[best_state],
    })
}

fn check_dims(p: &ProbabilityMatrix, model: &CyclicTransitionModel) -> Result<()> {
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::is_valid_sequence;

    fn matrix(rows: &[&[f64]]) -> ProbabilityMatrix {
        ProbabilityMatrix::new(rows.iter().map(|r| r.to_vec()).collect(), None).unwrap()
    }

    /// Bellman-Ford longest path via sign-flipped distances; independent of
    /// the DP sweep, used only to cross-check it.
    fn bellman_ford_longest(graph: &DecodingGraph) -> f64 {
        let n = graph.vertex_count();
        let mut dist = vec![f64::INFINITY; n];
        dist[DecodingGraph::ORIGIN] = 0.0;
        for _ in 0..n - 1 {
            let mut changed = false;
            for arc in graph.arcs() {
                let candidate = dist[arc.from] + (-arc.dist);
                if candidate < dist[arc.to] {
                    dist[arc.to] = candidate;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        -dist[DecodingGraph::DESTINATION]
    }

    #[test]
    fn argmax_row_maxima() {
        let p = matrix(&[&[0.6, 0.2, 0.2], &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2]]);
        let decoded = argmax_decode(&p);
        assert_eq!(decoded.states, vec![0, 2, 0]);
        assert!((decoded.objective - 1.8).abs() < 1e-12);
        let model = CyclicTransitionModel::new(3).unwrap();
        assert!(!is_valid_sequence(&model, &decoded.states).unwrap());
    }

    #[test]
    fn argmax_one_hot_rows() {
        let p = matrix(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let decoded = argmax_decode(&p);
        assert_eq!(decoded.states, vec![0, 1]);
        assert_eq!(decoded.objective, 2.0);
    }

    #[test]
    fn argmax_tie_prefers_smaller_index() {
        let p = matrix(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert_eq!(argmax_decode(&p).states, vec![0, 0]);
    }

    #[test]
    fn graph_counts() {
        let model3 = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[&[0.5, 0.3, 0.2], &[0.1, 0.7, 0.2], &[0.3, 0.3, 0.4]]);
        let graph = build_decoding_graph(&p, &model3).unwrap();
        assert_eq!(graph.vertex_count(), 11);
        assert_eq!(graph.arc_count(), 18);

        let model2 = CyclicTransitionModel::new(2).unwrap();
        let single = matrix(&[&[0.4, 0.6]]);
        let graph = build_decoding_graph(&single, &model2).unwrap();
        assert_eq!(graph.vertex_count(), 4);
        assert_eq!(graph.arc_count(), 4);
    }

    #[test]
    fn graph_count_formula_at_scale() {
        let model = CyclicTransitionModel::new(4).unwrap();
        let rows: Vec<Vec<f64>> = (0..100).map(|_| vec![0.25; 4]).collect();
        let p = ProbabilityMatrix::new(rows, None).unwrap();
        let graph = build_decoding_graph(&p, &model).unwrap();
        // 2LT by enumeration: L origin arcs + 2L(T-1) grid arcs + L sink arcs.
        let enumerated = 4 + 2 * 4 * 99 + 4;
        assert_eq!(graph.arc_count(), enumerated);
        assert_eq!(graph.arc_count(), 800);
    }

    #[test]
    fn graph_arc_structure() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[&[0.5, 0.3, 0.2], &[0.1, 0.7, 0.2]]);
        let graph = build_decoding_graph(&p, &model).unwrap();
        for arc in graph.arcs() {
            if arc.to == DecodingGraph::DESTINATION {
                assert_eq!(arc.dist, 0.0);
            } else {
                let idx = arc.to - 2;
                let (t, s) = (idx / 3, idx % 3);
                assert_eq!(arc.dist, p.get(t, s), "arc into v_{t}{s} carries p");
            }
        }
    }

    #[test]
    fn viterbi_canonical_examples() {
        let model = CyclicTransitionModel::new(3).unwrap();

        let p = matrix(&[&[0.5, 0.3, 0.2], &[0.1, 0.7, 0.2], &[0.3, 0.3, 0.4]]);
        let decoded = viterbi_decode(&p, &model).unwrap();
        assert_eq!(decoded.states, vec![0, 1, 2]);
        assert!((decoded.objective - 1.6).abs() < 1e-12);

        // The argmax baseline is invalid on this one; the decoder ties at 1.4
        // between [1,2,0] and [2,2,0] and the backtrack rule picks [1,2,0].
        let p = matrix(&[&[0.6, 0.2, 0.2], &[0.1, 0.2, 0.7], &[0.5, 0.3, 0.2]]);
        let decoded = viterbi_decode(&p, &model).unwrap();
        assert_eq!(decoded.states, vec![1, 2, 0]);
        assert!((decoded.objective - 1.4).abs() < 1e-12);
        assert!(is_valid_sequence(&model, &decoded.states).unwrap());
    }

    #[test]
    fn viterbi_recovers_consistent_one_hot() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[
            &[1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        let decoded = viterbi_decode(&p, &model).unwrap();
        assert_eq!(decoded.states, vec![0, 0, 1, 2]);
        assert_eq!(decoded.objective, 4.0);
    }

    #[test]
    fn viterbi_single_sample() {
        let model = CyclicTransitionModel::new(2).unwrap();
        let p = matrix(&[&[0.3, 0.7]]);
        let decoded = viterbi_decode(&p, &model).unwrap();
        assert_eq!(decoded.states, vec![1]);
        assert!((decoded.objective - 0.7).abs() < 1e-15);
    }

    #[test]
    fn viterbi_dimension_mismatch() {
        let model = CyclicTransitionModel::new(4).unwrap();
        let p = matrix(&[&[0.5, 0.5]]);
        assert!(matches!(
            viterbi_decode(&p, &model),
            Err(Error::DimensionMismatch { left: 2, right: 4 })
        ));
        assert!(build_decoding_graph(&p, &model).is_err());
    }

    #[test]
    fn dp_value_matches_bellman_ford_on_negated_graph() {
        let model = CyclicTransitionModel::new(3).unwrap();
        let p = matrix(&[
            &[0.5, 0.3, 0.2],
            &[0.1, 0.7, 0.2],
            &[0.3, 0.3, 0.4],
            &[0.2, 0.2, 0.6],
        ]);
        let graph = build_decoding_graph(&p, &model).unwrap();
        let dp = viterbi_decode(&p, &model).unwrap();
        assert!((bellman_ford_longest(&graph) - dp.objective).abs() < 1e-12);
    }
}
