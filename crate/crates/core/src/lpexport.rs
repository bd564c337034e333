//! LP-format export of the decoding problems, for cross-validation against
//! external MILP solvers, plus closed-form size accounting for every
//! formulation.
//!
//! Two formulations are emitted as solvable files: the linearized full-decode
//! integer program (binary assignment variables with McCormick products for
//! the transition constraint) and the window problem as a flow model over the
//! extended decoding graph. The two window formulations that carry a
//! quadratic contiguity constraint are covered by size accounting only; that
//! constraint is not LP-expressible without its own linearization.
//!
//! No solver is invoked here; files are plain text in standard LP format
//! (Maximize/Minimize, Subject To, Bounds, Binary, End).

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::types::{CyclicTransitionModel, ProbabilityMatrix};
use crate::window::WindowSpec;

// ---------------------------------------------------------------------------
// Size accounting
// ---------------------------------------------------------------------------

/// The five problem formulations sized by [`formulation_sizes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Full decode, quadratic transition constraints.
    P6,
    /// Full decode, products linearized.
    P6Linearized,
    /// Window decode, quadratic contiguity constraint.
    P7,
    /// Window decode, products linearized.
    P7Linearized,
    /// Window decode as a flow model on the extended graph.
    P8,
}

/// Variable/constraint counts of one formulation instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulationSizes {
    pub formulation: Formulation,
    pub variables: usize,
    pub binary_variables: usize,
    pub constraints: usize,
}

/// Closed-form formulation sizes for a T-sample, L-state instance.
///
/// For [`Formulation::P8`] the closed form counts more flow variables than
/// the extended graph emitted by [`export_p8`] actually contains; the
/// difference is exactly 4L and both numbers are recorded in the emitted
/// file header. The constraint count agrees with the emitted graph.
pub fn formulation_sizes(
    t_len: usize,
    states: usize,
    formulation: Formulation,
) -> FormulationSizes {
    assert!(t_len >= 1, "need at least one sample");
    assert!(states >= 2, "need at least two states");
    let (t, l) = (t_len, states);
    let (variables, binary_variables, constraints) = match formulation {
        Formulation::P6 => (t * l, t * l, 2 * t - 1),
        Formulation::P6Linearized => (t * l + 2 * l * (t - 1), t * l, 2 * t - 1 + 6 * l * (t - 1)),
        Formulation::P7 => (t * l + t, t * l + t, 2 * t + 1),
        Formulation::P7Linearized => (
            t * l + t + (t - 1) * (2 + 2 * l) + 1,
            t * l + t,
            2 * t + 1 + 3 * (2 * t - 1) + 6 * l * (t - 1),
        ),
        Formulation::P8 => {
            let vars = 4 * t * l + 2 * (l + t - 1);
            (vars, vars, 2 * (t - 1) + l * t + 3)
        }
    };
    FormulationSizes {
        formulation,
        variables,
        binary_variables,
        constraints,
    }
}

/// Variable count of the extended flow graph actually emitted by
/// [`export_p8`]: the 2TL original arcs plus the two bypass lanes.
pub fn p8_emitted_variables(t_len: usize, states: usize) -> usize {
    let (t, l) = (t_len, states);
    if t < 2 {
        return 2 * l;
    }
    // lane entry/exit (2) + lane chains (2(T-2)) + lane/grid couplings (2L(T-1))
    2 * t * l + 2 + 2 * (t - 2) + 2 * l * (t - 1)
}

// ---------------------------------------------------------------------------
// Emission helpers
// ---------------------------------------------------------------------------

/// Decimal literal with 12 significant digits, trailing zeros trimmed.
fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Write `label: t1 <sep> t2 ... <tail>` wrapping long lines. Terms carry
/// their own leading sign when `sep` is empty.
fn write_expr(out: &mut String, label: &str, terms: &[String], sep: &str, tail: &str) {
    let _ = write!(out, " {label}:");
    let mut width = label.len() + 2;
    for (i, term) in terms.iter().enumerate() {
        let piece = if i == 0 {
            format!(" {term}")
        } else {
            format!("{sep} {term}")
        };
        if width + piece.len() > 240 {
            out.push_str("\n   ");
            width = 3;
        }
        out.push_str(&piece);
        width += piece.len();
    }
    let _ = writeln!(out, " {tail}");
}

// ---------------------------------------------------------------------------
// Full-decode export (linearized)
// ---------------------------------------------------------------------------

/// Emit the linearized full-decode program as LP-format text.
///
/// Maximizes `sum p[t][s] * a_t_s` subject to one-state-per-sample rows and,
/// per consecutive sample pair, a transition sum over the allowed pairs only.
/// Each product `a_(t-1)_s * a_t_sp` is replaced by a continuous variable
/// `z_t_s_sp` with the three standard product constraints `z <= a`,
/// `z <= a'`, `z >= a + a' - 1`. Time indices in variable names are 1-based.
pub fn export_p6_linearized(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
) -> Result<String> {
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }
    let t_len = p.t_len();
    let states = p.states();
    let sizes = formulation_sizes(t_len, states, Formulation::P6Linearized);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ full-sequence decode, transition products linearized"
    );
    let _ = writeln!(out, "\\ T: {t_len}  L: {states}");
    let _ = writeln!(
        out,
        "\\ variables: {}  binary: {}  constraints: {}",
        sizes.variables, sizes.binary_variables, sizes.constraints
    );
    let _ = writeln!(
        out,
        "\\ a_t_s = 1 iff sample t (1-based) is assigned state s; z_t_s_sp = a_(t-1)_s * a_t_sp"
    );

    out.push_str("Maximize\n");
    let obj_terms: Vec<String> = (0..t_len)
        .flat_map(|t| (0..states).map(move |s| (t, s)))
        .map(|(t, s)| format!("{} a_{}_{}", fmt_num(p.get(t, s)), t + 1, s))
        .collect();
    write_expr(&mut out, "obj", &obj_terms, " +", "");

    out.push_str("Subject To\n");
    for t in 0..t_len {
        let terms: Vec<String> = (0..states).map(|s| format!("a_{}_{}", t + 1, s)).collect();
        write_expr(&mut out, &format!("assign_{}", t + 1), &terms, " +", "= 1");
    }
    for t in 1..t_len {
        let mut terms = Vec::new();
        for s in 0..states {
            for succ in model.successors(s) {
                terms.push(format!("z_{}_{}_{}", t + 1, s, succ));
            }
        }
        write_expr(&mut out, &format!("trans_{}", t + 1), &terms, " +", "= 1");
    }
    for t in 1..t_len {
        for s in 0..states {
            for succ in model.successors(s) {
                let z = format!("z_{}_{}_{}", t + 1, s, succ);
                let a_prev = format!("a_{}_{}", t, s);
                let a_cur = format!("a_{}_{}", t + 1, succ);
                let _ = writeln!(out, " lin1_{}_{}_{}: {z} - {a_prev} <= 0", t + 1, s, succ);
                let _ = writeln!(out, " lin2_{}_{}_{}: {z} - {a_cur} <= 0", t + 1, s, succ);
                let _ = writeln!(
                    out,
                    " lin3_{}_{}_{}: {z} - {a_prev} - {a_cur} >= -1",
                    t + 1,
                    s,
                    succ
                );
            }
        }
    }

    out.push_str("Bounds\n");
    for t in 1..t_len {
        for s in 0..states {
            for succ in model.successors(s) {
                let _ = writeln!(out, " 0 <= z_{}_{}_{} <= 1", t + 1, s, succ);
            }
        }
    }

    out.push_str("Binary\n");
    for t in 0..t_len {
        out.push(' ');
        for s in 0..states {
            if s > 0 {
                out.push(' ');
            }
            let _ = write!(out, "a_{}_{}", t + 1, s);
        }
        out.push('\n');
    }
    out.push_str("End\n");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Window export (flow model)
// ---------------------------------------------------------------------------

/// How the window-width cardinality constraint is written in [`export_p8`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CardinalityConvention {
    /// Count only state-to-state grid arcs and require exactly W-1 of them.
    /// This admits every window placement, including windows touching either
    /// end of the signal, so the solved optimum matches the window decoder.
    #[default]
    InnerArcsExact,
    /// Count every original-graph arc (including the origin and destination
    /// couplings) and require exactly W of them. Under this reading interior
    /// windows are infeasible; kept as the literal equality reading of the
    /// width constraint.
    TotalArcsExact,
    /// Same sum, written as `>= W`. Degenerate: assigning more samples never
    /// hurts a non-negative objective, so this relaxation tends to select
    /// the whole signal.
    TotalArcsAtLeast,
}

/// Emit the window problem as a minimum-cost flow with a cardinality side
/// constraint, in LP-format text.
///
/// The graph extends the decoding DAG with a pre-window bypass lane `b_t` and
/// a post-window lane `bp_t`: a unit of flow rides `b` while no state is
/// assigned, crosses the state grid for the window, then rides `bp` to the
/// destination. Every arc entering a grid vertex `v_t_s` carries distance
/// `p[t][s]`, including the lane-to-grid entry arcs (a zero-distance entry
/// would silently drop the first in-window sample from the objective); all
/// other arcs carry 0. The objective minimizes the negated distances, so the
/// solver optimum equals the negated window-decode objective.
pub fn export_p8(
    p: &ProbabilityMatrix,
    model: &CyclicTransitionModel,
    spec: &WindowSpec,
    convention: CardinalityConvention,
) -> Result<String> {
    if p.states() != model.states() {
        return Err(Error::DimensionMismatch {
            left: p.states(),
            right: model.states(),
        });
    }
    let t_len = p.t_len();
    let states = p.states();
    let width = spec.width();
    if width > t_len {
        return Err(Error::WindowTooLong {
            width,
            samples: t_len,
        });
    }

    let graph = ExtendedGraph::build(p, model);
    let sizes = formulation_sizes(t_len, states, Formulation::P8);
    debug_assert_eq!(graph.arcs.len(), p8_emitted_variables(t_len, states));

    let mut out = String::new();
    let _ = writeln!(out, "\\ best fixed-width window decode as a flow problem");
    let _ = writeln!(out, "\\ T: {t_len}  L: {states}  W: {width}");
    let _ = writeln!(
        out,
        "\\ emitted variables: {}  binary: {}  constraints: {}",
        graph.arcs.len(),
        graph.arcs.len(),
        sizes.constraints
    );
    let _ = writeln!(
        out,
        "\\ closed-form size accounting reports {} variables (difference 4L; the",
        sizes.variables
    );
    let _ = writeln!(
        out,
        "\\ constraint count {} agrees with the emitted graph)",
        sizes.constraints
    );
    let _ = writeln!(
        out,
        "\\ distances: arcs entering v_t_s carry p[t][s]; all other arcs carry 0"
    );
    match convention {
        CardinalityConvention::InnerArcsExact => {
            let _ = writeln!(
                out,
                "\\ cardinality: state-to-state arcs used = W-1 = {} (uniform over",
                width - 1
            );
            let _ = writeln!(out, "\\ interior and boundary windows)");
        }
        CardinalityConvention::TotalArcsExact => {
            let _ = writeln!(
                out,
                "\\ cardinality: original-graph arcs used = W = {width} (interior windows infeasible)"
            );
        }
        CardinalityConvention::TotalArcsAtLeast => {
            let _ = writeln!(
                out,
                "\\ cardinality: original-graph arcs used >= W = {width} (relaxed reading)"
            );
        }
    }

    out.push_str("Minimize\n");
    let obj_terms: Vec<String> = graph
        .arcs
        .iter()
        .filter(|arc| arc.enters_grid)
        .map(|arc| format!("- {} {}", fmt_num(arc.dist), arc.name))
        .collect();
    write_expr(&mut out, "obj", &obj_terms, "", "");

    out.push_str("Subject To\n");
    let src_terms: Vec<String> = graph
        .arcs
        .iter()
        .filter(|a| a.from == graph.origin)
        .map(|a| a.name.clone())
        .collect();
    write_expr(&mut out, "src", &src_terms, " +", "= 1");
    let snk_terms: Vec<String> = graph
        .arcs
        .iter()
        .filter(|a| a.to == graph.destination)
        .map(|a| a.name.clone())
        .collect();
    write_expr(&mut out, "snk", &snk_terms, " +", "= 1");

    for v in 0..graph.vertex_names.len() {
        if v == graph.origin || v == graph.destination {
            continue;
        }
        let mut terms: Vec<String> = graph
            .arcs
            .iter()
            .filter(|a| a.to == v)
            .map(|a| a.name.clone())
            .collect();
        let incoming = terms.len();
        terms.extend(
            graph
                .arcs
                .iter()
                .filter(|a| a.from == v)
                .map(|a| format!("- {}", a.name)),
        );
        // Incoming terms join with +, outgoing carry their own minus sign.
        let rendered: Vec<String> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if i > 0 && i < incoming {
                    format!("+ {t}")
                } else {
                    t.clone()
                }
            })
            .collect();
        write_expr(
            &mut out,
            &format!("flow_{}", graph.vertex_names[v]),
            &rendered,
            "",
            "= 0",
        );
    }

    match convention {
        CardinalityConvention::InnerArcsExact => {
            let mut terms: Vec<String> = graph
                .arcs
                .iter()
                .filter(|a| a.inner)
                .map(|a| a.name.clone())
                .collect();
            if terms.is_empty() {
                // T = 1 has no inner arcs; anchor the empty sum.
                terms.push(format!("0 {}", graph.arcs[0].name));
            }
            write_expr(&mut out, "card", &terms, " +", &format!("= {}", width - 1));
        }
        CardinalityConvention::TotalArcsExact | CardinalityConvention::TotalArcsAtLeast => {
            let terms: Vec<String> = graph
                .arcs
                .iter()
                .filter(|a| a.original)
                .map(|a| a.name.clone())
                .collect();
            let op = if convention == CardinalityConvention::TotalArcsExact {
                "="
            } else {
                ">="
            };
            write_expr(&mut out, "card", &terms, " +", &format!("{op} {width}"));
        }
    }

    out.push_str("Binary\n");
    for arc in &graph.arcs {
        let _ = writeln!(out, " {}", arc.name);
    }
    out.push_str("End\n");
    Ok(out)
}

struct FlowArc {
    name: String,
    from: usize,
    to: usize,
    dist: f64,
    /// State-to-state grid arc.
    inner: bool,
    /// Member of the original (unextended) decoding graph.
    original: bool,
    /// Target is a grid vertex, so the arc carries a probability.
    enters_grid: bool,
}

struct ExtendedGraph {
    vertex_names: Vec<String>,
    origin: usize,
    destination: usize,
    arcs: Vec<FlowArc>,
}

impl ExtendedGraph {
    fn build(p: &ProbabilityMatrix, model: &CyclicTransitionModel) -> Self {
        let t_len = p.t_len();
        let states = p.states();

        let mut vertex_names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let add = |names: &mut Vec<String>, index: &mut HashMap<String, usize>, n: String| {
            index.insert(n.clone(), names.len());
            names.push(n);
        };
        add(&mut vertex_names, &mut index, "o".to_string());
        add(&mut vertex_names, &mut index, "d".to_string());
        for t in 1..=t_len {
            for s in 0..states {
                add(&mut vertex_names, &mut index, format!("v{t}_{s}"));
            }
        }
        for t in 1..t_len {
            add(&mut vertex_names, &mut index, format!("b{t}"));
        }
        for t in 2..=t_len {
            add(&mut vertex_names, &mut index, format!("bp{t}"));
        }

        let origin = index["o"];
        let destination = index["d"];
        let v = |t: usize, s: usize| index[&format!("v{t}_{s}")];

        let mut graph = Self {
            vertex_names: vertex_names.clone(),
            origin,
            destination,
            arcs: Vec::new(),
        };
        let push = |graph: &mut Self,
                    from: usize,
                    to: usize,
                    dist: f64,
                    inner: bool,
                    original: bool,
                    enters_grid: bool| {
            let name = format!("y__{}__{}", vertex_names[from], vertex_names[to]);
            graph.arcs.push(FlowArc {
                name,
                from,
                to,
                dist,
                inner,
                original,
                enters_grid,
            });
        };

        // Original decoding graph.
        for s in 0..states {
            push(&mut graph, origin, v(1, s), p.get(0, s), false, true, true);
        }
        for t in 1..t_len {
            for s in 0..states {
                for succ in model.successors(s) {
                    push(
                        &mut graph,
                        v(t, s),
                        v(t + 1, succ),
                        p.get(t, succ),
                        true,
                        true,
                        true,
                    );
                }
            }
        }
        for s in 0..states {
            push(
                &mut graph,
                v(t_len, s),
                destination,
                0.0,
                false,
                true,
                false,
            );
        }

        // Bypass lanes (absent when T = 1).
        if t_len >= 2 {
            push(&mut graph, origin, index["b1"], 0.0, false, false, false);
            for t in 1..t_len - 1 {
                push(
                    &mut graph,
                    index[&format!("b{t}")],
                    index[&format!("b{}", t + 1)],
                    0.0,
                    false,
                    false,
                    false,
                );
            }
            for t in 1..t_len {
                for s in 0..states {
                    push(
                        &mut graph,
                        index[&format!("b{t}")],
                        v(t + 1, s),
                        p.get(t, s),
                        false,
                        false,
                        true,
                    );
                }
            }
            for t in 1..t_len {
                for s in 0..states {
                    push(
                        &mut graph,
                        v(t, s),
                        index[&format!("bp{}", t + 1)],
                        0.0,
                        false,
                        false,
                        false,
                    );
                }
            }
            for t in 2..t_len {
                push(
                    &mut graph,
                    index[&format!("bp{t}")],
                    index[&format!("bp{}", t + 1)],
                    0.0,
                    false,
                    false,
                    false,
                );
            }
            push(
                &mut graph,
                index[&format!("bp{t_len}")],
                destination,
                0.0,
                false,
                false,
                false,
            );
        }

        graph
    }
}
