//! Decoding of physiological state sequences from per-sample probability
//! matrices under cyclic transition constraints, and selection of the
//! fixed-width window where the decoded likelihood is maximal.
//!
//! The pieces:
//!
//! - [`types`]: validated probability matrices, the cyclic transition model
//!   and result types.
//! - [`decode`]: the per-sample argmax baseline, the exact DP decoder and the
//!   explicit decoding DAG.
//! - [`window`]: optimal fixed-width window selection, sequential or
//!   parallel over candidate starts.
//! - [`oracle`]: exhaustive reference solvers for small instances.
//! - [`lpexport`]: LP-format export of the integer-programming formulations
//!   and their closed-form size accounting.
//! - [`lstm`]: bidirectional recurrent forward inference producing
//!   probability matrices from feature sequences.
//! - [`metrics`]: sample accuracy and event-level sensitivity/specificity
//!   under center-distance matching.
//! - [`synth`]: seeded synthetic corpus generation.

pub mod decode;
pub mod error;
pub mod lpexport;
pub mod lstm;
pub mod metrics;
pub mod oracle;
pub mod synth;
pub mod types;
pub mod window;

pub use error::{Error, Result};
pub use types::{
    is_valid_sequence, validate_probability_matrix, CyclicTransitionModel, DecodedSequence,
    ProbabilityMatrix, WindowDecodeResult,
};
