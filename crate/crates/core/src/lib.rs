//! Berge-type hypergraph Ramsey numbers: structure detection, exhaustive
//! search with symmetry pruning, explicit constructions and certificates.

pub mod cache;
pub mod cli;
pub mod constructions;
pub mod detect;
pub mod error;
pub mod hypergraph;
pub mod lll;
pub mod matching;
pub mod pattern;
pub mod report;
pub mod search;
pub mod symmetry;

pub use detect::{detect, detect_any, verify_witness, Witness, WitnessViolation};
pub use error::{Error, Result};
pub use hypergraph::{Coloring, Edge, EdgeId, PartialColoring, Permutation};
pub use pattern::{Kind, Pattern, PatternSpec};
pub use search::{
    decide, find_counterexample, ramsey_number, Certificate, Decision, Pruning, SearchOptions,
    Status,
};
