//! Equivalence tests for graphs that are blind to vertex identity:
//! homomorphism-count comparisons over pattern families (trees, paths,
//! cycles, bounded-treewidth graphs), color refinement and its k-dimensional
//! generalization, spectral invariants, and exact rational feasibility of
//! the associated linear relaxations of isomorphism.
//!
//! Everything verdict-shaped is computed exactly: counts are big integers,
//! linear systems are solved over the rationals, and every feasibility
//! witness is re-checked against the system it came from. Floating point
//! appears only in the explicitly approximate spectral helpers.

pub mod decomp;
pub mod graph;
pub mod homcount;
pub mod kwl;
pub mod linsys;
pub mod refine;
pub mod report;
pub mod solve;
pub mod spectral;
pub mod suite;
pub mod trees;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input; `offset` is the byte position.
    Parse { offset: usize, what: String },
    /// Structurally invalid argument (bad index, loop, non-tree pattern, ...).
    Input(String),
    /// The requested computation exceeds its configured budget.
    Capacity { what: String, needed: u128, budget: u128 },
    /// A tree or path decomposition failed validation.
    Decomposition(String),
    /// A precondition on the inputs does not hold.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { offset, what } => write!(f, "parse error at byte {offset}: {what}"),
            Error::Input(what) => write!(f, "invalid input: {what}"),
            Error::Capacity { what, needed, budget } => {
                write!(f, "capacity exceeded: {what} needs {needed}, budget is {budget}")
            }
            Error::Decomposition(what) => write!(f, "invalid decomposition: {what}"),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
