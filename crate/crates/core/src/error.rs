use thiserror::Error;

use crate::structure::{AxiomViolation, Level};

#[derive(Debug, Error)]
pub enum Error {
    #[error("table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("entry {value} at position {index} is out of range for order {order}")]
    EntryRange {
        index: usize,
        value: usize,
        order: usize,
    },
    #[error("arity must be at least 2, got {0}")]
    BadArity(usize),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("expected {expected} arguments, got {got}")]
    ArgCount { expected: usize, got: usize },
    #[error("image sequence is not a bijection: {0} and {1} collide")]
    NotABijection(usize, usize),
    #[error("carrier sizes do not match: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("arities do not match: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("level {level:?} is only defined for arity {arity}")]
    UnsupportedLevel { level: Level, arity: usize },
    #[error("axiom check failed: {0}")]
    Axiom(AxiomViolation),
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u64),
    #[error("map is not a group endomorphism (witness pair ({0}, {1}))")]
    NotGroupEndomorphism(usize, usize),
    #[error("group table is invalid: {0}")]
    BadGroup(String),
    #[error("beta is not a shelf morphism of the input structure")]
    NotAShelfMorphism,
    #[error("search guardrail exceeded: {0}; pass force=true to run anyway")]
    Guardrail(String),
    #[error("cochain dimensions overflow the platform word: {0}")]
    DimensionOverflow(String),
    #[error("malformed permutation-column text: {0}")]
    PermColumns(String),
    #[error("malformed structure file: {0}")]
    Format(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
