use thiserror::Error;

/// Errors surfaced by the library. Validation findings that are data (axiom
/// violation lists, certificate reports) are returned as values, not errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown group name: {0}")]
    UnknownGroup(String),
    #[error("group order {order} exceeds the bound {bound}")]
    OrderBound { order: usize, bound: usize },
    #[error("containment violation: {0}")]
    Containment(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("elements belong to different lattices")]
    LatticeMismatch,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("certification failure: {0}")]
    Certification(String),
    #[error("obstruction: {0}")]
    Obstruction(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
