use thiserror::Error;

use crate::atbd::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("vector ({0}, {1}) is not primitive")]
    NotPrimitive(String, String),
    #[error("triple is not a solution of {0}")]
    NotASolution(String),
    #[error("mutation produced a non-positive entry")]
    NonPositiveMutation,
    #[error("no seed solution found for {0} within component bound {1}")]
    NoSeed(String, u64),
    #[error("equation is malformed: {0}")]
    BadEquation(String),
    #[error("inconsistent node assignment: no integral (p, q, r) matches the given nodes")]
    InconsistentNodeAssignment,
    #[error("diagram is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("vertex {0} is not a Delzant corner")]
    NotDelzant(usize),
    #[error("eigenline through vertex {0} misses the monotone point")]
    EigenlineMissesMonotone(usize),
    #[error("monotone point is absent")]
    NoMonotonePoint,
    #[error("cut collision: {0}")]
    CutCollision(String),
    #[error("node placement rejected: {0}")]
    BadNodePlacement(String),
    #[error("insufficient room: {0}")]
    InsufficientRoom(String),
    #[error("operation requires a ray cut, found a seam (canonicalize first)")]
    SeamPresent,
    #[error("corner wedge {0} is not of the form n*p^2 for the {1} nodes present")]
    NonIntegralNodeType(String, usize),
    #[error("diagram is not of triangular shape: {0}")]
    NotTriangular(String),
    #[error("no admissible cut-integer solution: {0}")]
    NoAdmissibleCutIntegers(String),
    #[error("step assertion failed in script {script} step {step}: {message}")]
    ScriptAssertion {
        script: String,
        step: usize,
        message: String,
    },
    #[error("unknown script id {0}")]
    UnknownScript(String),
    #[error("script {0} is marked unverifiable (figure placeholder)")]
    Unverifiable(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("depth guard: requested depth {0} exceeds 16")]
    DepthGuard(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
