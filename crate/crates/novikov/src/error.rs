//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by validation, construction, engines, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("malformed face reference: {dim}-cell {cell}, face slot {slot} points at {face}, but only {available} cells exist one dimension down")]
    MalformedFace {
        dim: usize,
        cell: usize,
        slot: usize,
        face: usize,
        available: usize,
    },

    #[error("{dim}-cell {cell} lists {got} faces; a {dim}-cell has exactly {need}")]
    FaceArity {
        dim: usize,
        cell: usize,
        got: usize,
        need: usize,
    },

    #[error("simplicial identity d_i d_j = d_(j-1) d_i fails on {dim}-cell {cell} at (i, j) = ({i}, {j})")]
    SimplicialIdentity {
        dim: usize,
        cell: usize,
        i: usize,
        j: usize,
    },

    #[error("integral boundary does not square to zero at {dim}-cell {cell}")]
    BoundarySquare { dim: usize, cell: usize },

    #[error("cocycle condition violated on 2-cell {cell}: w(e01) = {e01} and w(e12) = {e12} do not sum to w(e02) = {e02}")]
    CocycleViolation {
        cell: usize,
        e01: String,
        e12: String,
        e02: String,
    },

    #[error("cocycle has {values} edge values but the complex has {edges} edges")]
    CocycleLength { values: usize, edges: usize },

    #[error("equivariant boundary does not square to zero going into degree {degree}; the cocycle or the face orientations are inconsistent")]
    EquivariantBoundary { degree: usize },

    #[error("expected an integer cocycle, got a rational one")]
    IntegerCocycleRequired,

    #[error("expected a rank-1 cocycle, got rank {rank}")]
    RankOneRequired { rank: usize },

    #[error("sheet count {m} is too small for this operation")]
    InvalidSheetCount { m: u64 },

    #[error("denominator bound must be at least 1, got {bound}")]
    InvalidBound { bound: i64 },

    #[error("specialization point is not a unit: {reason}")]
    NotAUnit { reason: String },

    #[error("prime {prime} divides a coefficient denominator; retry with another prime")]
    UnluckyPrime { prime: u64 },

    #[error("specialization requires at least one trial")]
    InvalidTrials,

    #[error("sampling requires at least one sample")]
    InvalidSamples,

    #[error(
        "engine disagreement: exact rank {exact} vs specialized rank {specialized} \
         (greater than exact would be an arithmetic bug; smaller means every random \
         point was unlucky — rerun with a different seed)"
    )]
    EngineDisagreement { exact: usize, specialized: usize },

    #[error("semicontinuity violated in degree {degree}: dimension {dim} at the probed point is below the generic value {generic}")]
    Semicontinuity {
        degree: usize,
        dim: usize,
        generic: usize,
    },

    #[error("critical vector has dimension {critical} but the report has top degree {top}")]
    DimensionMismatch { critical: usize, top: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Process exit code the CLI maps this error to.
    ///
    /// Mathematical failures exit 1; everything the user can fix about the
    /// invocation or the input files — usage, parse, validation, and i/o
    /// problems — exits 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EngineDisagreement { .. }
            | Error::Semicontinuity { .. }
            | Error::UnluckyPrime { .. }
            | Error::EquivariantBoundary { .. }
            | Error::NotAUnit { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
