use thiserror::Error;

/// Failures of the abelian-group substrate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cyclic order 1 is not allowed (the trivial group has no summand)")]
    OrderOne,
    #[error("negative cyclic order {0}")]
    NegativeOrder(i128),
    #[error("cyclic order {0} is too large to factor")]
    OrderTooLarge(u128),
    #[error("invalid symbolic rank `{0}`: bounds must satisfy 1 <= lower <= upper")]
    InvalidSymbolicRank(String),
    #[error("symbolic rank in exact matrix computation")]
    SymbolicInExactMatrix,
    #[error("symbolic rank tensored with finite torsion has no canonical form")]
    SymbolicTensorTorsion,
    #[error("bounded value where an exact group is required: {0}")]
    BoundedInExact(String),
    #[error("lower bound {lower} does not embed into upper bound {upper}")]
    NotEmbeddable { lower: String, upper: String },
    #[error("cannot parse group expression `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("torsion exponent {0} must be at least 1")]
    ZeroTorsionExponent(u64),
}

/// Failures of the K-theory registry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("K_{q}({ring}) is out of the declared range [{q_min}, {q_max}]")]
    OutOfRange {
        ring: String,
        q: i64,
        q_min: i64,
        q_max: i64,
    },
    #[error("{table}_{q}({ring}) is not known")]
    UnknownEntry {
        ring: String,
        table: &'static str,
        q: i64,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Failures of the Bredon engine and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("n must be at least 2, got {0}")]
    InvalidN(i64),
    #[error("n must be odd, got {0}")]
    EvenN(i64),
    #[error("index n must be at least {min}, got {n}")]
    IndexTooSmall { n: i64, min: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("center class required")]
    CenterRequired,
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("cell H_{i} at q = {q}: {source}")]
    Cell {
        i: usize,
        q: i64,
        #[source]
        source: Box<EngineError>,
    },
}

impl EngineError {
    /// Whether the failure comes from a degree the profile does not cover.
    pub fn is_range_error(&self) -> bool {
        match self {
            EngineError::Profile(ProfileError::OutOfRange { .. } | ProfileError::UnknownEntry { .. }) => true,
            EngineError::Cell { source, .. } => source.is_range_error(),
            _ => false,
        }
    }
}
