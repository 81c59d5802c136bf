use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: malformed rational `{token}`")]
    MalformedRational { line: usize, token: String },
    #[error("line {line}: expected {expected} coefficients, found {found}")]
    ColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: zero linear form")]
    ZeroForm { line: usize },
    #[error("line {line}: duplicate form (same hyperplane as form {first})")]
    DuplicateForm { line: usize, first: usize },
    #[error("missing `k n` header")]
    MissingHeader,
    #[error("expected {expected} forms, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("linear form is zero")]
    ZeroLinearForm,
    #[error("form has {found} coefficients, arrangement dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arrangement is not essential (rank {rank} < dimension {dim})")]
    NotEssential { rank: usize, dim: usize },
    #[error("hyperplane index {index} out of range (arrangement has {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("set {0:?} is not a minimal dependent set")]
    NotMinimalDependent(Vec<usize>),
    #[error("candidate degrees sum to {found}, arrangement has {expected} hyperplanes")]
    DegreeSumMismatch { expected: usize, found: usize },
    #[error("candidate has {found} derivations, expected {expected}")]
    CandidateCount { expected: usize, found: usize },
    #[error("coordinate frame violated: form {index} is not the coordinate form x{var}", var = .index + 1)]
    CoordinateFrame { index: usize },
    #[error("derivation has degree {found}, expected {expected}")]
    WrongDegree { expected: usize, found: usize },
    #[error("coefficient {index} of the derivation is not divisible by x{var}", var = .index + 1)]
    NotDiagonalShape { index: usize },
    #[error("invalid pair ({u}, {v}) for dimension {dim}")]
    InvalidPair { u: usize, v: usize, dim: usize },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("cannot parse polynomial factor list: {0}")]
    FactorSyntax(String),
    #[error("rank must be at least 3, got {0}")]
    RankTooSmall(usize),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
