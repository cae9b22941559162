use std::fmt;

use thiserror::Error;

/// Reasons an SPG1/PERM1 text file can be rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    MalformedHeader(String),
    MalformedEntry(String),
    IndexOutOfRange { i: usize, j: usize, n: usize },
    DuplicateEntry { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    DiagonalEntry(usize),
    CountMismatch { declared: usize, found: usize },
    InvalidPermutation(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader(s) => write!(f, "malformed header: {s}"),
            ParseErrorKind::MalformedEntry(s) => write!(f, "malformed entry: {s}"),
            ParseErrorKind::IndexOutOfRange { i, j, n } => {
                write!(f, "entry ({i}, {j}) out of range for n = {n}")
            }
            ParseErrorKind::DuplicateEntry { i, j } => write!(f, "duplicate entry ({i}, {j})"),
            ParseErrorKind::Asymmetric { i, j } => {
                write!(f, "entries ({i}, {j}) and ({j}, {i}) disagree")
            }
            ParseErrorKind::DiagonalEntry(i) => write!(f, "diagonal entry ({i}, {i}) in a graph file"),
            ParseErrorKind::CountMismatch { declared, found } => {
                write!(f, "header declares {declared} entries, found {found}")
            }
            ParseErrorKind::InvalidPermutation(s) => write!(f, "invalid permutation: {s}"),
        }
    }
}

/// Coarse classification used to pick a process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Numerical,
    Validation,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 2,
            ErrorClass::Io => 3,
            ErrorClass::Numerical => 4,
            ErrorClass::Validation => 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),
    #[error("invalid Laplacian: {0}")]
    InvalidLaplacian(String),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("rank {k} out of range for {len} values")]
    RankOutOfRange { k: usize, len: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("grid dimensions must both be at least 1")]
    EmptyGridSpec,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("Lanczos work j*n = {work} exceeds budget {budget}")]
    BudgetExceeded { work: usize, budget: usize },
    #[error("Fiedler pair did not converge after {restarts} restarts (residual {residual:e})")]
    NonConvergence { restarts: usize, residual: f64 },
    #[error("inverse iteration did not converge (residual {0:e})")]
    EigenvectorFailure(f64),

    #[error("empty edge cut between nonempty banks")]
    EmptyCut,
    #[error("degenerate partition: bank {0} is empty")]
    DegeneratePartition(&'static str),
    #[error("not a separator: vertices {a} and {b} are coupled across banks")]
    NotASeparator { a: usize, b: usize },
    #[error("separator is empty")]
    EmptySeparator,
    #[error("block {0} is singular")]
    SingularBlock(&'static str),
    #[error("LDL^T factorization of block {block} failed at pivot {pivot}")]
    FactorizationFailure { block: &'static str, pivot: usize },

    #[error("at dissection node {path}: {source}")]
    InDissection { path: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) => ErrorClass::Io,
            Error::NegativeEigenvalue(_)
            | Error::BudgetExceeded { .. }
            | Error::NonConvergence { .. }
            | Error::EigenvectorFailure(_)
            | Error::SingularBlock(_)
            | Error::FactorizationFailure { .. } => ErrorClass::Numerical,
            Error::InvalidParameter(_) | Error::EmptyGridSpec | Error::RankOutOfRange { .. } => {
                ErrorClass::Usage
            }
            Error::InDissection { source, .. } => source.class(),
            _ => ErrorClass::Validation,
        }
    }

    /// Strips any dissection-path wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::InDissection { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
