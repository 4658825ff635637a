use thiserror::Error;

/// Errors raised while reading ballots or configuring a count.
///
/// Invalid ballots are not errors: they are reported through
/// [`ValidationReport`](crate::ballot::ValidationReport) and excluded from
/// the count.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: no header row")]
    EmptyInput,
    #[error("no ballots")]
    NoBallots,
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column}: cannot parse {field:?} as a number")]
    BadField {
        row: usize,
        column: usize,
        field: String,
    },
    #[error("invalid header: {0}")]
    Header(String),
    #[error("invalid ballot matrix: {0}")]
    Matrix(String),
    #[error("unknown candidate(s): {}", .0.join(", "))]
    UnknownCandidates(Vec<String>),
    #[error("no candidates remain")]
    NoCandidatesRemain,
    #[error("non-positive rank {0} cannot be corrected")]
    NonPositiveRank(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("all ballots are invalid")]
    NoValidBallots,
    #[error("{0}")]
    Unsupported(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
