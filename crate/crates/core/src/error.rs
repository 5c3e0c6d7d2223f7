use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("empty input: a header row is required")]
    EmptyInput,

    #[error("ragged row at line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },

    #[error("column `{column}` is numeric but line {line} holds `{value}`")]
    NotNumeric { column: String, line: usize, value: String },

    #[error("missing value in column `{column}` at line {line}")]
    MissingValue { column: String, line: usize },

    #[error("invalid schema hint at line {line}: {message}")]
    SchemaHint { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("constraint syntax error at column {position}: {message}")]
    DcSyntax { position: usize, message: String },

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("order operator `{op}` used on categorical attribute `{attribute}`")]
    OrderOnCategorical { op: String, attribute: String },

    #[error("no clean training tuples: every tuple is involved in a conflict")]
    NoCleanTuples,

    #[error("training pool for tuple {owner} has {size} tuple(s); at least 2 are required")]
    PoolTooSmall { owner: usize, size: usize },

    #[error("LP iteration limit of {0} exceeded")]
    IterationLimit(usize),

    #[error("branch-and-bound node limit of {0} exceeded")]
    NodeLimit(usize),

    #[error("LP is infeasible")]
    Infeasible,

    #[error("LP is unbounded")]
    Unbounded,

    #[error("LP engine failure: {0}")]
    Solver(String),

    #[error("conflict set has {size} tuples; the brute-force oracle is limited to {limit}")]
    OracleLimit { size: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("tuple id {id} is outside the instance (n = {n})")]
    IdOutOfRange { id: usize, n: usize },

    #[error("malformed report: {0}")]
    Report(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
