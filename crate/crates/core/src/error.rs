use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: u32, found: String },

    #[error("corpus quality: {malformed} of {total} lines malformed")]
    CorpusQuality { malformed: usize, total: usize },

    #[error("unknown discipline `{0}`")]
    UnknownDiscipline(String),

    #[error("paper `{paper}` is not assigned to discipline `{discipline}`")]
    NotInDiscipline { paper: String, discipline: String },

    #[error("infeasible label resampling: {0}")]
    InfeasibleResampling(String),

    #[error("oracle size limit exceeded: {size} simplices (limit {limit})")]
    OracleLimit { size: usize, limit: usize },

    #[error("missing diagram for discipline `{0}`")]
    MissingDiagram(String),

    #[error("empty text collection: {0}")]
    EmptyCollection(&'static str),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("config: {0}")]
    Config(String),

    #[error("stage `{stage}` requires output of stage `{dependency}`: {detail}")]
    MissingDependency {
        stage: String,
        dependency: String,
        detail: String,
    },

    #[error("malformed artifact {path}: {detail}")]
    Artifact { path: PathBuf, detail: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownGenerator(_) | Error::MissingDependency { .. } => 2,
            Error::Invariant(_) => 4,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
