use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] ophash::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: empty corpus", path.display())]
    EmptyCorpus { path: PathBuf },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_IO: i32 = 3;

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => EXIT_USAGE,
            BenchError::Core(ophash::Error::Format(_) | ophash::Error::Io(_)) => EXIT_IO,
            BenchError::Core(_) => EXIT_USAGE,
            BenchError::Io { .. }
            | BenchError::Parse { .. }
            | BenchError::EmptyCorpus { .. }
            | BenchError::Csv(_) => EXIT_IO,
            BenchError::Verification(_) => EXIT_VERIFY,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| BenchError::Io { path, source }
    }
}

pub fn usage(msg: impl Into<String>) -> BenchError {
    BenchError::Usage(msg.into())
}
