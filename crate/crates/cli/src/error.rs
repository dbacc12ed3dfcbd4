use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tilesed::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("check failed: {0}")]
    Assertion(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 0 success, 1 failed check, 2 bad input, 3 budget exhausted.
    pub fn exit_code(&self) -> i32 {
        use tilesed::Error as E;
        match self {
            CliError::Assertion(_) => 1,
            CliError::Core(E::Analysis { .. } | E::Protocol(_)) => 1,
            CliError::Core(E::Resource(_)) => 3,
            CliError::Core(_) | CliError::Config(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv: {e}"))
    }
}
