use emosc::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },
    #[error("{0}")]
    Usage(String),
    #[error("unsolvable configuration: {0}")]
    Unsolvable(String),
    #[error(transparent)]
    Core(#[from] emosc::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Unsolvable(_) | CliError::Core(emosc::Error::DegenerateAxis { .. }) => 3,
            CliError::Core(_) | CliError::Write { .. } => 1,
        }
    }
}
