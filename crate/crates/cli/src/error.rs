use std::path::{Path, PathBuf};

use neurofuzzy::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("data: {0}")]
    Data(CoreError),
    #[error("{0}")]
    Runtime(CoreError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_DATA: i32 = 3;
    pub const EXIT_RUNTIME: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => Self::EXIT_CONFIG,
            CliError::Data(_) | CliError::Input(_) => Self::EXIT_DATA,
            CliError::Runtime(_) | CliError::Output { .. } => Self::EXIT_RUNTIME,
        }
    }

    pub(crate) fn output(path: &Path, source: std::io::Error) -> Self {
        CliError::Output {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidConfig(m) => CliError::Config(m),
            e @ CoreError::RuleCap { .. } => CliError::Config(e.to_string()),
            e @ (CoreError::Io { .. }
            | CoreError::FieldCount { .. }
            | CoreError::Parse { .. }
            | CoreError::SelectorValue { .. }
            | CoreError::ConstantColumn { .. }
            | CoreError::EmptyDataset) => CliError::Data(e),
            e => CliError::Runtime(e),
        }
    }
}
