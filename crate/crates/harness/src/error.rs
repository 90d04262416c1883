use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error("config key \"{key}\": {msg}")]
    Config { key: String, msg: String },

    #[error(transparent)]
    Numerical(#[from] rexi_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn config(key: &str, msg: impl Into<String>) -> Self {
        Self::Config {
            key: key.to_string(),
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 usage or config, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::ConfigSyntax { .. } | Self::Config { .. } => 2,
            Self::Numerical(rexi_core::Error::Serialization(_)) => 2,
            Self::Numerical(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}
