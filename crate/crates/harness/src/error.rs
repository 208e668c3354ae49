use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad arguments or configuration.
    #[error("{0}")]
    Usage(String),

    /// Missing, unreadable or inconsistent input data.
    #[error("{0}")]
    Data(String),

    #[error("{0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("split {split}: {source}")]
    Round {
        split: usize,
        #[source]
        source: Box<HarnessError>,
    },
}

impl HarnessError {
    pub fn usage(msg: impl Into<String>) -> Self {
        HarnessError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        HarnessError::Data(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 usage, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            HarnessError::Data(_) | HarnessError::Io { .. } => 3,
            HarnessError::Numerical(_) => 4,
            HarnessError::Round { source, .. } => source.exit_code(),
        }
    }
}

impl From<chaostex_core::Error> for HarnessError {
    fn from(e: chaostex_core::Error) -> Self {
        use chaostex_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Config(_) | E::Domain(_) | E::NotDerived(_) => HarnessError::Usage(msg),
            E::Contract(_) | E::ImageTooSmall(_) | E::Format(_) => HarnessError::Data(msg),
            E::Numerical(_) | E::Degenerate(_) => HarnessError::Numerical(msg),
        }
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Data(format!("invalid JSON: {e}"))
    }
}
