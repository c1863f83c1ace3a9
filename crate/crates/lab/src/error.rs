use thiserror::Error;

/// Errors of the experiment layer, each with its process exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error("{0}")]
    Core(normdiv_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type LabResult<T> = Result<T, LabError>;

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Identity(_) => 1,
            LabError::Config(_) => 2,
            LabError::Budget(_) => 3,
            LabError::Core(e) => match e {
                normdiv_core::Error::BudgetExceeded { .. } => 3,
                normdiv_core::Error::Usage(_)
                | normdiv_core::Error::InvalidSpec(_)
                | normdiv_core::Error::UnsupportedField(_)
                | normdiv_core::Error::FieldMismatch => 2,
                _ => 4,
            },
            LabError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> LabError {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<normdiv_core::Error> for LabError {
    fn from(e: normdiv_core::Error) -> Self {
        match e {
            normdiv_core::Error::BudgetExceeded { .. } => LabError::Budget(e.to_string()),
            e => LabError::Core(e),
        }
    }
}
