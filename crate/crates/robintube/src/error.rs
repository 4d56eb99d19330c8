use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

impl ConfigError {
    pub fn field(path: &str, message: impl Into<String>) -> Self {
        ConfigError::Field { path: path.to_string(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure in {stage}: {source}")]
    Numerical {
        stage: &'static str,
        #[source]
        source: robintube_core::Error,
    },
    #[error("branch guard: {0}")]
    Branch(String),
    #[error("output error: {0}")]
    Output(String),
}

impl RunError {
    /// Process exit status: 3 for configuration problems, 4 for numerical ones.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 3,
            RunError::Numerical { .. } | RunError::Branch(_) | RunError::Output(_) => 4,
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Output(e.to_string())
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Output(e.to_string())
    }
}

pub(crate) trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, RunError>;
}

impl<T> Stage<T> for robintube_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, RunError> {
        self.map_err(|source| RunError::Numerical { stage, source })
    }
}
