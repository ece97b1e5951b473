use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A config key or value is wrong; `field` names it.
    #[error("{field}: {message}")]
    Config { field: String, message: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: chaosctl_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn core(context: impl Into<String>, source: chaosctl_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for bad configuration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a field name or context to core errors.
pub trait Context<T> {
    fn context(self, what: &str) -> CliResult<T>;
    fn field(self, field: &str) -> CliResult<T>;
}

impl<T> Context<T> for chaosctl_core::Result<T> {
    fn context(self, what: &str) -> CliResult<T> {
        self.map_err(|e| CliError::core(what, e))
    }

    fn field(self, field: &str) -> CliResult<T> {
        self.map_err(|e| CliError::config(field, e.to_string()))
    }
}
