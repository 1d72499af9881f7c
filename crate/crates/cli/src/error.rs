use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dmcsched::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn parse(path: impl AsRef<std::path::Path>, msg: impl ToString) -> Self {
        CliError::Parse { path: path.as_ref().display().to_string(), msg: msg.to_string() }
    }

    /// Process exit status: 2 for bad input, 3 for an infeasible instance.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(dmcsched::Error::Infeasible | dmcsched::Error::Uncoverable { .. }) => 3,
            CliError::Core(dmcsched::Error::Internal(_)) => 1,
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }

    /// Short machine-readable tag printed with the message.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                dmcsched::Error::Validation(_) | dmcsched::Error::Shape { .. } => "validation",
                dmcsched::Error::Parameter(_) | dmcsched::Error::Size { .. } => "parameter",
                dmcsched::Error::MalformedTour(_) | dmcsched::Error::MalformedSchedule(_) => "malformed",
                dmcsched::Error::Uncoverable { .. } | dmcsched::Error::Infeasible => "infeasible",
                dmcsched::Error::Internal(_) => "internal",
            },
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
