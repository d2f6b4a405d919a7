use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error in row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("solver failure: {0}")]
    Solver(#[from] qcinterp::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Parse { .. } | Self::Io(_) => exit::CONFIG,
            Self::Solver(_) => exit::SOLVER,
        }
    }

    /// Library errors raised while checking a config are the user's fault,
    /// not the solver's.
    pub fn invalid(e: qcinterp::Error) -> Self {
        Self::Config(e.to_string())
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const TOLERANCE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const SOLVER: i32 = 3;
}

pub type CliResult<T> = std::result::Result<T, CliError>;
