use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, field {field:?}: {message}")]
    Usage {
        line: usize,
        field: String,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] geraghty_core::Error),
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const NOT_CONVERGED: u8 = 2;
    pub const USAGE: u8 = 3;
    pub const VALIDATION: u8 = 4;
    pub const IO: u8 = 5;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use geraghty_core::Error as E;
        match self {
            CliError::Usage { .. } => exit::USAGE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Io { .. } => exit::IO,
            CliError::Core(E::Io(_) | E::Csv(_)) => exit::IO,
            CliError::Core(E::Config(_)) => exit::USAGE,
            CliError::Core(_) => exit::VALIDATION,
        }
    }
}
