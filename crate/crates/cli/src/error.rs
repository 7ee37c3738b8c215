use std::fmt;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    CheckFailed = 1,
    InvalidConfig = 2,
    SolverFailed = 3,
    PartialContinuation = 4,
    BadSnapshot = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self { exit, message: message.into() }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Exit::InvalidConfig, message)
    }

    pub fn solver(message: impl Into<String>) -> Self {
        Self::new(Exit::SolverFailed, message)
    }

    pub fn snapshot(message: impl Into<String>) -> Self {
        Self::new(Exit::BadSnapshot, message)
    }

    /// Failure to write an artifact; reported as an invalid output location.
    pub fn io(path: &std::path::Path, err: impl fmt::Display) -> Self {
        Self::config(format!("cannot write {}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;
