use std::path::PathBuf;

/// Process exit status: every residual within tolerance.
pub const EXIT_PASS: u8 = 0;
/// Process exit status: at least one residual above tolerance.
pub const EXIT_FAIL: u8 = 1;
/// Process exit status: bad flags, parameters or output path.
pub const EXIT_CONFIG: u8 = 2;

/// Failures that stop a command before a verdict is reached.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Params(#[from] kkforms_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// All of these are configuration errors.
    pub fn exit_code(&self) -> u8 {
        EXIT_CONFIG
    }
}
