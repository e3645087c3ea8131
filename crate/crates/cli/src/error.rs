use std::fmt;

use wavinpaint::InpaintError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DEGENERATE_MASK: u8 = 3;
pub const EXIT_NO_CANDIDATE: u8 = 4;

/// A failure carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

pub fn exit_code(e: &InpaintError) -> u8 {
    match e {
        InpaintError::EmptyMask | InpaintError::FullMask => EXIT_DEGENERATE_MASK,
        InpaintError::NoCandidate { .. } => EXIT_NO_CANDIDATE,
        _ => EXIT_INVALID,
    }
}

impl From<InpaintError> for CliError {
    fn from(e: InpaintError) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;
