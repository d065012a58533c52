//! Error type shared by all toolkit modules.

use thiserror::Error;

/// Errors surfaced by game construction, LP solving, refinement checks and
/// document parsing. Everything that maps to CLI exit code 2 lives here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("game must have {expected} players, got {got}")]
    WrongPlayerCount { expected: usize, got: usize },

    #[error("profile is not a Nash equilibrium: player {player} gains {gain} by deviating to action {action}")]
    NotAnEquilibrium { player: usize, action: usize, gain: String },

    #[error("profile is not fully mixed: player {player}, action {action} has probability 0")]
    NotFullyMixed { player: usize, action: usize },

    #[error("invalid rational literal {literal:?}: {reason}")]
    InvalidRational { literal: String, reason: String },

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("action label {0:?} already present; cannot append the bot strategy")]
    BotLabelTaken(String),

    #[error("reduced-game document is missing bot-index metadata")]
    MissingBotMetadata,

    #[error("linear program is malformed: {0}")]
    LpDimension(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
