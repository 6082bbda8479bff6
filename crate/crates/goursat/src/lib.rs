//! File formats, reports and the command-line front end.

pub mod app;
pub mod problem;
pub mod report;

pub use app::{run, Command, Options, Outcome};
pub use problem::ProblemFile;
pub use report::Report;

/// Anything wrong with the user's input; exit status 1.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot parse `{text}`: {msg}")]
    Expr { text: String, msg: String },
    #[error(transparent)]
    Core(goursat_core::Error),
}
