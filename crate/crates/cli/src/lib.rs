//! JSON front end for `qreverse`: input documents, reports and the commands
//! that connect them.
//!
//! Exit statuses are part of the contract: 0 for an affirmative verdict, 2 for
//! a negative one, 1 for unusable input.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{run, Command, Outcome};
pub use document::{InputDocument, LogBase, ToleranceOverrides};
pub use report::ReportDocument;

pub const EXIT_AFFIRMATIVE: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read input: {0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version '{found}' (expected \"{expected}\")", found = .0, expected = document::SCHEMA_VERSION)]
    Version(String),
    #[error("no {kind} named '{name}'")]
    UnknownName { kind: &'static str, name: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid {what}: {source}")]
    Invalid {
        what: String,
        #[source]
        source: qreverse::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl InputError {
    pub fn invalid(what: impl Into<String>, source: qreverse::Error) -> Self {
        InputError::Invalid { what: what.into(), source }
    }
}
