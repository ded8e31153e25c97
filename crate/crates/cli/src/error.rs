use hermsig::signature::SignatureError;
use thiserror::Error;

use crate::document::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid {block}: {message}")]
    Validation { block: String, message: String },
    #[error("no form named `{0}`")]
    UnknownForm(String),
    #[error("no reference block named `{0}`")]
    UnknownReference(String),
    #[error("this command needs --form")]
    MissingForm,
    #[error("no reference tuple: pass --ref or allow the search")]
    MissingReference,
    #[error("this command needs --ext and an extension block")]
    MissingExtension,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

impl CliError {
    pub fn validation(block: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CliError::Validation {
            block: block.into(),
            message: err.to_string(),
        }
    }

    /// 1 for bad input, 2 for a failed consistency check, 3 when no reference tuple is available.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Signature(
                SignatureError::ExhaustedReferences(_) | SignatureError::PoolExhausted(_),
            ) => 3,
            CliError::Signature(
                SignatureError::RouteDisagreement { .. }
                | SignatureError::NotPerfectSquare(_)
                | SignatureError::NonIntegerQuotient { .. },
            ) => 2,
            _ => 1,
        }
    }
}
