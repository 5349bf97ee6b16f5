use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// A failed law, named by the rule that broke and the instance that breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    pub instance: String,
}

impl Violation {
    pub fn new(rule: impl Into<String>, instance: impl Into<String>) -> Self {
        Violation {
            rule: rule.into(),
            instance: instance.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.rule, self.instance)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Violation(Violation),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Violation(v)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
