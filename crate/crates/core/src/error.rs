use std::path::PathBuf;

use crate::model::Task;

/// Errors raised by the SEL serializer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelError {
    #[error("node label is empty")]
    EmptyLabel,
    #[error("{field} {text:?} contains a parenthesis")]
    Parenthesis { field: &'static str, text: String },
    #[error("{field} {text:?} has leading, trailing or repeated whitespace")]
    Whitespace { field: &'static str, text: String },
    #[error("node value is present but empty")]
    EmptyValue,
    #[error("label {0:?} contains the value separator")]
    SeparatorInLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("prompt has no hint tokens")]
    NoHints,
    #[error("unknown marker token {0:?}")]
    UnknownToken(String),
    #[error("schema label {0:?} is empty or contains a reserved token")]
    BadLabel(String),
}

#[derive(Debug, thiserror::Error)]
pub enum ComposeError {
    #[error("partner instance {0:?} has an empty target and cannot be composed")]
    EmptyPartner(String),
    #[error("base {base:?} is a {base_task} instance but partner {partner:?} is {partner_task}")]
    TaskMismatch {
        base: String,
        partner: String,
        base_task: Task,
        partner_task: Task,
    },
    #[error("no instance with a non-empty target is available as a partner")]
    EmptyPool,
    #[error("partner count must be at least 1")]
    ZeroPartners,
}

/// Errors from reading and writing dataset files.
#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {source}")]
    Malformed {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}:{line}: instance {id:?}: {detail}")]
    InvalidSpan {
        path: PathBuf,
        line: usize,
        id: String,
        detail: String,
    },
    #[error("{path}:{line}: {detail}")]
    BadTag {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("sampling ratio {0} is outside (0, 1]")]
    InvalidRatio(f64),
}

impl DatasetError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DatasetError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScoreError {
    #[error("predictions reference unknown instance ids: {}", .0.join(", "))]
    UnknownIds(Vec<String>),
    #[error("prediction id {0:?} appears more than once")]
    DuplicateId(String),
}

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("schema is for task {schema} but compilation was requested for {requested}")]
    SchemaTaskMismatch { schema: Task, requested: Task },
    #[error("schema is invalid: {}", .0.join("; "))]
    InvalidSchema(Vec<String>),
    #[error("{count} validation problem(s), first: {first}")]
    InvalidInstances { count: usize, first: String },
    #[error("no stages requested")]
    NoStages,
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Sel(#[from] SelError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
}
