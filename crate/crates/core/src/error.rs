use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("sentence `{sentence}`: {path}: {message}")]
    Validation {
        sentence: String,
        path: String,
        message: String,
    },

    #[error(
        "sentence `{sentence}`: element `{element}` has unknown potential subjective element category `{category}`"
    )]
    UnknownCategory {
        sentence: String,
        element: String,
        category: String,
    },

    #[error("sentence `{sentence}`: {path} references missing {kind} `{id}`")]
    DanglingReference {
        sentence: String,
        path: String,
        kind: &'static str,
        id: String,
    },

    #[error("sentence `{sentence}`: multiple main clauses (`{first}` and `{second}` have no subordinating clause)")]
    MultipleMainClauses {
        sentence: String,
        first: String,
        second: String,
    },

    #[error("sentence `{sentence}`: no main clause")]
    NoMainClause { sentence: String },

    #[error("sentence `{sentence}`: clause `{clause}` is subordinated to itself")]
    SubordinationCycle { sentence: String, clause: String },

    #[error("sentence `{sentence}`: {path} mentions `{character}`, who is not in the roster")]
    UnknownCharacter {
        sentence: String,
        path: String,
        character: String,
    },

    #[error("duplicate sentence id `{0}`")]
    DuplicateSentenceId(String),

    #[error("sentence `{0}` has no gold label")]
    MissingGold(String),

    #[error("preamble: {0}")]
    Preamble(String),

    #[error("unknown text situation `{0}`")]
    UnknownSituation(String),

    #[error("character ids must be non-empty")]
    EmptyCharacterId,

    #[error("{}level {level} is outside 1..=4", category.as_ref().map(|c| format!("category `{c}`: ")).unwrap_or_default())]
    InvalidLevel { category: Option<String>, level: i64 },

    #[error("duplicate category `{0}` in registry")]
    DuplicateCategory(String),

    #[error("category names must be non-empty")]
    EmptyCategoryName,
}

impl Error {
    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        let full = err.to_string();
        // serde_json appends its own position; we report it separately.
        let message = match full.rsplit_once(" at line ") {
            Some((head, _)) => head.to_string(),
            None => full,
        };
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message,
        }
    }
}
