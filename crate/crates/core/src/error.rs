use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    /// Builds an error for byte offset `offset` of `src` (1-based line/column).
    pub fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let offset = offset.min(src.len());
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("edit operation references missing node {0}")]
    MissingNode(String),
    #[error("invalid edit script: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("use annotation '{0}' has no wildcard with that name")]
    UnboundUse(String),
    #[error("wildcard name '{0}' is declared more than once")]
    DuplicateName(String),
    #[error("original part must begin and end with a concrete statement")]
    BoundaryWildcard,
    #[error("expression anchor ({lexeme}, {occurrence}) not found in the following statement")]
    MissingAnchor { lexeme: String, occurrence: usize },
}

impl From<SyntaxError> for PatternError {
    fn from(e: SyntaxError) -> Self {
        PatternError::Syntax {
            line: e.line,
            column: e.column,
            message: e.message,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RecommendError {
    #[error("match is inconsistent with the pattern: {0}")]
    InconsistentMatch(String),
    #[error("recommendation does not re-parse: {0}")]
    Invalid(#[from] SyntaxError),
    #[error(transparent)]
    Script(#[from] ScriptError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OrderingError {
    #[error("at least two change examples are required, got {0}")]
    TooFewExamples(usize),
}

/// Pattern creation stopped without a pattern.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CreationError {
    #[error("the two changes share no comparable code region")]
    NoCommonRegion,
    #[error("the generalized original part contains no concrete statement")]
    EmptyPattern,
    #[error("the changes cannot be expressed with annotations: {0}")]
    Unrepresentable(String),
    #[error("generated pattern is invalid: {0}")]
    Invalid(#[from] PatternError),
}
