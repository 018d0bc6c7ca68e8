use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Letters of a word (or steps of a path) do not compose.
    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    /// Inconsistent cell data, maps that do not preserve endpoints, etc.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("cells not covered by any piece: {}", .0.join(", "))]
    Coverage(Vec<String>),

    /// Some path-component misses the base set. Carries one representative
    /// vertex name per offending component.
    #[error("base set misses {} path-component(s): {}", .components.len(), .components.join(", "))]
    Hypothesis { components: Vec<String> },

    #[error("functor does not coequalize: generator `{generator}` ({reason})")]
    NotCoequalizing { generator: String, reason: String },

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn lookup(kind: &'static str, name: impl ToString) -> Self {
        Error::Lookup { kind, name: name.to_string() }
    }
}
