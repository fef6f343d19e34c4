use thiserror::Error;

/// A single named invariant violation, e.g. `spaces.X: triangle inequality
/// fails at (a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Dotted path into the offending structure (`spaces.X`, `net.g2`, ...).
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("epsilon must be strictly positive")]
    NonPositiveEpsilon,

    #[error("generated ideal would contain the whole index set")]
    TrivialIdeal,

    #[error("unknown index {0}")]
    UnknownIndex(String),

    #[error("trace of the ideal on the given subset is trivial")]
    DegenerateTrace,

    #[error("base does not cover the space; uncovered: {0:?}")]
    NotACover(Vec<String>),

    #[error("instance too large: {what} needs {needed}, cap is {cap}")]
    InstanceTooLarge {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("invalid input:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    /// Wrap a non-empty list of diagnostics, panicking on an empty list.
    pub fn invalid(diags: Vec<Diagnostic>) -> Self {
        assert!(!diags.is_empty(), "Error::invalid called with no diagnostics");
        Error::Invalid(diags)
    }

    /// The diagnostics carried by an `Invalid` error, or a singleton list
    /// rendering any other variant.
    pub fn into_diagnostics(self) -> Vec<Diagnostic> {
        match self {
            Error::Invalid(d) => d,
            other => vec![Diagnostic::new("", other.to_string())],
        }
    }
}
