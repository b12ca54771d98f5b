use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by exit-code class; see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // -- parse / validation (exit code 2)
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown reference `{name}` at {line}:{column}")]
    UnknownReference { name: String, line: usize, column: usize },
    #[error("type mismatch for `{name}`: {message}")]
    TypeMismatch { name: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),

    // -- mathematical precondition violations (exit code 3)
    #[error("elements or subgroups belong to different ambient groups")]
    AmbientMismatch,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroups are not commensurate")]
    NotCommensurate,
    #[error("operation not supported by the {0} backend")]
    BackendUnsupported(&'static str),
    #[error("matrices do not form a projective representation: {0}")]
    NotProjective(String),
    #[error("obstruction cocycle mismatch: {0}")]
    ObstructionMismatch(String),
    #[error("incompatible domain: {0}")]
    IncompatibleDomain(String),
    #[error("could not split representation exactly: {0}")]
    SplitFailed(String),
    #[error("two blocks lie in the same double coset (representatives {0} and {1})")]
    DuplicateDoubleCoset(String, String),
    #[error("element {0} is not in the carrier of the correspondence")]
    XNotInCarrier(String),
    #[error("endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("set is not closed under divisors: {0}")]
    NotDivisorClosed(String),
    #[error("set cannot be realized as subgroup orders of a product of cyclic groups: {0}")]
    NotRealizable(String),
    #[error("parameter q must avoid 0, 1 and -1 (got {0})")]
    DegenerateQ(String),

    // -- resource bounds (exit code 4)
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("search bound exceeded: {0}")]
    SearchBoundExceeded(String),

    // -- environment
    #[error("cache entry corrupt: {0}")]
    CacheCorrupt(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnknownReference { .. }
            | Error::TypeMismatch { .. }
            | Error::Invalid(_) => 2,
            Error::BoundExceeded(_) | Error::SearchBoundExceeded(_) => 4,
            Error::CacheCorrupt(_) | Error::Io(_) => 1,
            _ => 3,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::UnknownReference { .. } => "UnknownReference",
            Error::TypeMismatch { .. } => "TypeMismatch",
            Error::Invalid(_) => "InvalidInput",
            Error::AmbientMismatch => "AmbientMismatch",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::NotCommensurate => "NotCommensurate",
            Error::BackendUnsupported(_) => "BackendUnsupported",
            Error::NotProjective(_) => "NotProjective",
            Error::ObstructionMismatch(_) => "ObstructionMismatch",
            Error::IncompatibleDomain(_) => "IncompatibleDomain",
            Error::SplitFailed(_) => "SplitFailed",
            Error::DuplicateDoubleCoset(..) => "DuplicateDoubleCoset",
            Error::XNotInCarrier(_) => "XNotInCarrier",
            Error::EndpointMismatch(_) => "EndpointMismatch",
            Error::NotDivisorClosed(_) => "NotDivisorClosed",
            Error::NotRealizable(_) => "NotRealizable",
            Error::DegenerateQ(_) => "DegenerateQ",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::SearchBoundExceeded(_) => "SearchBoundExceeded",
            Error::CacheCorrupt(_) => "CacheCorrupt",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
