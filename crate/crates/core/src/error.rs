use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input {value} lies outside [0, 1)")]
    OutOfUnitInterval { value: String },

    #[error("partial quotient {index} is {value}; every entry must be >= 1")]
    InvalidQuotient { index: usize, value: String },

    #[error("address is certified to depth {certified} but depth {required} is required")]
    InsufficientDepth { required: usize, certified: usize },

    #[error("address must be nonempty")]
    EmptyAddress,

    #[error("{what} is not defined at {at}")]
    Domain { what: String, at: String },

    #[error("invalid approximating function: {0}")]
    InvalidPair(String),

    #[error("cannot parse {kind} from {input:?}: {reason}")]
    Parse {
        kind: &'static str,
        input: String,
        reason: String,
    },

    #[error("{what} exceeds the configured cap {cap}")]
    CapExceeded { what: String, cap: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("division by a zero partial sum at block {block}")]
    ZeroPartialSum { block: u32 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn parse(kind: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            kind,
            input: input.to_owned(),
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(what: impl Into<String>, at: impl std::fmt::Display) -> Self {
        Error::Domain {
            what: what.into(),
            at: at.to_string(),
        }
    }
}
