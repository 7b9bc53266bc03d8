use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("collection is not a double-covering")]
    NotDoubleCovering,
    #[error("collection is not an even-covering")]
    NotEvenCovering,
    #[error("member sets must be nonempty")]
    EmptyMember,
    #[error("{what} exceeds the configured limit ({value} > {limit})")]
    SizeLimitExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("exponent {0} is odd; the combinatorial moment needs an even exponent")]
    OddExponent(u32),
    #[error("parity violation: l = {l}, p = {p} requires an even product")]
    ParityViolation { l: u32, p: u32 },
    #[error("growing the component would make it isomorphic to another component")]
    Unextendable,
    #[error("no cached mu value for l = {l}, p = {p}")]
    MissingMuCell { l: u32, p: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn limit(what: &'static str, value: u64, limit: u64) -> Self {
        Error::SizeLimitExceeded { what, value, limit }
    }
}
