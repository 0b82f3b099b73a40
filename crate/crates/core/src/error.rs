use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed graph descriptor or edge-list input.
    #[error("invalid graph descriptor: {0}")]
    Descriptor(String),
    /// Arguments violate an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A configured size cap was exceeded.
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    /// The exact witness construction ran out of budget. Carries the
    /// floating-point edge weights of an approximate (uncertified) witness.
    #[error("witness search exhausted after {attempts} candidates; approximate witness is not certified")]
    WitnessSearch {
        attempts: usize,
        approximate: Vec<(usize, usize, f64)>,
    },
}

impl Error {
    /// True for errors caused by configured caps or search budgets rather than bad input.
    pub fn is_capability(&self) -> bool {
        matches!(self, Error::Capability(_) | Error::WitnessSearch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
