use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A piece or coordinate outside the cake, or a value outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Mismatched sizes or otherwise invalid arguments.
    #[error("argument error: {0}")]
    Argument(String),
    /// Input for which the statistic is undefined (e.g. zero total wealth).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A cut fraction outside `[0, 1]` or an unknown player in a strategy.
    #[error("strategy error: {0}")]
    Strategy(String),
    /// Game configuration inconsistent with the supplied profile.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// An event log that does not describe a complete, valid play-out.
    #[error("trace error: {0}")]
    Trace(String),
    /// A precondition of an analysis routine does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}
