use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size {0} unsupported (need 2 <= k <= 256)")]
    Alphabet(usize),
    #[error("automaton index {index} out of range for network of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("configuration has length {got}, network has size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} out of range for alphabet of size {k}")]
    SymbolOutOfRange { symbol: usize, k: usize },
    #[error("empty configuration")]
    EmptyConfiguration,
    #[error("malformed configuration text: {0}")]
    Parse(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("attach point {attach} at step {step} does not exist yet ({available} automata)")]
    AttachOutOfRange {
        step: usize,
        attach: usize,
        available: usize,
    },
    #[error("network is not a parity network (found nonzero offset at automaton {0})")]
    NotParity(usize),
    #[error("network is not a synchroniser (automaton {0} does not have offset 1)")]
    NotSynchroniser(usize),
    #[error("target alphabet {target} does not divide alphabet {k}")]
    Projection { k: usize, target: usize },
    #[error("no revisit within {0} steps (limit undetermined)")]
    Undetermined(usize),
    #[error("not converged within {0} steps")]
    NotConverged(usize),
    #[error("interaction graph is disconnected")]
    Disconnected,
    #[error("budget exceeded: {required} evaluations requested, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("format error: {0}")]
    Format(String),
}
