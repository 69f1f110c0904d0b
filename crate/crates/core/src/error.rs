use thiserror::Error;

use crate::rational::Q;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("order relation has a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("poset has no unique maximal element (maximal elements: {})", .0.join(", "))]
    NoUniqueMaximum(Vec<String>),

    #[error("state set does not match the poset elements: {0}")]
    StateMismatch(String),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("row `{row}` sums to {sum} and has negative entries; not a (sub)stochastic or quasi kernel")]
    NotAKernel { row: String, sum: Q },

    #[error("kernel must have unit row sums, row `{row}` sums to {sum}")]
    RowSum { row: String, sum: Q },

    #[error("kernel has a negative entry at ({row}, {col}): {value}")]
    NegativeEntry { row: String, col: String, value: Q },

    #[error("state `{0}` is not absorbing (its row is not a point mass on itself)")]
    NotAbsorbing(String),

    #[error("state `{0}` cannot reach any absorbing state")]
    NoAbsorption(String),

    #[error("win and coffin must be distinct states, both are `{0}`")]
    WinIsCoffin(String),

    #[error("non-unique or missing invariant measure: left null space of (P - I) has dimension {dimension}")]
    InvariantMeasure { dimension: usize },

    #[error("invariant null vector sums to zero and cannot be normalized")]
    UnnormalizableMeasure,

    #[error("singular absorption system: some state cannot reach an absorbing state")]
    SingularSystem,

    #[error("not Möbius monotone: dual entry ({row}, {col}) is {value}")]
    NotMobiusMonotone { row: String, col: String, value: Q },

    #[error("invalid gambler spec: {0}")]
    InvalidSpec(String),

    #[error("infeasible gambler spec: total move probability at state {state} is {total} > 1")]
    Infeasible { state: String, total: Q },

    #[error("probability tables are not constant for coordinate {0}")]
    NotHomogeneous(usize),

    #[error("state {0} is outside the lattice")]
    StateOutOfRange(String),

    #[error("ruin value {value} at `{state}` lies outside [0, 1]")]
    OutOfRange { state: String, value: Q },

    #[error("simulation completed no trials ({censored} censored)")]
    NoCompletedTrials { censored: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {message}")]
    Document { path: String, message: String },
}
