//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("exact arithmetic overflowed its 128-bit representation")]
    Overflow,

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid number literal '{0}' (expected an integer, decimal, or integer fraction like 1/15)")]
    InvalidNumber(String),

    #[error("duration '{0}' is missing a unit suffix; write e.g. '20ms', '250us', or '1/15s'")]
    MissingUnit(String),

    #[error("duration '{0}' is negative; durations must be >= 0")]
    NegativeDuration(String),

    #[error("instant arithmetic went negative")]
    NegativeInstant,

    #[error("hyperperiod of an empty period list is undefined")]
    EmptyPeriodList,

    #[error("{context}: period/frequency must be positive")]
    NonPositivePeriod { context: String },

    #[error("workload document is malformed: {0}")]
    MalformedDocument(String),

    #[error("{path}: duplicate task name '{name}'")]
    DuplicateTaskName { path: String, name: String },

    #[error("{path}: duplicate model id '{id}'")]
    DuplicateModelId { path: String, id: String },

    #[error("{path}: duration must be positive, got {value}")]
    NonPositiveDuration { path: String, value: String },

    #[error("unknown strategy mode '{0}' (expected 'overlay' or 'customized')")]
    UnknownStrategyMode(String),

    #[error("{path}: {message}")]
    InvalidField { path: String, message: String },

    #[error("workload has no tasks; nothing to simulate")]
    EmptyTaskSet,

    #[error("unknown setup '{0}' (expected one of A, B, C, D)")]
    UnknownSetup(String),

    #[error("latency table has no entry for model '{0}'")]
    MissingModelLatency(String),

    #[error("metrics window [{start}, {end}] is empty or outside the trace")]
    BadWindow { start: String, end: String },

    #[error("only {got} backlog samples after warmup but {needed} are required; simulate a longer horizon")]
    TooFewSamples { needed: usize, got: usize },

    #[error("calibration targets are infeasible: {0}")]
    InfeasibleTargets(String),

    #[error("calibration did not satisfy hard constraint '{0}' after convergence")]
    ConstraintUnsatisfied(String),

    #[error("sweep baseline diverges; normalization against it is meaningless")]
    DivergentBaseline,

    #[error("trace CSV line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
