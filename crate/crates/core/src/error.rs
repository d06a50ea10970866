use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a rational literal: {0:?}")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prior is not on the simplex: {0}")]
    PriorNotOnSimplex(String),
    #[error("type set and action set must be nonempty")]
    EmptyTypeOrActionSet,
    #[error("every prior weight is zero")]
    AllTypesNull,
    #[error("belief is not on the simplex: {0}")]
    NotOnSimplex(String),
    #[error("subjective prior weights must sum to one: {0}")]
    LambdaNotNormalized(String),
    #[error("prior must have full support for this operation")]
    PriorNotFullSupport,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("linear program certificate failed verification: {0}")]
    CertificateFailure(String),
    #[error("envelope program is unbounded")]
    UnboundedEnvelope,
    #[error("the value pieces do not cover the belief {0}")]
    Uncovered(String),
    #[error("too many actions for tie-set enumeration: {0} > {max}", max = crate::geometry::MAX_ACTIONS)]
    TooManyActions(usize),
    #[error("game has {0} types in its support; a binary type set is required")]
    NotBinary(usize),
    #[error("selected value {value} is not admissible at atom {atom}")]
    InadmissibleValue { atom: usize, value: String },
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    InvalidDelta(String),
    #[error("mechanism is not incentive compatible: {0}")]
    NotIncentiveCompatible(String),
    #[error("assessment is not a perfect Bayesian equilibrium: {0}")]
    NotAnEquilibrium(String),
    #[error("malformed mechanism: {0}")]
    MalformedMechanism(String),
    #[error("oracle supports at most {max} types, got {0}", max = crate::oracle::MAX_ORACLE_TYPES)]
    TooManyTypes(usize),
    #[error("protocol values are out of order: {0}")]
    OrderingViolated(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
