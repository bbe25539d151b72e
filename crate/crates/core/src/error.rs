use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index {k} outside the support [0, {n}]")]
    OutOfSupport { k: i64, n: u64 },
    #[error("conditioning on a null event: P[X >= {k}] = 0")]
    NullEvent { k: i64 },
    #[error("outside the domain of {bound}: requires {constraint}")]
    Domain {
        bound: &'static str,
        constraint: &'static str,
    },
    #[error("square root of an interval with negative lower endpoint")]
    NegativeSqrt,
    #[error("interval division by an interval containing zero")]
    DivisionByZero,
    #[error("laws must share the number of trials (left n = {left}, right n = {right})")]
    MismatchedTrials { left: u64, right: u64 },
    #[error("left success probability must not exceed the right one")]
    UnorderedPair,
    #[error("could not parse {0:?} as an exact rational (expected a/b or a decimal)")]
    Parse(String),
    #[error("unknown claim {id:?}; registered claims: {catalog}")]
    UnknownClaim { id: String, catalog: String },
    #[error("enclosure width target not reached at the precision cap of {cap} bits")]
    PrecisionExhausted { cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
