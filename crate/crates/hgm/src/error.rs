//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty parameter side")]
    EmptySide,
    #[error("gamma vector contains a zero entry")]
    ZeroEntry,
    #[error("gamma entries do not sum to zero (sum = {0})")]
    SumNonzero(i64),
    #[error("gcd of gamma entries is {0}, expected 1")]
    GcdNotOne(u64),
    #[error("cyclotomic multisets are not disjoint (both sides contain {0})")]
    NonDisjoint(u32),
    #[error("degenerate parameter: rank 0 after reduction")]
    Degenerate,
    #[error("gamma vector too short for variety-facing operations (length {0} < 3)")]
    TooShort(usize),
    #[error("specialization t = {0} not allowed here")]
    BadSpecialization(String),
    #[error("prime {p} is {kind} for this input, expected {expected}")]
    BadPrime {
        p: u64,
        kind: &'static str,
        expected: &'static str,
    },
    #[error("q = {q} is not split for this family (m = {m})")]
    NonSplit { q: u64, m: u64 },
    #[error("k = 0 is not a valid cusp exponent")]
    ZeroExponent,
    #[error("point-count budget exceeded: {0} evaluations requested")]
    BudgetExceeded(u128),
    #[error("p-adic precision exhausted at {0} digits")]
    PrecisionExhausted(u32),
    #[error("signature required for even-weight gamma factors with odd central Hodge number")]
    SignatureRequired,
    #[error("Hodge decrement below zero at t = 1")]
    HodgeUnderflow,
    #[error("missing Euler factor at p = {0}; supply a fixture")]
    MissingFactor(u64),
    #[error("computed local data at p = {p} contradicts fixture: {detail}")]
    FixtureMismatch { p: u64, detail: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{0}")]
    Domain(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
