use thiserror::Error;

use crate::report::ExclusionReason;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent k = {0} not supported (expected 1 or 2)")]
    BadExponent(u32),
    #[error("{p}^{k} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("polynomial is not monic (leading coefficient {leading})")]
    NotMonic { leading: i64 },
    #[error("degree {0} is not supported (expected 2 or 3)")]
    UnsupportedDegree(usize),
    #[error("discriminant mismatch: expected {expected}, polynomial has {actual}")]
    DiscriminantMismatch { expected: i64, actual: i64 },
    #[error("expected {expected} coefficients, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("residue {value} not reduced mod {m}")]
    Unreduced { value: u64, m: u64 },
    #[error("{p} divides the discriminant {discriminant}")]
    Ramified { p: u64, discriminant: i64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("sieve needs {needed} bytes, budget is {budget}")]
    MemoryBudget { needed: usize, budget: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("D = {0} does not define a real quadratic field")]
    BadQuadraticD(i64),
    #[error("unit {0} has norm {1}, expected ±1")]
    NotAUnit(String, String),
    #[error("unit must not be ±1")]
    TrivialUnit,
    #[error("field discriminant must be negative, got {0}")]
    NotComplexCubic(i64),
    #[error("ramified set {given:?} does not match prime divisors {actual:?} of the discriminant")]
    RamifiedSetMismatch { given: Vec<u64>, actual: Vec<u64> },
    #[error("no unit found with coefficients bounded by {0}; retry with a larger bound")]
    UnitNotFound(i64),
    #[error("class number must be positive")]
    BadClassNumber,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("Fermat step failed at p = {p}: unit power {value} is not 1 mod p")]
    FermatStep { p: u64, value: String },
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeuristicError {
    #[error("need 1 <= n <= m, got n = {n}, m = {m}")]
    Dimensions { n: u32, m: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power >= 2")]
    NotPrimePower(u64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("exact rational overflowed 128 bits")]
    Overflow,
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid record in {path}: {message}")]
    Invalid { path: String, message: String },
}

/// Why a single-prime test was not carried out (or could not be).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("p = {p} excluded: {reason}")]
    Excluded { p: u64, reason: ExclusionReason },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("Fermat step failed at p = {p}: unit power {value} is not 1 mod p")]
    FermatStep { p: u64, value: String },
}

impl Rejection {
    pub fn reason(&self) -> Option<ExclusionReason> {
        match self {
            Self::Excluded { reason, .. } => Some(*reason),
            _ => None,
        }
    }
}
