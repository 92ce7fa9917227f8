use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why an integer is not an admissible field parameter `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    /// `m < 5`, so there is no prime factor at all (or `m` is too small).
    NoPrimeFactor,
    /// Some prime divides `m` more than once.
    NotSquarefree { prime: u64 },
    /// Some prime factor is not `≡ 1 (mod 4)`.
    BadCongruence { prime: u64 },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::NoPrimeFactor => write!(f, "has no prime factor"),
            InvalidReason::NotSquarefree { prime } => {
                write!(f, "not squarefree ({prime}² divides it)")
            }
            InvalidReason::BadCongruence { prime } => {
                write!(f, "prime factor {prime} is not ≡ 1 mod 4")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("m = {m} is not a squarefree product of primes ≡ 1 mod 4: {reason}")]
    InvalidM { m: u64, reason: InvalidReason },

    #[error("{p} is not a prime ≡ 1 mod 4")]
    InvalidPrime { p: u64 },

    #[error("elements or ideals of different fields: m = {left} and m = {right}")]
    MixedField { left: u64, right: u64 },

    #[error("({x} + {y}·√m)/2 is not in the maximal order: x and y differ in parity")]
    NotIntegral { x: String, y: String },

    #[error("discriminants differ: {left} and {right}")]
    DiscriminantMismatch { left: i64, right: i64 },

    #[error("form ({a}, {b}, {c}) is not primitive")]
    NonPrimitive { a: i64, b: i64, c: i64 },

    #[error("discriminant {0} is not a positive non-square")]
    BadDiscriminant(i64),

    #[error("({a}, {b}) is not a representation {m} = a² + 4b² with a odd and a, b > 0")]
    InvalidRep { m: u64, a: u64, b: u64 },

    #[error("{p} does not divide m = {m}")]
    NotRamified { m: u64, p: u64 },

    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },

    #[error("empty range: {min} > {max}")]
    InvalidRange { min: u64, max: u64 },

    #[error("constraint unsatisfied: {0}")]
    ConstraintUnsatisfied(String),

    #[error("value out of the supported range: {0}")]
    Overflow(String),

    /// Violated internal invariant; signals a bug rather than bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's arguments or environment
    /// rather than by a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Inconsistency(_))
    }
}
