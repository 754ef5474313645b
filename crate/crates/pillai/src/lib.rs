//! Certified computation for Pillai-type equations over linear recurrences.
//!
//! The crate answers, with machine-checkable rigor, the question: which
//! integers c admit two or more representations c = U_n − b^m, where U is an
//! integer linear recurrence (the Padovan sequence by default) and b is a
//! fixed base (3 by default)? The library
//!
//! 1. enumerates all representations in an exhaustive search window,
//! 2. certifies the analytic bound that makes the window exhaustive — a
//!    Matveev linear-forms-in-logarithms bound, bootstrapped through a
//!    Gúzman Santos–Luca absolute bound, then shrunk by Dujella–Pethő
//!    continued-fraction reduction rounds, and
//! 3. emits a certificate whose every inequality can be re-checked from the
//!    recorded interval endpoints in exact rational arithmetic.
//!
//! All real arithmetic is ball arithmetic ([`rigor`]): a dyadic midpoint, a
//! certified radius, outward rounding. No floating point participates in any
//! certified inequality.

pub mod cfrac;
pub mod config;
pub mod heights;
pub mod pipeline;
pub mod rigor;
pub mod search;
pub mod sequence;

/// Crate-wide error type. Variants mirror the failure modes of the module
/// that raises them.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The precision policy was exhausted before a computation decided.
    #[error("precision exhausted at {bits} bits while {what}")]
    PrecisionExhausted { bits: u32, what: String },
    /// nearest_int_distance needs radius < 1/4.
    #[error("nearest integer ambiguous: ball radius not below 1/4")]
    AmbiguousNearestInteger,
    #[error("logarithm requires a ball certified positive")]
    NonPositiveLog,
    #[error("square root requires a ball certified nonnegative")]
    NegativeSqrt,
    #[error("division by a ball whose interval contains zero")]
    DivisorContainsZero,
    /// Dujella–Pethő reduction: no qualifying convergent certified ε > 0.
    #[error("epsilon could not be certified positive at any of {attempts} convergents tried")]
    EpsilonNeverPositive { attempts: usize },
    #[error("convergent index {index} beyond certified range {certified_through}")]
    IndexBeyondCertified { index: usize, certified_through: usize },
    /// A lemma's stated hypothesis failed its certified check.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    /// A rational height input must arrive in lowest terms.
    #[error("fraction not in lowest terms: {0}")]
    NotReduced(String),
    /// No index offset aligns the fitted Binet coefficient with its window.
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
    /// A certified value landed on the wrong side of a bound the pipeline
    /// relies on; the run must not be trusted.
    #[error("soundness violation: {0}")]
    SoundnessViolation(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("certificate inconsistent: {0}")]
    Inconsistent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
