//! Exact and certified continued fraction expansions of complex numbers
//! with partial quotients in discrete subrings of ℂ.
//!
//! The crate provides:
//!
//! * exact arithmetic in the six rings ℤ[i√k] (k = 1, 2, 3) and
//!   ℤ[(1+i√τ)/2] (τ = 3, 7, 11) and their quotient fields ([`rings`]);
//! * exact quadratic-surd arithmetic with certified complex root
//!   brackets ([`exact_surd`]);
//! * the Q-pair recurrence machinery, identity checks, error bounds,
//!   Condition C, and expansion drivers ([`cf_core`]);
//! * digit-choice algorithms, their fundamental-set geometry, and the
//!   exact disk-based verifiers for the Eisenstein growth conditions
//!   ([`algorithms`]);
//! * exact periodicity detection and reconstruction for quadratic surds
//!   ([`lagrange`]);
//! * succession rules and the exponential growth audit for Eisenstein
//!   nearest-integer expansions ([`growth`]).

pub mod algorithms;
pub mod cf_core;
pub mod corpus;
pub mod exact_surd;
pub mod growth;
pub mod interval;
pub mod lagrange;
pub mod real;
pub mod report;
pub mod rings;

pub use interval::{ComplexBox, RatInterval};
pub use real::{ExactComplex, ExactReal};
pub use rings::{FieldElement, RingElement, RingSpec};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero in quotient algebra")]
    DivisionByZero,
    #[error("reducible minimal polynomial: {0}")]
    Reducible(String),
    #[error("root selector is ambiguous or matches no root: {0}")]
    RootSelection(String),
    #[error("disk contains 0 or boundary")]
    DiskThroughOrigin,
    #[error("digit unresolved at step {step}: {reason}")]
    DigitUnresolved { step: usize, reason: String },
    #[error("unverifiable shape: {0}")]
    UnverifiableShape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no period found within budget of {0} steps")]
    PeriodBudgetExhausted(usize),
    #[error("round-trip check failed: {0}")]
    RoundTrip(String),
}

pub type Result<T> = std::result::Result<T, Error>;
