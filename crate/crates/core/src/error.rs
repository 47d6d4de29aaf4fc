use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coordinate vector has length {found}, group has Hirsch length {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} evaluated to the non-integer {value} at {at}")]
    NonIntegralValue {
        what: String,
        value: String,
        at: String,
    },

    #[error("last basis element is not central: commutator with generator {index} is {witness}")]
    NotCentral { index: usize, witness: String },

    #[error("Hirsch length {0} is too small for this operation")]
    HirschTooSmall(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("group failed validation: {0}")]
    Validation(String),

    #[error("not a 2-cocycle: {0}")]
    InvalidCocycle(String),

    #[error("not a section of the projection: {0}")]
    NotASection(String),

    #[error("cocycle is not skinny with respect to the canonical homomorphism: {0}")]
    NotSkinny(String),

    #[error("canonical homomorphism is not surjective: alpha(a) = {0}")]
    NotSurjective(BigInt),

    #[error("degree bound {degree} too small: {witness}")]
    DegreeBoundTooSmall { degree: u32, witness: String },

    #[error("n = {n} shares a factor with the coefficient denominator {denominator}")]
    NotCoprime { n: usize, denominator: BigInt },

    #[error("matrix dimensions differ: {0} vs {1}")]
    MatrixDimensionMismatch(usize, usize),

    #[error("power iteration did not converge after {iterations} iterations (lower bound {lower_bound})")]
    NoConvergence { iterations: usize, lower_bound: f64 },

    #[error("defect bound violated at {witness}: measured {measured}, bound {bound}")]
    BoundViolated {
        witness: String,
        measured: f64,
        bound: f64,
    },

    #[error("triple product is not scalar at index {index}: {detail}")]
    NotScalar { index: usize, detail: String },

    #[error("||M - I|| = {0} is not below 1; the logarithm series does not apply")]
    TooFarFromIdentity(f64),

    #[error("logarithm series did not converge in {terms} terms (last term norm {last_norm})")]
    SeriesNotConverged { terms: usize, last_norm: f64 },

    #[error("pairing term {index} is out of range: ||T - I|| = {norm}")]
    TermOutOfRange { index: usize, norm: f64 },

    #[error("chain is not a cycle: boundary has {0} terms")]
    NotACycle(usize),

    #[error("cocycle pairs to zero with the cycle; no obstruction")]
    TorsionPairing,

    #[error("pairing mismatch at n = {n}: expected {expected}, got {got}")]
    PairingMismatch { n: usize, expected: BigInt, got: String },

    #[error("no admissible dimension in the requested list")]
    NoAdmissibleDimension,
}
