use alloc::string::String;

use crate::family::FamilyId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("negative Pochhammer length {0}")]
    NegativeLength(i64),
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("exponent {0} out of range")]
    ExponentOverflow(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("family {0} requires the base q")]
    MissingQ(FamilyId),
    #[error("family {0} takes no base q")]
    UnexpectedQ(FamilyId),
    #[error("parameter {name:?} is not used by family {family}")]
    UnknownParameter { family: FamilyId, name: String },
    #[error("parameter {name:?} missing for family {family}")]
    MissingParameter { family: FamilyId, name: String },
    #[error("lattice size N must be at least 1")]
    EmptyLattice,
    #[error("{what} has a pole at x = {x}")]
    Pole { what: &'static str, x: i64 },
    #[error("degree {n} outside 0..={max}")]
    DegreeOutOfRange { n: u64, max: u64 },
    #[error("{op} is not defined for family {family}")]
    UnsupportedFamily { family: FamilyId, op: &'static str },
    #[error("vector length {got} does not match lattice size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("index {index} outside 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("orthogonality violated for degrees ({m}, {n})")]
    OrthogonalityViolation { m: usize, n: usize },
    #[error("interpolation nodes collide at x = {0}")]
    NodeCollision(i64),
    #[error("eigenvalue of degree {n} collides with degree {k}")]
    EigenvalueCollision { n: u64, k: u64 },
    #[error("image of eta^{0} under the operator is not a polynomial of degree {0}")]
    DegreeRaised(u64),
    #[error("no pole-free sample window found")]
    NoSampleWindow,
    #[error("division by the lattice polynomial leaves a nonzero remainder at degree m = {0}")]
    NonzeroRemainder(u64),
    #[error("Casoratian of the seed set vanishes at x = {0}")]
    DegenerateCasoratian(i64),
    #[error("index set must be non-empty, strictly increasing")]
    InvalidIndexSet,
    #[error("series precision exhausted while evaluating at x = {0}")]
    PrecisionExhausted(i64),
}
