use thiserror::Error;

/// Errors raised by the curve-level operations (signatures, chains, generators).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("polygon needs at least {required} vertices, got {actual}")]
    TooFewVertices { required: usize, actual: usize },

    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("vertex {index} has a nonzero z coordinate in a planar polygon")]
    NotPlanarCoordinates { index: usize },

    #[error("denominator determinant vanishes at vertex {0} (curve is not centroaffine-admissible there)")]
    DegenerateDeterminant(usize),

    #[error("transition matrix at vertex {0} is singular (kappa = 0)")]
    SingularChain(usize),

    #[error("seed vertices are degenerate (determinant {determinant:e})")]
    DegenerateSeed { determinant: f64 },

    #[error("signature has no invariants for vertex {vertex}")]
    SignatureTooShort { vertex: isize },

    #[error("invalid period: p = {p}, l = {l} (need p >= 3, gcd(p, l) = 1 and 2l < p)")]
    InvalidPeriod { p: usize, l: usize },

    #[error("operation requires a closed polygon")]
    NotClosed,

    #[error("operation requires a {expected}D polygon, got {found}D")]
    WrongDimension { expected: usize, found: usize },

    #[error("constant invariants do not close within {max_period} steps")]
    NoClosure { max_period: usize },

    #[error("no admissible sample found in {attempts} attempts")]
    SamplingFailed { attempts: usize },
}
