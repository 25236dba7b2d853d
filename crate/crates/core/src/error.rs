use thiserror::Error;

use crate::quaternion::Quaternion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not an imaginary unit")]
    NotImaginaryUnit(Quaternion),
    #[error("auxiliary unit {0} is not an imaginary unit anti-commuting with the slice unit")]
    BadAuxiliaryUnit(Quaternion),
    #[error("complex matrix is not in the image of the quaternionic representation (residual {residual:e})")]
    NotInRepresentationImage { residual: f64 },
    #[error("matrix is singular (det_c = {det:e}, threshold {threshold:e})")]
    Singular { det: f64, threshold: f64 },
    #[error("matrix is not positive self-adjoint (asymmetry {asymmetry:e}, min eigenvalue {min_eigenvalue:e})")]
    NotPositive { asymmetry: f64, min_eigenvalue: f64 },
    #[error("vectors are not orthonormal (Gram residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("operator pair is not a left scalar multiplication (residual {residual:e})")]
    NotLeftScalarMultiplication { residual: f64 },
    #[error("matrix is not normal (‖TT* − T*T‖ = {residual:e})")]
    NotNormal { residual: f64 },
    #[error("operator is not an anti self-adjoint unitary (residual {residual:e})")]
    NotAntiUnitary { residual: f64 },
    #[error("operator does not commute with J (residual {residual:e})")]
    DoesNotCommuteWithJ { residual: f64 },
    #[error("eigenvalue clusters {first:?} and {second:?} are too close to separate reliably")]
    ClusterAmbiguity { first: [f64; 2], second: [f64; 2] },
    #[error("function has no value at support point {alpha} + ι{beta}")]
    MissingSupportPoint { alpha: f64, beta: f64 },
    #[error("function vanishes at support point {alpha} + ι{beta} with nonzero projector")]
    NotInjective { alpha: f64, beta: f64 },
    #[error("twist factor has modulus {modulus}, expected 1")]
    NotUnimodular { modulus: f64 },
    #[error("(T, L) violates the association conditions: {0}")]
    NotAssociatedPair(String),
    #[error("{alpha} + ι{beta} is not a left eigenvalue")]
    NotEigenvalue { alpha: f64, beta: f64 },
    #[error("operator norm {norm} is not below 1")]
    NotContractive { norm: f64 },
    #[error("support point of modulus {modulus} lies on the unit circle")]
    SupportOnBoundary { modulus: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// Errors caused by inputs violating an operation's precondition, as
    /// opposed to breakdowns of the numerics.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::NotInRepresentationImage { .. }
                | Error::NumericalFailure(_)
                | Error::SupportOnBoundary { .. }
                | Error::ClusterAmbiguity { .. }
        )
    }
}
