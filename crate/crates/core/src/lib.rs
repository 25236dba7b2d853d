//! Spectral theory of quaternionic normal matrices.
//!
//! The crate realizes, on `H^n`, the slice decomposition `T = A + JB`,
//! intertwining quaternionic projection-valued measures, the quaternionic
//! functional calculus, spherical and left spectra, and the bounded
//! transform `T ↦ T(I + T*T)^{-1/2}`.

pub mod error;
pub mod left_mult;
pub mod left_spectrum;
pub mod qmatrix;
pub mod quaternion;
pub mod random;
pub mod slice;
pub mod spectral;
pub mod transform;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use qmatrix::QMatrix;
pub use quaternion::{Quaternion, SliceFrame, SlicePoint};
pub use vector::QVector;
