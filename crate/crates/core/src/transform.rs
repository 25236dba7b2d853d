//! The bounded transform `Z_T = T (I + T*T)^{-1/2}` and its inverse
//! `T = Z (I − Z*Z)^{-1/2}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmatrix::{self, chi, chi_inverse, hermitian_eigen, hermitian_function, operator_norm, ComplexRep, QMatrix};
use crate::quaternion::{SliceFrame, SlicePoint};
use crate::spectral::{spectral_decompose, support_order, IqPvm, TOL_CLUSTER};

/// Guard on `‖Z‖ < 1` for the inverse transform.
pub const TOL_MARGIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformPair {
    #[serde(rename = "T")]
    pub t: QMatrix,
    /// `(I + T*T)⁻¹`.
    #[serde(rename = "C")]
    pub c: QMatrix,
    /// `T·sqrt(C)`.
    #[serde(rename = "Z")]
    pub z: QMatrix,
}

/// `f(M*M)` for `f` applied to the Hermitian `χ(M*M)`.
fn gram_function(m: &QMatrix, f: impl Fn(f64) -> f64) -> Result<QMatrix> {
    let (values, vectors) = hermitian_eigen(&chi(&(&m.adjoint() * m)).0);
    chi_inverse(&ComplexRep(hermitian_function(&values, &vectors, |x| f(x.max(0.0)))), qmatrix::TOL_REP)
}

pub fn bounded_transform(t: &QMatrix) -> Result<TransformPair> {
    let c = gram_function(t, |x| 1.0 / (1.0 + x))?;
    let root = gram_function(t, |x| 1.0 / (1.0 + x).sqrt())?;
    Ok(TransformPair { t: t.clone(), z: t * &root, c })
}

pub fn inverse_transform(z: &QMatrix) -> Result<QMatrix> {
    let norm = operator_norm(z);
    if norm >= 1.0 - TOL_MARGIN {
        return Err(Error::NotContractive { norm });
    }
    Ok(z * &gram_function(z, |x| 1.0 / (1.0 - x.min(1.0 - TOL_MARGIN)).sqrt())?)
}

/// The iqPVM of `T` obtained from that of `Z_T` by pushing the support
/// forward with `F(z) = z (1 − |z|²)^{-1/2}`; projectors and `L` are kept.
pub fn decompose_via_transform(t: &QMatrix, frame: &SliceFrame, cluster_tol: Option<f64>) -> Result<IqPvm> {
    crate::slice::check_normal(t)?;
    let pair = bounded_transform(t)?;
    let pz = spectral_decompose(&pair.z, frame, cluster_tol)?;
    let mut pieces = Vec::with_capacity(pz.support.len());
    for (p, proj) in pz.support.iter().zip(pz.projectors) {
        let modulus = p.to_complex().norm();
        if modulus >= 1.0 - TOL_MARGIN {
            return Err(Error::SupportOnBoundary { modulus });
        }
        let s = 1.0 / (1.0 - modulus * modulus).sqrt();
        pieces.push((SlicePoint::new(p.alpha * s, p.beta * s, frame.unit), proj));
    }
    let tol = TOL_CLUSTER * operator_norm(t).max(f64::MIN_POSITIVE);
    pieces.sort_by(|a, b| support_order(&a.0, &b.0, tol));
    let (support, projectors) = pieces.into_iter().unzip();
    Ok(IqPvm { unit: pz.unit, support, projectors, l: pz.l })
}
