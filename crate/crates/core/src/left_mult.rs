//! Left scalar multiplications `q ↦ L_q` of `H^n`.
//!
//! A left scalar multiplication is a real `*`-algebra homomorphism from `H`
//! into the matrices with `L_r u = u·r` for real `r`. Real-linearity pins it
//! down from the images of `i` and `j`, which is all that is stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::quaternion::Quaternion;
use crate::vector::{self, QVector};

/// Default tolerance for the defining relations and for orthonormality.
pub const TOL_LEFT: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLeft")]
pub struct LeftScalarMultiplication {
    #[serde(rename = "Li")]
    li: QMatrix,
    #[serde(rename = "Lj")]
    lj: QMatrix,
}

#[derive(Deserialize)]
struct RawLeft {
    #[serde(rename = "Li")]
    li: QMatrix,
    #[serde(rename = "Lj")]
    lj: QMatrix,
}

impl TryFrom<RawLeft> for LeftScalarMultiplication {
    type Error = Error;

    fn try_from(raw: RawLeft) -> Result<Self> {
        LeftScalarMultiplication::new(raw.li, raw.lj, TOL_LEFT)
    }
}

impl LeftScalarMultiplication {
    /// Validates the defining relations within `tol`.
    pub fn new(li: QMatrix, lj: QMatrix, tol: f64) -> Result<Self> {
        let residual = defining_residual(&li, &lj);
        if residual > tol {
            return Err(Error::NotLeftScalarMultiplication { residual });
        }
        Ok(LeftScalarMultiplication { li, lj })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(li: QMatrix, lj: QMatrix) -> Self {
        LeftScalarMultiplication { li, lj }
    }

    /// `L_q = q·I`, induced by the standard basis.
    pub fn standard(n: usize) -> Self {
        LeftScalarMultiplication { li: QMatrix::scalar(n, Quaternion::I), lj: QMatrix::scalar(n, Quaternion::J) }
    }

    /// `L_q = Σ_z z·q·⟨z|·⟩` over an orthonormal basis `N`.
    pub fn from_basis(basis: &[QVector], tol: f64) -> Result<Self> {
        let n = basis.len();
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let residual = vector::gram_residual(basis);
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self::from_basis_with_phases(basis, &vec![Quaternion::ONE; n]))
    }

    /// `L'_q = Σ_z z·γ̄_z q γ_z·⟨z|·⟩` for unit quaternions `γ_z`.
    pub(crate) fn from_basis_with_phases(basis: &[QVector], phases: &[Quaternion]) -> Self {
        let n = basis.len();
        let mut li = QMatrix::zeros(n);
        let mut lj = QMatrix::zeros(n);
        for (z, g) in basis.iter().zip(phases) {
            li = &li + &QMatrix::outer_with(z, g.conj() * Quaternion::I * *g);
            lj = &lj + &QMatrix::outer_with(z, g.conj() * Quaternion::J * *g);
        }
        LeftScalarMultiplication { li, lj }
    }

    pub fn n(&self) -> usize {
        self.li.n()
    }

    pub fn li(&self) -> &QMatrix {
        &self.li
    }

    pub fn lj(&self) -> &QMatrix {
        &self.lj
    }

    pub fn lk(&self) -> QMatrix {
        &self.li * &self.lj
    }

    /// `L_q = q0·I + q1·L_i + q2·L_j + q3·L_k`.
    pub fn op(&self, q: &Quaternion) -> QMatrix {
        let n = self.n();
        let mut m = QMatrix::scalar(n, Quaternion::real(q.w));
        if q.x != 0.0 {
            m = &m + &self.li.scale(q.x);
        }
        if q.y != 0.0 {
            m = &m + &self.lj.scale(q.y);
        }
        if q.z != 0.0 {
            m = &m + &self.lk().scale(q.z);
        }
        m
    }

    /// Largest entrywise difference of the generators.
    pub fn max_diff(&self, other: &LeftScalarMultiplication) -> f64 {
        self.li.max_diff(&other.li).max(self.lj.max_diff(&other.lj))
    }

    /// An orthonormal basis `N` with `L_q z = z·q` for all `z ∈ N`, built one
    /// vector at a time on the orthogonal complement of those already found.
    pub fn basis(&self, tol: f64) -> Result<Vec<QVector>> {
        let residual = defining_residual(&self.li, &self.lj);
        if residual > tol.max(TOL_LEFT) {
            return Err(Error::NotLeftScalarMultiplication { residual });
        }
        let n = self.n();
        let mut found: Vec<QVector> = Vec::with_capacity(n);
        let mut complement = QMatrix::identity(n);
        while found.len() < n {
            let z = self.fixed_vector(&complement, 1e-6).ok_or(Error::NotLeftScalarMultiplication { residual })?;
            complement = &complement - &QMatrix::outer(&z, &z);
            found.push(z);
        }
        Ok(found)
    }

    /// A unit vector `z` in the range of the projector `within` (which must
    /// commute with every `L_q`) such that `L_q z = z·q`.
    ///
    /// Scans `x = within·(e_m u)`, `u ∈ {1, i, j, k}`, moves `x` into
    /// `{x : L_k x = x k}` and sets `z = x − L_i x i`; when `L_i x + x i`
    /// vanishes, `x·k` is used instead. The candidate with the largest `z` is
    /// kept, earliest first on ties.
    pub fn fixed_vector(&self, within: &QMatrix, tol: f64) -> Option<QVector> {
        let n = self.n();
        let (li, lk) = (&self.li, self.lk());
        let (ui, uk) = (Quaternion::I, Quaternion::K);
        let mut best: Option<(f64, QVector)> = None;
        for m in 0..n {
            for u in [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K] {
                let x = within.apply(&vector::basis(n, m, u));
                let mut xp = vector::scale(&vector::sub(&x, &vector::mul_right(&lk.apply(&x), uk)), 0.5);
                if vector::norm(&xp) <= tol {
                    continue;
                }
                let y = vector::add(&li.apply(&xp), &vector::mul_right(&xp, ui));
                if vector::norm(&y) <= tol * vector::norm(&xp) {
                    xp = vector::mul_right(&xp, uk);
                }
                let z = vector::sub(&xp, &vector::mul_right(&li.apply(&xp), ui));
                let nz = vector::norm(&z);
                if best.as_ref().is_none_or(|(b, _)| nz > b * (1.0 + 1e-9)) {
                    best = Some((nz, z));
                }
            }
        }
        best.filter(|(nz, _)| *nz > tol).map(|(nz, z)| vector::scale(&z, 1.0 / nz))
    }
}

/// Largest violation among `L_i² = L_j² = −I`, `L_i L_j = −L_j L_i`,
/// `L_i* = −L_i` and `L_j* = −L_j`.
pub fn defining_residual(li: &QMatrix, lj: &QMatrix) -> f64 {
    if li.n() != lj.n() {
        return f64::INFINITY;
    }
    let minus_one = QMatrix::scalar(li.n(), Quaternion::real(-1.0));
    let checks = [
        (li * li).max_diff(&minus_one),
        (lj * lj).max_diff(&minus_one),
        (li * lj).max_diff(&-(lj * li)),
        li.adjoint().max_diff(&-li),
        lj.adjoint().max_diff(&-lj),
    ];
    checks.into_iter().fold(0.0, f64::max)
}

/// Whether `(L_i, L_j)` generates a left scalar multiplication. Every such
/// pair is induced by some orthonormal basis.
pub fn is_left_scalar_multiplication(li: &QMatrix, lj: &QMatrix, tol: f64) -> bool {
    li.n() == lj.n() && defining_residual(li, lj) <= tol
}
