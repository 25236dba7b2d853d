//! Dense quaternionic matrices acting on `H^n` by left matrix multiplication,
//! and their complex adjoint representation `χ`.
//!
//! With `q = a + b·j` (`a = q0 + q1 i`, `b = q2 + q3 i`) and
//! `u = x + y·j ↦ (x, ȳ)`, the representation is
//!
//! ```text
//! χ(M) = [[A, −B], [B̄, Ā]]
//! ```
//!
//! which is a real `*`-algebra homomorphism. All eigenvalue, singular value
//! and determinant work happens on `χ(M)` and is pulled back.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::vector::{self, QVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Default tolerance for accepting a complex matrix as an image of `χ`.
pub const TOL_REP: f64 = 1e-8;
/// Default singularity threshold, relative to `scale^{2n}`.
pub const TOL_SING: f64 = 1e-10;
/// Default tolerance for positivity and self-adjointness checks, relative to scale.
pub const TOL_POSITIVE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQMatrix", into = "RawQMatrix")]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

#[derive(Serialize, Deserialize)]
struct RawQMatrix {
    n: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl TryFrom<RawQMatrix> for QMatrix {
    type Error = Error;

    fn try_from(raw: RawQMatrix) -> Result<Self> {
        if raw.entries.len() != raw.n {
            return Err(Error::DimensionMismatch { expected: raw.n, found: raw.entries.len() });
        }
        if let Some(row) = raw.entries.iter().find(|r| r.len() != raw.n) {
            return Err(Error::DimensionMismatch { expected: raw.n, found: row.len() });
        }
        Ok(QMatrix { n: raw.n, data: raw.entries.into_iter().flatten().collect() })
    }
}

impl From<QMatrix> for RawQMatrix {
    fn from(m: QMatrix) -> Self {
        let entries = m.data.chunks(m.n.max(1)).map(|r| r.to_vec()).take(m.n).collect();
        RawQMatrix { n: m.n, entries }
    }
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, data: vec![Quaternion::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::scalar(n, Quaternion::ONE)
    }

    /// `q` on the diagonal; acts as `u ↦ q·u` entrywise.
    pub fn scalar(n: usize, q: Quaternion) -> Self {
        QMatrix::diagonal(&vec![q; n])
    }

    pub fn diagonal(d: &[Quaternion]) -> Self {
        let n = d.len();
        QMatrix::from_fn(n, |r, c| if r == c { d[r] } else { Quaternion::ZERO })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        QMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        QMatrix::try_from(RawQMatrix { n, entries: rows })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QVector]) -> Self {
        let n = cols.len();
        QMatrix::from_fn(n, |r, c| cols[c][r])
    }

    /// The rank-one operator `v ↦ u·⟨w|v⟩`.
    pub fn outer(u: &[Quaternion], w: &[Quaternion]) -> Self {
        QMatrix::from_fn(u.len(), |r, c| u[r] * w[c].conj())
    }

    /// `v ↦ u·q·⟨u|v⟩`.
    pub fn outer_with(u: &[Quaternion], q: Quaternion) -> Self {
        QMatrix::from_fn(u.len(), |r, c| u[r] * q * u[c].conj())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Quaternion] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> QVector {
        (0..self.n).map(|r| self[(r, c)]).collect()
    }

    /// `(Mu)_r = Σ_s M_{rs} u_s`.
    pub fn apply(&self, u: &[Quaternion]) -> QVector {
        assert_eq!(u.len(), self.n, "vector dimension mismatch");
        (0..self.n).map(|r| self.row(r).iter().zip(u).map(|(m, x)| *m * *x).sum()).collect()
    }

    pub fn checked_apply(&self, u: &[Quaternion]) -> Result<QVector> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: u.len() });
        }
        Ok(self.apply(u))
    }

    pub fn adjoint(&self) -> QMatrix {
        QMatrix::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    /// Entrywise `q·M_{rs}`.
    pub fn left_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|m| q * m)
    }

    /// Entrywise `M_{rs}·q`.
    pub fn right_scale(&self, q: Quaternion) -> QMatrix {
        self.map(|m| m * q)
    }

    pub fn scale(&self, r: f64) -> QMatrix {
        self.map(|m| m * r)
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().map(|&q| f(q)).collect() }
    }

    pub fn checked_add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.same_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.same_dim(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        self.same_dim(other)?;
        Ok(self * other)
    }

    fn same_dim(&self, other: &QMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Largest entry modulus; the scale used by relative tolerances.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Quaternion::norm).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Quaternion::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance.
    pub fn max_diff(&self, other: &QMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.max_diff(&self.adjoint()) <= tol
    }

    /// `‖TT* − T*T‖_F`.
    pub fn normality_residual(&self) -> f64 {
        let a = self.adjoint();
        (&(self * &a) - &(&a * self)).frobenius_norm()
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let s = self.frobenius_norm();
        self.normality_residual() <= tol * s * s
    }

    /// `‖MN − NM‖_F`.
    pub fn commutator_norm(&self, other: &QMatrix) -> f64 {
        (&(self * other) - &(other * self)).frobenius_norm()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.n + c]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect() }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * o.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.map(|q| -q)
    }
}

impl Neg for QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for QMatrix {
            type Output = QMatrix;
            fn $f(self, o: QMatrix) -> QMatrix {
                (&self).$f(&o)
            }
        }
        impl $tr<&QMatrix> for QMatrix {
            type Output = QMatrix;
            fn $f(self, o: &QMatrix) -> QMatrix {
                (&self).$f(o)
            }
        }
        impl $tr<QMatrix> for &QMatrix {
            type Output = QMatrix;
            fn $f(self, o: QMatrix) -> QMatrix {
                self.$f(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// complex representation

/// A `2n × 2n` complex matrix in the image of `χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRep(pub CMatrix);

fn split(q: &Quaternion) -> (C64, C64) {
    (C64::new(q.w, q.x), C64::new(q.y, q.z))
}

fn join(a: C64, b: C64) -> Quaternion {
    Quaternion::new(a.re, a.im, b.re, b.im)
}

pub fn chi(m: &QMatrix) -> ComplexRep {
    let n = m.n();
    let mut c = CMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for s in 0..n {
            let (a, b) = split(&m[(r, s)]);
            c[(r, s)] = a;
            c[(r, n + s)] = -b;
            c[(n + r, s)] = b.conj();
            c[(n + r, n + s)] = a.conj();
        }
    }
    ComplexRep(c)
}

impl ComplexRep {
    /// Largest violation of the block pattern `[[A, −B], [B̄, Ā]]`.
    pub fn block_residual(&self) -> f64 {
        let c = &self.0;
        let n = c.nrows() / 2;
        let mut worst = 0.0f64;
        for r in 0..n {
            for s in 0..n {
                worst = worst.max((c[(r, s)] - c[(n + r, n + s)].conj()).norm());
                worst = worst.max((c[(r, n + s)] + c[(n + r, s)].conj()).norm());
            }
        }
        worst
    }
}

/// Inverse of `χ`, averaging the two copies of each block.
pub fn chi_inverse(c: &ComplexRep, tol: f64) -> Result<QMatrix> {
    let cm = &c.0;
    if cm.nrows() != cm.ncols() || !cm.nrows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: cm.ncols(), found: cm.nrows() });
    }
    let n = cm.nrows() / 2;
    let scale = cm.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let residual = c.block_residual();
    if residual > tol * scale {
        return Err(Error::NotInRepresentationImage { residual });
    }
    Ok(QMatrix::from_fn(n, |r, s| {
        let a = (cm[(r, s)] + cm[(n + r, n + s)].conj()) * 0.5;
        let b = (cm[(n + r, s)].conj() - cm[(r, n + s)]) * 0.5;
        join(a, b)
    }))
}

/// `u = x + y·j ↦ (x, ȳ)`.
pub fn chi_vector(u: &[Quaternion]) -> DVector<C64> {
    let n = u.len();
    let mut v = DVector::zeros(2 * n);
    for (r, q) in u.iter().enumerate() {
        let (x, y) = split(q);
        v[r] = x;
        v[n + r] = y.conj();
    }
    v
}

pub fn chi_vector_inverse(v: &DVector<C64>) -> QVector {
    let n = v.len() / 2;
    (0..n).map(|r| join(v[r], v[n + r].conj())).collect()
}

/// Eigen-decomposition of the Hermitian part of `h`, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigen-decomposition `N = V diag(μ) V^H` of a normal complex matrix using
/// only Hermitian solvers.
///
/// `N = H₁ + i H₂` with commuting Hermitian `H₁`, `H₂`. The eigenvectors of
/// `H₁ + θ H₂` for a fixed irrational `θ` diagonalize `N` unless two
/// eigenvalues lie on a common line `Re μ + θ Im μ = c`; such groups
/// (within `tol`) are split by diagonalizing `H₂` on them. Eigenvalues are
/// the Rayleigh quotients `v^H N v`.
pub fn normal_eigen(m: &CMatrix, tol: f64) -> (Vec<C64>, CMatrix) {
    const THETA: f64 = 0.618_033_988_749_894_8;
    let n = m.nrows();
    let half = C64::new(0.5, 0.0);
    let h1 = (m + m.adjoint()) * half;
    let h2 = (m - m.adjoint()) * C64::new(0.0, -0.5);
    let (values, mut vectors) = hermitian_eigen(&(&h1 + &h2 * C64::new(THETA, 0.0)));
    let mut start = 0;
    for k in 1..=n {
        if k == n || values[k] - values[k - 1] > tol {
            if k - start > 1 {
                let v = vectors.columns(start, k - start).into_owned();
                let (_, w) = hermitian_eigen(&(v.adjoint() * &h2 * &v));
                vectors.columns_mut(start, k - start).copy_from(&(v * w));
            }
            start = k;
        }
    }
    let mu = (0..n)
        .map(|k| {
            let v = vectors.column(k);
            (v.adjoint() * m * v)[(0, 0)]
        })
        .collect();
    (mu, vectors)
}

/// `Σ f(λ) v v^H` over the eigenpairs.
pub fn hermitian_function(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let d = DVector::from_iterator(values.len(), values.iter().map(|&l| C64::new(f(l), 0.0)));
    vectors * CMatrix::from_diagonal(&d) * vectors.adjoint()
}

/// Determinant of `χ(M)`: real, nonnegative up to rounding.
pub fn det_c(m: &QMatrix) -> f64 {
    if m.n() == 0 {
        return 1.0;
    }
    chi(m).0.determinant().re
}

/// Singularity cutoff `tol · scale^{2n}` with `scale = max |entry|`.
pub fn singularity_threshold(m: &QMatrix, tol: f64) -> f64 {
    tol * m.max_abs().powi(2 * m.n() as i32)
}

pub fn inverse(m: &QMatrix, tol: f64) -> Result<QMatrix> {
    let det = det_c(m);
    let threshold = singularity_threshold(m, tol);
    if m.max_abs() == 0.0 || det <= threshold {
        return Err(Error::Singular { det, threshold });
    }
    let inv = chi(m)
        .0
        .try_inverse()
        .ok_or(Error::Singular { det, threshold })?;
    chi_inverse(&ComplexRep(inv), TOL_REP)
}

/// Eigen-decomposition of `[[0, M], [M^H, 0]]`, whose eigenvalues are
/// `±σ_k(M)` with absolute accuracy `ε‖M‖`.
fn singular_embedding(c: &CMatrix) -> (Vec<f64>, CMatrix) {
    let k = c.nrows();
    let mut h = CMatrix::zeros(2 * k, 2 * k);
    h.view_mut((0, k), (k, k)).copy_from(c);
    h.view_mut((k, 0), (k, k)).copy_from(&c.adjoint());
    hermitian_eigen(&h)
}

/// `f(|M|)` from the embedding: `g(|H|) = diag(g(|M^H|), g(|M|))`.
fn right_function(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let k = values.len() / 2;
    hermitian_function(values, vectors, |l| f(l.abs())).view((k, k), (k, k)).into_owned()
}

/// Singular values of `χ(M)`, descending; each appears twice.
pub fn singular_values(m: &QMatrix) -> Vec<f64> {
    let (values, _) = singular_embedding(&chi(m).0);
    values[values.len() / 2..].iter().rev().map(|s| s.max(0.0)).collect()
}

/// Largest singular value of `χ(M)`.
pub fn operator_norm(m: &QMatrix) -> f64 {
    singular_values(m).first().cloned().unwrap_or(0.0)
}

/// `‖P − Q‖` for orthogonal projectors: the sine of the largest principal
/// angle between their ranges when the ranks agree, 1 otherwise.
pub fn projector_distance(p: &QMatrix, q: &QMatrix) -> f64 {
    operator_norm(&(p - q))
}

fn positivity_check(m: &QMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    let scale = m.max_abs();
    let asymmetry = m.max_diff(&m.adjoint());
    if asymmetry > tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositive { asymmetry, min_eigenvalue: f64::NAN });
    }
    let (values, vectors) = hermitian_eigen(&chi(m).0);
    let min = values.first().cloned().unwrap_or(0.0);
    if min < -tol * scale {
        return Err(Error::NotPositive { asymmetry, min_eigenvalue: min });
    }
    Ok((values, vectors))
}

/// Whether `M` is self-adjoint with spectrum in `[−tol·scale, ∞)`.
pub fn is_positive(m: &QMatrix, tol: f64) -> bool {
    positivity_check(m, tol).is_ok()
}

/// The unique positive square root of a positive self-adjoint matrix.
pub fn sqrt_positive(m: &QMatrix) -> Result<QMatrix> {
    let (values, vectors) = positivity_check(m, TOL_POSITIVE)?;
    // eigenvalues at rounding level are zero; their square roots would not be
    let floor = 64.0 * f64::EPSILON * m.max_abs();
    let root = hermitian_function(&values, &vectors, |l| if l <= floor { 0.0 } else { l.sqrt() });
    chi_inverse(&ComplexRep(root), TOL_REP)
}

/// `|M| = sqrt(M*M)`, from the eigen-decomposition of `[[0, χ(M)], [χ(M)^H, 0]]`
/// so that small singular values are not squared.
pub fn abs_op(m: &QMatrix) -> Result<QMatrix> {
    if m.n() == 0 {
        return Ok(m.clone());
    }
    let (values, vectors) = singular_embedding(&chi(m).0);
    chi_inverse(&ComplexRep(right_function(&values, &vectors, |s| s)), TOL_REP)
}

/// Projector onto the right singular vectors of `χ(M)` with singular value
/// at most `cutoff(σ_max)`, and their number.
fn null_space(m: &QMatrix, cutoff: impl FnOnce(f64) -> f64) -> (CMatrix, usize) {
    let (values, vectors) = singular_embedding(&chi(m).0);
    let smax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = cutoff(smax);
    let count = values[values.len() / 2..].iter().filter(|s| s.abs() <= cut).count();
    (right_function(&values, &vectors, |s| if s <= cut { 1.0 } else { 0.0 }), count)
}

/// Real dimension of `Ker(M)`; a singular value is zero when it is at most
/// `tol` times the largest one.
pub fn kernel_real_dim(m: &QMatrix, tol: f64) -> usize {
    2 * null_space(m, |smax| tol * smax).1
}

/// Real dimension of `Ker(M)` counting singular values at most `cutoff`.
pub fn kernel_real_dim_at(m: &QMatrix, cutoff: f64) -> usize {
    2 * null_space(m, |_| cutoff).1
}

/// Orthogonal projector onto `Ker(M)`, with the relative cutoff of
/// [`kernel_real_dim`].
pub fn kernel_projector(m: &QMatrix, tol: f64) -> Result<QMatrix> {
    chi_inverse(&ComplexRep(null_space(m, |smax| tol * smax).0), TOL_REP)
}

/// Orthogonal projector onto `Ker(M)` with an absolute cutoff.
pub fn kernel_projector_at(m: &QMatrix, cutoff: f64) -> Result<QMatrix> {
    chi_inverse(&ComplexRep(null_space(m, |_| cutoff).0), TOL_REP)
}

/// Real `4n × 4n` matrix of a real-linear map of `H^n`, in the coordinates
/// `(w, x, y, z)` of each component.
pub fn real_matrix(n: usize, f: impl Fn(&[Quaternion]) -> QVector) -> DMatrix<f64> {
    let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut out = DMatrix::zeros(4 * n, 4 * n);
    for m in 0..n {
        for (a, unit) in units.iter().enumerate() {
            let image = f(&vector::basis(n, m, *unit));
            for (r, q) in image.iter().enumerate() {
                for (b, v) in q.to_array().iter().enumerate() {
                    out[(4 * r + b, 4 * m + a)] = *v;
                }
            }
        }
    }
    out
}

/// Real null space of a real-linear map, as vectors of `H^n`; a singular
/// value is zero when it is at most `tol` times the largest one.
pub fn real_kernel(n: usize, f: impl Fn(&[Quaternion]) -> QVector, tol: f64) -> Vec<QVector> {
    if n == 0 {
        return Vec::new();
    }
    let mat = real_matrix(n, f);
    let k = 4 * n;
    let mut h = DMatrix::<f64>::zeros(2 * k, 2 * k);
    h.view_mut((0, k), (k, k)).copy_from(&mat);
    h.view_mut((k, 0), (k, k)).copy_from(&mat.transpose());
    let eig = h.symmetric_eigen();
    let smax = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = tol * smax;
    let count = eig.eigenvalues.iter().filter(|s| s.abs() <= cut).count() / 2;
    // lower block of the projector onto the small eigenvalues of the embedding
    let mut proj = DMatrix::<f64>::zeros(k, k);
    for (c, l) in eig.eigenvalues.iter().enumerate() {
        if l.abs() <= cut {
            let w = eig.eigenvectors.view((k, c), (k, 1));
            proj += w * w.transpose();
        }
    }
    let inner = proj.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| inner.eigenvalues[b].total_cmp(&inner.eigenvalues[a]));
    order
        .into_iter()
        .take(count)
        .map(|c| {
            let v = inner.eigenvectors.column(c);
            (0..n).map(|r| Quaternion::new(v[4 * r], v[4 * r + 1], v[4 * r + 2], v[4 * r + 3])).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::QRng;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn t_example() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![Quaternion::J, Quaternion::ZERO]]).unwrap()
    }

    #[test]
    fn adjoint_and_unitarity() {
        let t = t_example();
        let expected = QMatrix::from_rows(vec![vec![Quaternion::ZERO, -Quaternion::J], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap();
        assert_eq!(t.adjoint(), expected);
        assert_eq!(&t * &t.adjoint(), QMatrix::identity(2));
        assert_eq!(&t * &QMatrix::identity(2), t);
        assert!(matches!(t.checked_mul(&QMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn chi_of_units() {
        let cj = chi(&QMatrix::scalar(1, Quaternion::J)).0;
        let expected = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(cj, expected);
        let ci = chi(&QMatrix::scalar(1, Quaternion::I)).0;
        let expected = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -1.0)]);
        assert_eq!(ci, expected);
        let t = t_example();
        assert_eq!(chi_inverse(&chi(&t), TOL_REP).unwrap(), t);
    }

    #[test]
    fn chi_inverse_rejects_foreign_matrices() {
        let mut c = chi(&t_example()).0;
        c[(0, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(chi_inverse(&ComplexRep(c), TOL_REP), Err(Error::NotInRepresentationImage { .. })));
    }

    #[test]
    fn chi_vector_intertwines_the_action() {
        let mut rng = QRng::seeded(3);
        let m = rng.matrix(3);
        let u = rng.vector(3);
        let lhs = chi_vector(&m.apply(&u));
        let rhs = chi(&m).0 * chi_vector(&u);
        assert!((lhs - rhs).norm() < 1e-13);
        assert!(vector::distance(&chi_vector_inverse(&chi_vector(&u)), &u) < 1e-15);
    }

    #[test]
    fn determinants() {
        assert_abs_diff_eq!(det_c(&QMatrix::identity(3)), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(det_c(&t_example()), 1.0, epsilon = 1e-14);
        // |det| of 2I on H^2 through a 4x4 complex representation
        assert_abs_diff_eq!(det_c(&QMatrix::scalar(2, Quaternion::real(2.0))), 16.0, epsilon = 1e-12);
    }

    #[test]
    fn inverses() {
        let t = t_example();
        assert!(inverse(&t, TOL_SING).unwrap().max_diff(&t.adjoint()) < 1e-14);
        let two = QMatrix::scalar(2, Quaternion::real(2.0));
        assert!(inverse(&two, TOL_SING).unwrap().max_diff(&QMatrix::scalar(2, Quaternion::real(0.5))) < 1e-15);
        assert!(matches!(inverse(&QMatrix::zeros(2), TOL_SING), Err(Error::Singular { .. })));
        let rank_one = QMatrix::outer(&[Quaternion::ONE, Quaternion::I], &[Quaternion::ONE, Quaternion::I]);
        assert!(matches!(inverse(&rank_one, TOL_SING), Err(Error::Singular { .. })));
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!(operator_norm(&t_example()), 1.0, epsilon = 1e-14);
        assert_eq!(operator_norm(&QMatrix::zeros(2)), 0.0);
        let d = QMatrix::diagonal(&[q(1.0, 1.0, 0.0, 0.0), Quaternion::ZERO]);
        assert_abs_diff_eq!(operator_norm(&d), SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn square_roots() {
        let m = QMatrix::scalar(2, Quaternion::real(SQRT_2));
        let r = sqrt_positive(&m).unwrap();
        assert!(r.max_diff(&QMatrix::scalar(2, Quaternion::real(2f64.powf(0.25)))) < 1e-14);

        let s = 0.5 / SQRT_2;
        let p1 = QMatrix::from_rows(vec![
            vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, s, -s, 0.0)],
            vec![q(0.0, -s, s, 0.0), q(0.5, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        assert!(sqrt_positive(&p1).unwrap().max_diff(&p1) < 1e-14);

        let t = t_example();
        assert!(sqrt_positive(&(&t.adjoint() * &t)).unwrap().max_diff(&QMatrix::identity(2)) < 1e-14);
        assert!(matches!(sqrt_positive(&QMatrix::scalar(2, Quaternion::real(-1.0))), Err(Error::NotPositive { .. })));
        assert!(matches!(sqrt_positive(&t), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn absolute_values() {
        let t = t_example();
        let abs = abs_op(&(&t - &t.adjoint())).unwrap();
        assert!(abs.max_diff(&QMatrix::scalar(2, Quaternion::real(SQRT_2))) < 1e-14);
        assert_eq!(abs_op(&QMatrix::zeros(2)).unwrap().max_abs(), 0.0);
        let s = QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap();
        assert!(abs_op(&s).unwrap().max_diff(&QMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn kernels() {
        let rank_one = QMatrix::outer(&[Quaternion::ONE, Quaternion::I], &[Quaternion::ONE, Quaternion::I]);
        assert_eq!(kernel_real_dim(&rank_one, 1e-10), 4);
        assert_eq!(kernel_real_dim(&QMatrix::identity(3), 1e-10), 0);
        let p = kernel_projector(&rank_one, 1e-10).unwrap();
        assert!((&p * &p).max_diff(&p) < 1e-14);
        assert!((&rank_one * &p).max_abs() < 1e-14);
        // u ↦ i u − u i kills C_i ⊕ C_i: real dimension 4
        let k = real_kernel(2, |u| vector::sub(&QMatrix::scalar(2, Quaternion::I).apply(u), &vector::mul_right(u, Quaternion::I)), 1e-10);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn json_layout() {
        let t = t_example();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":2,"entries":[[[0.0,0.0,0.0,0.0],[0.0,1.0,0.0,0.0]],[[0.0,0.0,1.0,0.0],[0.0,0.0,0.0,0.0]]]}"#);
        let back: QMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<QMatrix>(r#"{"n":2,"entries":[[[0,0,0,0]]]}"#).is_err());
    }
}
