//! Slice decomposition `T = A + J·B` of normal matrices and the complex
//! subspaces `H^{Jι}_± = {u : Ju = ±u·ι}`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::qmatrix::{self, chi, chi_inverse, hermitian_eigen, hermitian_function, CMatrix, ComplexRep, QMatrix, C64};
use crate::quaternion::{Quaternion, SliceFrame};
use crate::vector::{self, QVector};

/// Normality tolerance, relative to `‖T‖_F²`.
pub const TOL_NORMAL: f64 = 1e-9;
/// Eigenvalues of `B` below `TOL_KER·‖T‖_F` count as kernel.
pub const TOL_KER: f64 = 1e-9;
/// Tolerance for structural checks on `J` and for commutation tests.
pub const TOL_STRUCT: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SliceDecomposition {
    /// `(T + T*)/2`.
    pub a: QMatrix,
    /// `|T − T*|/2`.
    pub b: QMatrix,
    /// Anti self-adjoint unitary commuting with `A` and `B`.
    pub j: QMatrix,
    /// Orthogonal projector onto `Ker(B)`, where `J` is a convention.
    pub kernel: QMatrix,
    pub frame: SliceFrame,
}

impl SliceDecomposition {
    pub fn reconstruct(&self) -> QMatrix {
        &self.a + &(&self.j * &self.b)
    }

    /// Largest violation of the commutation and unitarity relations.
    pub fn structure_residual(&self) -> f64 {
        let n = self.a.n();
        [
            self.a.commutator_norm(&self.b),
            self.a.commutator_norm(&self.j),
            self.b.commutator_norm(&self.j),
            self.j.adjoint().max_diff(&-&self.j),
            (&self.j.adjoint() * &self.j).max_diff(&QMatrix::identity(n)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub(crate) fn check_normal(t: &QMatrix) -> Result<()> {
    let s = t.frobenius_norm();
    let residual = t.normality_residual();
    if residual > TOL_NORMAL * s * s {
        return Err(Error::NotNormal { residual });
    }
    Ok(())
}

/// Groups ascending values into runs whose consecutive gaps are at most `tol`.
pub(crate) fn group_sorted(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            if k > start {
                groups.push(start..k);
            }
            start = k;
        }
    }
    groups
}

/// `T = A + J·B` for a normal `T`.
///
/// On `Ker(B)^⊥`, `J = (T − A)·B⁺`. On `Ker(B)`, which `A` preserves, `J`
/// is fixed by the rule `J w = w·ι` over an orthonormal eigenbasis of
/// `A|_{Ker(B)}`; each eigenspace basis is taken by pivoted Gram–Schmidt of
/// its projections of `e_1, …, e_n`.
pub fn decompose(t: &QMatrix, frame: &SliceFrame) -> Result<SliceDecomposition> {
    check_normal(t)?;
    let n = t.n();
    let tstar = t.adjoint();
    let a = (t + &tstar).scale(0.5);
    let d = t - &tstar;

    // −i·χ(T − T*) is Hermitian; |·| of its spectrum gives 2B without
    // squaring small eigenvalues.
    let herm = chi(&d).0 * C64::new(0.0, -1.0);
    let (values, vectors) = hermitian_eigen(&herm);
    let cut = TOL_KER * t.frobenius_norm();
    let b = pull_back(hermitian_function(&values, &vectors, |h| 0.5 * h.abs()))?;
    let b_pinv = pull_back(hermitian_function(&values, &vectors, |h| if h.abs() > cut { 2.0 / h.abs() } else { 0.0 }))?;
    let kernel = pull_back(hermitian_function(&values, &vectors, |h| if h.abs() > cut { 0.0 } else { 1.0 }))?;

    let mut j = (&d.scale(0.5)) * &b_pinv;
    let kernel_dim = values.iter().filter(|h| h.abs() <= cut).count();
    if kernel_dim % 2 != 0 {
        return Err(Error::NumericalFailure("odd complex kernel dimension for B".into()));
    }
    if kernel_dim > 0 {
        for w in kernel_eigenbasis(&a, &kernel, kernel_dim / 2, t.frobenius_norm())? {
            j = &j + &QMatrix::outer_with(&w, frame.unit);
        }
    }
    debug_assert_eq!(j.n(), n);
    Ok(SliceDecomposition { a, b, j, kernel, frame: *frame })
}

fn pull_back(c: CMatrix) -> Result<QMatrix> {
    chi_inverse(&ComplexRep(c), qmatrix::TOL_REP)
}

/// Orthonormal eigenbasis of `A` restricted to the range of `kernel`.
fn kernel_eigenbasis(a: &QMatrix, kernel: &QMatrix, dim: usize, scale: f64) -> Result<Vec<QVector>> {
    let n = a.n();
    let cands: Vec<QVector> = (0..n).map(|m| kernel.column(m)).collect();
    let w = vector::orthonormal_span(&cands, dim, 1e-6);
    if w.len() != dim {
        return Err(Error::NumericalFailure("could not span Ker(B)".into()));
    }
    // A in the coordinates of w
    let aw: Vec<QVector> = w.iter().map(|v| a.apply(v)).collect();
    let ak = QMatrix::from_fn(dim, |r, c| vector::inner(&w[r], &aw[c]));
    let (values, vectors) = hermitian_eigen(&chi(&ak).0);
    let wmat = {
        let mut cols = w.clone();
        cols.resize(n, vector::zeros(n));
        QMatrix::from_columns(&cols)
    };
    let mut out = Vec::with_capacity(dim);
    for group in group_sorted(&values, 1e-8 * scale.max(f64::MIN_POSITIVE)) {
        if group.len() % 2 != 0 {
            return Err(Error::NumericalFailure("unpaired eigenvalue of A on Ker(B)".into()));
        }
        let cols = vectors.columns(group.start, group.len());
        let small = chi_inverse(&ComplexRep(cols * cols.adjoint()), qmatrix::TOL_REP)?;
        // lift the dim×dim projector to H^n through w
        let mut padded = QMatrix::zeros(n);
        for r in 0..dim {
            for c in 0..dim {
                padded[(r, c)] = small[(r, c)];
            }
        }
        let lifted = &(&wmat * &padded) * &wmat.adjoint();
        let cands: Vec<QVector> = (0..n).map(|m| lifted.column(m)).collect();
        let basis = vector::orthonormal_span(&cands, group.len() / 2, 1e-6);
        if basis.len() != group.len() / 2 {
            return Err(Error::NumericalFailure("could not span an eigenspace of A on Ker(B)".into()));
        }
        out.extend(basis);
    }
    Ok(out)
}

/// An orthonormal `C_ι`-basis of `H^{Jι}_+`; it is also an orthonormal
/// basis of `H^n` over `H`.
#[derive(Clone, Debug)]
pub struct ComplexSubspaceBasis {
    pub frame: SliceFrame,
    pub j: QMatrix,
    pub vectors: Vec<QVector>,
}

impl ComplexSubspaceBasis {
    pub fn n(&self) -> usize {
        self.j.n()
    }

    /// `u_+ = (u − J u ι)/2`.
    pub fn plus(&self, u: &[Quaternion]) -> QVector {
        vector::scale(&vector::sub(u, &vector::mul_right(&self.j.apply(u), self.frame.unit)), 0.5)
    }

    /// `u_− = (u + J u ι)/2`.
    pub fn minus(&self, u: &[Quaternion]) -> QVector {
        vector::scale(&vector::add(u, &vector::mul_right(&self.j.apply(u), self.frame.unit)), 0.5)
    }

    /// Coordinates `⟨z_r|v⟩ ∈ C_ι` of a vector of `H^{Jι}_+`.
    pub fn coordinates(&self, v: &[Quaternion]) -> DVector<C64> {
        DVector::from_iterator(self.vectors.len(), self.vectors.iter().map(|z| self.frame.to_complex(&vector::inner(z, v))))
    }

    pub fn from_coordinates(&self, c: &DVector<C64>) -> QVector {
        let mut v = vector::zeros(self.n());
        for (z, ck) in self.vectors.iter().zip(c.iter()) {
            v = vector::add(&v, &vector::mul_right(z, self.frame.from_complex(*ck)));
        }
        v
    }

    /// The quaternionic matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_columns(&self.vectors)
    }

    /// Largest `‖J z − z ι‖` over the basis.
    pub fn eigen_residual(&self) -> f64 {
        self.vectors
            .iter()
            .map(|z| vector::distance(&self.j.apply(z), &vector::mul_right(z, self.frame.unit)))
            .fold(0.0, f64::max)
    }
}

/// Orthonormal `C_ι`-basis of `{u : Ju = u·ι}`, from pivoted Gram–Schmidt of
/// the projections `(e_m)_+` and `(e_m ȷ)_+`.
pub fn complex_subspace_basis(j: &QMatrix, frame: &SliceFrame) -> Result<ComplexSubspaceBasis> {
    let n = j.n();
    let residual = j.adjoint().max_diff(&-j).max((&j.adjoint() * j).max_diff(&QMatrix::identity(n)));
    if residual > TOL_STRUCT {
        return Err(Error::NotAntiUnitary { residual });
    }
    let proto = ComplexSubspaceBasis { frame: *frame, j: j.clone(), vectors: Vec::new() };
    let mut cands = Vec::with_capacity(2 * n);
    for m in 0..n {
        cands.push(proto.plus(&vector::basis(n, m, Quaternion::ONE)));
        cands.push(proto.plus(&vector::basis(n, m, frame.aux)));
    }
    let vectors = vector::orthonormal_span(&cands, n, 1e-6);
    if vectors.len() != n {
        return Err(Error::NumericalFailure(format!("H^(Jι)_+ spanned by {} vectors, expected {n}", vectors.len())));
    }
    Ok(ComplexSubspaceBasis { vectors, ..proto })
}

/// Matrix of `T|_{H^{Jι}_+}` in the given basis: `⟨z_r|T z_s⟩ ∈ C_ι`.
pub fn restrict_to_plus(t: &QMatrix, basis: &ComplexSubspaceBasis) -> Result<CMatrix> {
    let residual = t.commutator_norm(&basis.j);
    if residual > TOL_STRUCT * t.frobenius_norm().max(1.0) {
        return Err(Error::DoesNotCommuteWithJ { residual });
    }
    let n = basis.n();
    let images: Vec<QVector> = basis.vectors.iter().map(|z| t.apply(z)).collect();
    Ok(CMatrix::from_fn(n, n, |r, s| basis.frame.to_complex(&vector::inner(&basis.vectors[r], &images[s]))))
}

/// The unique right-`H`-linear extension of a `C_ι`-linear operator on
/// `H^{Jι}_+`: `T̃u = T(u_+) − T(u_− ȷ)·ȷ`.
pub fn extend_complex_operator(m: &CMatrix, basis: &ComplexSubspaceBasis, aux: &Quaternion) -> Result<QMatrix> {
    let frame = SliceFrame::with_aux(basis.frame.unit, *aux)?;
    let n = basis.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
    }
    let apply_plus = |v: &[Quaternion]| basis.from_coordinates(&(m * basis.coordinates(v)));
    let cols: Vec<QVector> = (0..n)
        .map(|c| {
            let u = vector::basis(n, c, Quaternion::ONE);
            let plus = apply_plus(&basis.plus(&u));
            let minus = apply_plus(&vector::mul_right(&basis.minus(&u), frame.aux));
            vector::sub(&plus, &vector::mul_right(&minus, frame.aux))
        })
        .collect();
    Ok(QMatrix::from_columns(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn example_one() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![Quaternion::J, Quaternion::ZERO]]).unwrap()
    }

    fn example_two() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap()
    }

    #[test]
    fn decomposes_example_one() {
        let d = decompose(&example_one(), &SliceFrame::default()).unwrap();
        let a = QMatrix::from_rows(vec![vec![Quaternion::ZERO, q(0.0, 0.5, -0.5, 0.0)], vec![q(0.0, -0.5, 0.5, 0.0), Quaternion::ZERO]]).unwrap();
        let s = FRAC_1_SQRT_2;
        let j = QMatrix::from_rows(vec![vec![Quaternion::ZERO, q(0.0, s, s, 0.0)], vec![q(0.0, s, s, 0.0), Quaternion::ZERO]]).unwrap();
        assert!(d.a.max_diff(&a) < 1e-15);
        assert!(d.b.max_diff(&QMatrix::scalar(2, Quaternion::real(SQRT_2 / 2.0))) < 1e-14);
        assert!(d.j.max_diff(&j) < 1e-14);
        assert!(d.kernel.max_abs() < 1e-14);
        assert!(d.structure_residual() < 1e-14);
    }

    #[test]
    fn decomposes_example_two_with_the_kernel_rule() {
        let s = example_two();
        let d = decompose(&s, &SliceFrame::default()).unwrap();
        assert!(d.a.max_diff(&s) < 1e-15);
        assert_eq!(d.b.max_abs(), 0.0);
        assert!(d.j.max_diff(&QMatrix::scalar(2, Quaternion::I)) < 1e-14);
    }

    #[test]
    fn real_multiples_of_identity() {
        let t = QMatrix::scalar(3, Quaternion::real(-2.5));
        let d = decompose(&t, &SliceFrame::default()).unwrap();
        assert!(d.a.max_diff(&t) < 1e-15);
        assert_eq!(d.b.max_abs(), 0.0);
        assert!((&d.j * &d.j).max_diff(&QMatrix::scalar(3, Quaternion::real(-1.0))) < 1e-14);
        assert!(d.reconstruct().max_diff(&t) < 1e-15);
    }

    #[test]
    fn rejects_non_normal_input() {
        let t = QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::ONE], vec![Quaternion::ZERO, Quaternion::ZERO]]).unwrap();
        assert!(matches!(decompose(&t, &SliceFrame::default()), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn standard_complex_subspace() {
        let basis = complex_subspace_basis(&QMatrix::scalar(2, Quaternion::I), &SliceFrame::default()).unwrap();
        assert_eq!(basis.vectors, vec![vector::basis(2, 0, Quaternion::ONE), vector::basis(2, 1, Quaternion::ONE)]);
    }

    #[test]
    fn complex_subspace_of_example_one_contains_the_eigenvectors() {
        let d = decompose(&example_one(), &SliceFrame::default()).unwrap();
        let basis = complex_subspace_basis(&d.j, &d.frame).unwrap();
        assert_eq!(basis.vectors.len(), 2);
        assert!(basis.eigen_residual() < 1e-14);
        let s = 0.5 * FRAC_1_SQRT_2;
        let u1 = vec![q(0.0, 0.5, 0.0, 0.5), q(s, s, s, -s)];
        let u2 = vec![q(0.0, 0.5, 0.0, -0.5), q(-s, s, s, s)];
        for u in [&u1, &u2] {
            assert!(vector::distance(&d.j.apply(u), &vector::mul_right(u, Quaternion::I)) < 1e-14);
            // u lies in the span
            let back = basis.from_coordinates(&basis.coordinates(u));
            assert!(vector::distance(&back, u) < 1e-14);
        }
        // restricted to the eigenbasis, T is diag(λ1, λ2)
        let eig = ComplexSubspaceBasis { vectors: vec![u1, u2], ..basis };
        let tp = restrict_to_plus(&example_one(), &eig).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((tp[(0, 0)] - C64::new(h, h)).norm() < 1e-14);
        assert!((tp[(1, 1)] - C64::new(-h, h)).norm() < 1e-14);
        assert!(tp[(0, 1)].norm() < 1e-14 && tp[(1, 0)].norm() < 1e-14);
        // and extending diag(λ1, λ2) gives back T
        let ext = extend_complex_operator(&tp, &eig, &Quaternion::J).unwrap();
        assert!(ext.max_diff(&example_one()) < 1e-14);
    }

    #[test]
    fn restriction_examples() {
        let basis = complex_subspace_basis(&QMatrix::scalar(2, Quaternion::I), &SliceFrame::default()).unwrap();
        let tp = restrict_to_plus(&example_two(), &basis).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(0.0, 0.0)]);
        assert!((tp - expected).norm() < 1e-15);
        let id = restrict_to_plus(&QMatrix::identity(2), &basis).unwrap();
        assert!((id - CMatrix::identity(2, 2)).norm() < 1e-15);
        assert!(matches!(restrict_to_plus(&example_one(), &basis), Err(Error::DoesNotCommuteWithJ { .. })));
    }

    #[test]
    fn extension_examples() {
        let d = decompose(&example_one(), &SliceFrame::default()).unwrap();
        let basis = complex_subspace_basis(&d.j, &d.frame).unwrap();
        let ext = extend_complex_operator(&CMatrix::identity(2, 2), &basis, &Quaternion::J).unwrap();
        assert!(ext.max_diff(&QMatrix::identity(2)) < 1e-14);
        assert!(matches!(
            extend_complex_operator(&CMatrix::identity(2, 2), &basis, &Quaternion::I),
            Err(Error::BadAuxiliaryUnit(_))
        ));
    }

    #[test]
    fn not_anti_unitary() {
        assert!(matches!(
            complex_subspace_basis(&QMatrix::identity(2), &SliceFrame::default()),
            Err(Error::NotAntiUnitary { .. })
        ));
    }

    #[test]
    fn grouping() {
        let g = group_sorted(&[0.0, 1e-12, 1.0, 2.0, 2.0 + 1e-13], 1e-9);
        assert_eq!(g, vec![0..2, 2..3, 3..5]);
        assert!(group_sorted(&[], 1.0).is_empty());
    }
}
