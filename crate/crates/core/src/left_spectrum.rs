//! Left spectrum of a normal matrix with respect to an associated left
//! scalar multiplication.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::left_mult::LeftScalarMultiplication;
use crate::qmatrix::{self, chi, det_c, hermitian_eigen, normal_eigen, operator_norm, QMatrix, C64};
use crate::slice::check_normal;
use crate::quaternion::{Quaternion, SliceFrame, SlicePoint};
use crate::spectral::{association_residuals, integrate, verify_propl_conditions, IqPvm};
use crate::vector;

/// Determinant cutoff, relative to `max(1, ‖T‖ + |q|)^{2n}`.
pub const TOL_SING: f64 = qmatrix::TOL_SING;
/// Relative rank cutoff for kernels.
pub const TOL_RANK: f64 = 1e-8;
/// Distance below which two spectral points are the same.
pub const TOL_POINT: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Resolvent,
    Point,
}

/// `det_c(T − L_q)` and the threshold below which `q` is in the spectrum.
pub fn left_determinant(t: &QMatrix, l: &LeftScalarMultiplication, q: &Quaternion, sing_tol: f64) -> (f64, f64) {
    let n = t.n() as i32;
    let det = det_c(&(t - &l.op(q)));
    let scale = (operator_norm(t) + q.norm()).max(1.0);
    (det, sing_tol * scale.powi(2 * n))
}

fn require_associated(t: &QMatrix, l: &LeftScalarMultiplication, frame: &SliceFrame) -> Result<()> {
    if t.n() != l.n() {
        return Err(Error::DimensionMismatch { expected: t.n(), found: l.n() });
    }
    if !verify_propl_conditions(t, l, frame) {
        let r = association_residuals(t, l, frame);
        return Err(Error::NotAssociatedPair(format!(
            "residuals: L_ι T − T L_ι {:.3e}, L_ȷ T − T* L_ȷ {:.3e}, −L_ι(T − T*) ≥ 0 {:.3e}",
            r.commutes, r.conjugates, r.positivity
        )));
    }
    Ok(())
}

/// Whether `T − L_q` is singular.
pub fn left_membership(t: &QMatrix, l: &LeftScalarMultiplication, q: &Quaternion, frame: &SliceFrame, sing_tol: f64) -> Result<Membership> {
    require_associated(t, l, frame)?;
    let (det, threshold) = left_determinant(t, l, q, sing_tol);
    Ok(if det <= threshold { Membership::Point } else { Membership::Resolvent })
}

/// `(T − L_q)⁻¹` for `q` in the left resolvent set.
pub fn left_resolvent(t: &QMatrix, l: &LeftScalarMultiplication, q: &Quaternion, frame: &SliceFrame, sing_tol: f64) -> Result<QMatrix> {
    require_associated(t, l, frame)?;
    let (det, threshold) = left_determinant(t, l, q, sing_tol);
    if det <= threshold {
        return Err(Error::Singular { det, threshold });
    }
    qmatrix::inverse(&(t - &l.op(q)), f64::MIN_POSITIVE)
}

/// `∫ (z − q)⁻¹ dP(z)`.
pub fn calculus_resolvent(pvm: &IqPvm, q: &Quaternion) -> Result<QMatrix> {
    let mut phi = Vec::with_capacity(pvm.support.len());
    for p in &pvm.support {
        phi.push((*p, (p.to_quaternion() - *q).inverse()?));
    }
    integrate(&phi, pvm)
}

/// Merges points closer than `tol` and sorts by decreasing `α`, then `β`.
fn dedup_points(mut pts: Vec<SlicePoint>, tol: f64) -> Vec<SlicePoint> {
    pts.sort_by(|a, b| b.alpha.total_cmp(&a.alpha).then(b.beta.total_cmp(&a.beta)));
    let mut out: Vec<SlicePoint> = Vec::new();
    for p in pts {
        if !out.iter().any(|o| o.distance(&p) <= tol) {
            out.push(p);
        }
    }
    out
}

/// Point left spectrum of `T` with respect to `L`, read off `χ(T)` on the
/// `±i` eigenspaces of `χ(L_ι)`: an eigenvalue `μ` on the `+i` side is the
/// point `Re μ + ι Im μ`, on the `−i` side `Re μ − ι Im μ`.
pub fn left_point_spectrum(t: &QMatrix, l: &LeftScalarMultiplication, frame: &SliceFrame) -> Vec<SlicePoint> {
    let n = t.n();
    let ct = chi(t).0;
    let h = chi(&l.op(&frame.unit)).0 * C64::new(0.0, -1.0);
    let (values, vectors) = hermitian_eigen(&h);
    let scale = operator_norm(t).max(1.0);
    let mut pts = Vec::with_capacity(n);
    for sign in [-1.0, 1.0] {
        let cols: Vec<usize> = (0..values.len()).filter(|&k| values[k] * sign > 0.0).collect();
        let v = DMatrix::from_fn(2 * n, cols.len(), |r, c| vectors[(r, cols[c])]);
        let m = v.adjoint() * &ct * &v;
        for mu in normal_eigen(&m, 1e-9 * scale).0 {
            let mut beta = sign * mu.im;
            if beta.abs() <= TOL_POINT * scale {
                beta = beta.abs();
            }
            pts.push(SlicePoint { alpha: mu.re, beta, unit: frame.unit });
        }
    }
    dedup_points(pts, TOL_POINT * scale)
}

/// Spherical point spectrum of a normal `T` as representatives in `C_ι^+`:
/// the eigenvalues `μ` of `χ(T)` give the spheres through `Re μ + ι|Im μ|`.
pub fn spherical_point_spectrum(t: &QMatrix, frame: &SliceFrame) -> Result<Vec<SlicePoint>> {
    check_normal(t)?;
    let scale = operator_norm(t).max(1.0);
    let pts = normal_eigen(&chi(t).0, 1e-9 * scale)
        .0
        .into_iter()
        .map(|mu| SlicePoint::new(mu.re, mu.im.abs(), frame.unit))
        .collect();
    Ok(dedup_points(pts, TOL_POINT * scale))
}

/// Hausdorff distance between finite sets of `C_ι`.
pub fn hausdorff(a: &[SlicePoint], b: &[SlicePoint]) -> f64 {
    let one_way = |x: &[SlicePoint], y: &[SlicePoint]| {
        x.iter().map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => one_way(a, b).max(one_way(b, a)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceComparison {
    /// Real dimension of `{u : Tu = uq}`.
    pub right_dim_real: usize,
    /// Real dimension of `Ker(T − L_q)`.
    pub left_dim_real: usize,
    pub right_subset_left: bool,
    pub equality: bool,
}

pub fn eigenspace_compare(t: &QMatrix, l: &LeftScalarMultiplication, q: &SlicePoint, frame: &SliceFrame, sing_tol: f64) -> Result<EigenspaceComparison> {
    let n = t.n();
    let qq = q.to_quaternion();
    if left_membership(t, l, &qq, frame, sing_tol)? != Membership::Point {
        return Err(Error::NotEigenvalue { alpha: q.alpha, beta: q.beta });
    }
    let lq = l.op(&qq);
    let right = qmatrix::real_kernel(n, |u| vector::sub(&t.apply(u), &vector::mul_right(u, qq)), TOL_RANK);
    let left = qmatrix::real_kernel(n, |u| vector::sub(&t.apply(u), &lq.apply(u)), TOL_RANK);
    let scale = operator_norm(t) + qq.norm();
    let right_subset_left =
        right.iter().all(|u| vector::distance(&t.apply(u), &lq.apply(u)) <= TOL_RANK * scale.max(1.0) * vector::norm(u));
    Ok(EigenspaceComparison {
        right_dim_real: right.len(),
        left_dim_real: left.len(),
        right_subset_left,
        equality: right_subset_left && right.len() == left.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolventSample {
    pub q: Quaternion,
    pub resolvent: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeftSpectrumReport {
    pub point: Vec<[f64; 2]>,
    pub residual: Vec<[f64; 2]>,
    /// Empty in finite dimension.
    pub continuous: Vec<[f64; 2]>,
    pub resolvent_samples: Vec<ResolventSample>,
}

/// The left spectrum of `(T, L)` with resolvents at the sample points that
/// lie in the resolvent set.
pub fn left_spectrum_report(t: &QMatrix, l: &LeftScalarMultiplication, frame: &SliceFrame, samples: &[Quaternion], sing_tol: f64) -> Result<LeftSpectrumReport> {
    require_associated(t, l, frame)?;
    let point = left_point_spectrum(t, l, frame).iter().map(|p| [p.alpha, p.beta]).collect();
    let mut resolvent_samples = Vec::new();
    for q in samples {
        if left_membership(t, l, q, frame, sing_tol)? == Membership::Resolvent {
            resolvent_samples.push(ResolventSample { q: *q, resolvent: left_resolvent(t, l, q, frame, sing_tol)? });
        }
    }
    Ok(LeftSpectrumReport { point, residual: Vec::new(), continuous: Vec::new(), resolvent_samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_decompose;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn example_one() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![Quaternion::J, Quaternion::ZERO]]).unwrap()
    }

    fn example_two() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap()
    }

    #[test]
    fn membership_on_example_one() {
        let f = SliceFrame::default();
        let t = example_one();
        let pvm = spectral_decompose(&t, &f, None).unwrap();
        let h = FRAC_1_SQRT_2;
        let l1 = Quaternion::new(h, h, 0.0, 0.0);
        let l2 = Quaternion::new(-h, h, 0.0, 0.0);
        assert_eq!(left_membership(&t, &pvm.l, &l1, &f, TOL_SING).unwrap(), Membership::Point);
        assert_eq!(left_membership(&t, &pvm.l, &l2, &f, TOL_SING).unwrap(), Membership::Point);
        assert_eq!(left_membership(&t, &pvm.l, &l1.conj(), &f, TOL_SING).unwrap(), Membership::Resolvent);
        assert_eq!(left_membership(&t, &pvm.l, &Quaternion::real(7.0), &f, TOL_SING).unwrap(), Membership::Resolvent);
        let (det, _) = left_determinant(&t, &pvm.l, &l1.conj(), TOL_SING);
        assert!((det - 8.0).abs() < 1e-10);
        assert!(matches!(
            left_membership(&example_two(), &LeftScalarMultiplication::standard(2), &l1, &f, TOL_SING),
            Err(Error::NotAssociatedPair(_))
        ));
    }

    #[test]
    fn resolvents() {
        let f = SliceFrame::default();
        let s = example_two();
        let pvm = spectral_decompose(&s, &f, None).unwrap();
        let r = left_resolvent(&s, &pvm.l, &Quaternion::ZERO, &f, TOL_SING).unwrap();
        assert!(r.max_diff(&s) < 1e-12);
        assert!(calculus_resolvent(&pvm, &Quaternion::ZERO).unwrap().max_diff(&s) < 1e-12);
        let id = QMatrix::identity(2);
        let pid = spectral_decompose(&id, &f, None).unwrap();
        let r = left_resolvent(&id, &pid.l, &Quaternion::real(2.0), &f, TOL_SING).unwrap();
        assert!(r.max_diff(&QMatrix::scalar(2, Quaternion::real(-1.0))) < 1e-12);
        assert!(matches!(left_resolvent(&s, &pvm.l, &Quaternion::ONE, &f, TOL_SING), Err(Error::Singular { .. })));
    }

    #[test]
    fn eigenspaces() {
        let f = SliceFrame::default();
        let t = example_one();
        let pvm = spectral_decompose(&t, &f, None).unwrap();
        let c = eigenspace_compare(&t, &pvm.l, &pvm.support[0], &f, TOL_SING).unwrap();
        assert_eq!((c.right_dim_real, c.left_dim_real, c.right_subset_left, c.equality), (2, 4, true, false));
        let s = example_two();
        let pvm = spectral_decompose(&s, &f, None).unwrap();
        let c = eigenspace_compare(&s, &pvm.l, &pvm.support[0], &f, TOL_SING).unwrap();
        assert_eq!((c.right_dim_real, c.left_dim_real, c.equality), (4, 4, true));
        let not = SlicePoint::new(3.0, 0.0, Quaternion::I);
        assert!(matches!(eigenspace_compare(&s, &pvm.l, &not, &f, TOL_SING), Err(Error::NotEigenvalue { .. })));
    }

    #[test]
    fn spectra_agree_on_the_examples() {
        let f = SliceFrame::default();
        for t in [example_one(), example_two()] {
            let pvm = spectral_decompose(&t, &f, None).unwrap();
            let left = left_point_spectrum(&t, &pvm.l, &f);
            let sph = spherical_point_spectrum(&t, &f).unwrap();
            assert_eq!(left.len(), 2);
            assert!(hausdorff(&left, &sph) < 1e-10);
            assert!(hausdorff(&left, &pvm.support) < 1e-10);
        }
    }
}
