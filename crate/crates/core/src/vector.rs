//! Vectors of `H^n` with right scalar multiplication and the Hermitian
//! product `⟨u|v⟩ = Σ conj(u_s)·v_s`.

use crate::quaternion::Quaternion;

pub type QVector = Vec<Quaternion>;

pub fn zeros(n: usize) -> QVector {
    vec![Quaternion::ZERO; n]
}

/// `e_m · q`.
pub fn basis(n: usize, m: usize, q: Quaternion) -> QVector {
    let mut v = zeros(n);
    v[m] = q;
    v
}

pub fn inner(u: &[Quaternion], v: &[Quaternion]) -> Quaternion {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * *b).sum()
}

pub fn norm_sqr(u: &[Quaternion]) -> f64 {
    u.iter().map(Quaternion::norm_sqr).sum()
}

pub fn norm(u: &[Quaternion]) -> f64 {
    norm_sqr(u).sqrt()
}

/// `u·q`.
pub fn mul_right(u: &[Quaternion], q: Quaternion) -> QVector {
    u.iter().map(|a| *a * q).collect()
}

pub fn scale(u: &[Quaternion], r: f64) -> QVector {
    u.iter().map(|a| *a * r).collect()
}

pub fn add(u: &[Quaternion], v: &[Quaternion]) -> QVector {
    u.iter().zip(v).map(|(a, b)| *a + *b).collect()
}

pub fn sub(u: &[Quaternion], v: &[Quaternion]) -> QVector {
    u.iter().zip(v).map(|(a, b)| *a - *b).collect()
}

pub fn distance(u: &[Quaternion], v: &[Quaternion]) -> f64 {
    norm(&sub(u, v))
}

/// Removes from `v` its components along the orthonormal vectors `basis`.
pub fn orthogonalize(v: &mut QVector, basis: &[QVector]) {
    // two passes keep the result orthogonal to working precision
    for _ in 0..2 {
        for z in basis {
            let c = inner(z, v);
            for (vs, zs) in v.iter_mut().zip(z) {
                *vs -= *zs * c;
            }
        }
    }
}

/// Pivoted Gram–Schmidt over `H`: repeatedly picks the candidate with the
/// largest residual norm (earliest index on ties) until `limit` vectors are
/// found or every residual falls below `tol`.
///
/// When all candidates lie in a right `C_ι`-subspace such as `H^{Jι}_+`, the
/// result is an orthonormal `C_ι`-basis of their span.
pub fn orthonormal_span(candidates: &[QVector], limit: usize, tol: f64) -> Vec<QVector> {
    let mut residual: Vec<QVector> = candidates.to_vec();
    let mut out: Vec<QVector> = Vec::new();
    while out.len() < limit {
        let norms: Vec<f64> = residual.iter().map(|v| norm(v)).collect();
        let best = norms.iter().cloned().fold(0.0f64, f64::max);
        if best <= tol {
            break;
        }
        let pick = norms.iter().position(|&x| x >= best * (1.0 - 1e-9)).unwrap();
        let mut z = residual[pick].clone();
        orthogonalize(&mut z, &out);
        let nz = norm(&z);
        if nz <= tol {
            residual[pick] = zeros(z.len());
            continue;
        }
        let z = scale(&z, 1.0 / nz);
        for v in residual.iter_mut() {
            let c = inner(&z, v);
            for (vs, zs) in v.iter_mut().zip(&z) {
                *vs -= *zs * c;
            }
        }
        out.push(z);
    }
    out
}

/// Largest deviation of the Gram matrix of `vs` from the identity.
pub fn gram_residual(vs: &[QVector]) -> f64 {
    let mut worst = 0.0f64;
    for (a, u) in vs.iter().enumerate() {
        for (b, v) in vs.iter().enumerate() {
            let target = if a == b { Quaternion::ONE } else { Quaternion::ZERO };
            worst = worst.max((inner(u, v) - target).norm());
        }
    }
    worst
}
