//! Intertwining quaternionic projection-valued measures of normal matrices,
//! the functional calculus they induce, and the cyclic `L²` model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::left_mult::LeftScalarMultiplication;
use crate::qmatrix::{self, operator_norm, CMatrix, QMatrix, C64};
use crate::quaternion::{circularize, CircularSet, Quaternion, SliceFrame, SlicePoint};
use crate::slice::{complex_subspace_basis, decompose, extend_complex_operator, restrict_to_plus};
use crate::vector::{self, QVector};

/// Relative tolerance for recognising support points and vanishing values.
pub const TOL_SUPPORT: f64 = 1e-9;
/// Relative tolerance of the association conditions on `(T, L)`.
pub const TOL_ASSOCIATED: f64 = 1e-8;
/// Default eigenvalue clustering tolerance, relative to `‖T‖`.
pub const TOL_CLUSTER: f64 = 1e-8;

/// A finite iqPVM `(P, L)`: one orthogonal projector per support point of
/// `C_ι^+` and a left scalar multiplication commuting with all of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawIqPvm", try_from = "RawIqPvm")]
pub struct IqPvm {
    pub unit: Quaternion,
    pub support: Vec<SlicePoint>,
    pub projectors: Vec<QMatrix>,
    pub l: LeftScalarMultiplication,
}

#[derive(Serialize, Deserialize)]
struct RawIqPvm {
    unit: Quaternion,
    support: Vec<[f64; 2]>,
    projectors: Vec<QMatrix>,
    #[serde(rename = "L")]
    l: LeftScalarMultiplication,
}

impl From<IqPvm> for RawIqPvm {
    fn from(p: IqPvm) -> Self {
        RawIqPvm { unit: p.unit, support: p.support.iter().map(|s| [s.alpha, s.beta]).collect(), projectors: p.projectors, l: p.l }
    }
}

impl TryFrom<RawIqPvm> for IqPvm {
    type Error = Error;

    fn try_from(raw: RawIqPvm) -> Result<Self> {
        let frame = SliceFrame::new(raw.unit)?;
        if raw.support.len() != raw.projectors.len() {
            return Err(Error::DimensionMismatch { expected: raw.support.len(), found: raw.projectors.len() });
        }
        let n = raw.l.n();
        if let Some(p) = raw.projectors.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.n() });
        }
        if let Some(s) = raw.support.iter().find(|s| s[1] < 0.0) {
            return Err(Error::NumericalFailure(format!("support point {} + ι{} lies below the real axis", s[0], s[1])));
        }
        Ok(IqPvm {
            unit: frame.unit,
            support: raw.support.iter().map(|s| SlicePoint::new(s[0], s[1], frame.unit)).collect(),
            projectors: raw.projectors,
            l: raw.l,
        })
    }
}

/// Values of a function on the support, as `(point, value)` pairs.
pub type SupportMap = Vec<(SlicePoint, Quaternion)>;

impl IqPvm {
    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn frame(&self) -> SliceFrame {
        SliceFrame::new(self.unit).expect("unit validated on construction")
    }

    /// `L_λ` for a point of `C_ι`.
    pub fn left(&self, p: &SlicePoint) -> QMatrix {
        self.l.op(&p.to_quaternion())
    }

    pub fn tabulate(&self, f: impl Fn(&SlicePoint) -> Quaternion) -> SupportMap {
        self.support.iter().map(|p| (*p, f(p))).collect()
    }

    /// Index of the support point matching `p`.
    pub fn locate(&self, p: &SlicePoint) -> Option<usize> {
        self.support.iter().position(|s| s.distance(p) <= TOL_SUPPORT * (1.0 + s.to_complex().norm()))
    }

    pub fn rank(&self, k: usize) -> usize {
        (trace_re(&self.projectors[k]).round().max(0.0)) as usize
    }

    /// Largest violation of the iqPVM axioms: idempotence, self-adjointness,
    /// mutual orthogonality, total mass `I`, commutation with `L_i`, `L_j`.
    pub fn invariant_residual(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        let mut total = QMatrix::zeros(n);
        for (a, p) in self.projectors.iter().enumerate() {
            worst = worst.max((p * p).max_diff(p)).max(p.adjoint().max_diff(p));
            worst = worst.max(p.commutator_norm(self.l.li())).max(p.commutator_norm(self.l.lj()));
            for q in &self.projectors[a + 1..] {
                worst = worst.max((p * q).max_abs());
            }
            total = &total + p;
        }
        worst.max(total.max_diff(&QMatrix::identity(n)))
    }
}

fn trace_re(m: &QMatrix) -> f64 {
    (0..m.n()).map(|k| m[(k, k)].w).sum()
}

/// Single-linkage clusters of complex numbers, in order of first member.
fn cluster(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; values.len()];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for start in 0..values.len() {
        if label[start].is_some() {
            continue;
        }
        let id = clusters.len();
        let mut members = vec![start];
        label[start] = Some(id);
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for b in 0..values.len() {
                if label[b].is_none() && (values[a] - values[b]).norm() <= tol {
                    label[b] = Some(id);
                    members.push(b);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}

/// Fixes the `C_ι` phase of an eigenvector `u` of `H^{Jι}_+`. With
/// `q = a + b ȷ` its first non-negligible component, `u ↦ uγ` sends
/// `(a, b)` to `(aγ, bγ̄)`; the phase puts `b` on the positive `ι` axis, or
/// `a` on the positive real axis when `b = 0`.
fn canonical_phase(u: &[Quaternion], frame: &SliceFrame) -> QVector {
    let scale = vector::norm(u);
    let Some(q) = u.iter().find(|q| q.norm() > 1e-6 * scale) else {
        return u.to_vec();
    };
    let (a, b) = frame.split(q);
    let gamma = if b.norm() > 1e-8 * q.norm() { (C64::i() * b.norm() / b).conj() } else { a.conj() / a.norm() };
    vector::mul_right(u, frame.from_complex(gamma))
}

/// Decreasing `α`, then decreasing `β`; `α` values within `tol` tie.
pub(crate) fn support_order(a: &SlicePoint, b: &SlicePoint, tol: f64) -> std::cmp::Ordering {
    if (a.alpha - b.alpha).abs() > tol {
        b.alpha.total_cmp(&a.alpha)
    } else {
        b.beta.total_cmp(&a.beta)
    }
}

/// The iqPVM of a normal matrix, with `T = Σ_λ L_λ P_λ`.
///
/// `T` is reduced to the complex normal matrix `T_+` on `H^{Jι}_+` and
/// unitarily diagonalized there. Eigenvalues are grouped by single linkage at
/// `cluster_tol` (default `1e-8·‖T‖`), the projectors are the extensions of
/// the complex eigenprojectors, and `L` is induced by an eigenbasis with
/// fixed phases. Support points are sorted by decreasing `α`, then `β`.
pub fn spectral_decompose(t: &QMatrix, frame: &SliceFrame, cluster_tol: Option<f64>) -> Result<IqPvm> {
    let n = t.n();
    let sd = decompose(t, frame)?;
    let basis = complex_subspace_basis(&sd.j, frame)?;
    let tp = restrict_to_plus(t, &basis)?;
    let norm = operator_norm(t);
    let tol = cluster_tol.unwrap_or(TOL_CLUSTER * norm.max(f64::MIN_POSITIVE));
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::NumericalFailure(format!("cluster tolerance {tol} is not positive")));
    }

    let (values, q) = qmatrix::normal_eigen(&tp, 1e-9 * norm);
    let groups = cluster(&values, tol);
    for (a, ga) in groups.iter().enumerate() {
        for gb in &groups[a + 1..] {
            for &x in ga {
                for &y in gb {
                    if (values[x] - values[y]).norm() <= 10.0 * tol {
                        return Err(Error::ClusterAmbiguity {
                            first: [values[x].re, values[x].im],
                            second: [values[y].re, values[y].im],
                        });
                    }
                }
            }
        }
    }

    struct Piece {
        point: SlicePoint,
        projector: QMatrix,
        vectors: Vec<QVector>,
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(groups.len());
    for members in &groups {
        let k = members.len();
        let mean = members.iter().map(|&m| values[m]).sum::<C64>() / k as f64;
        let point = SlicePoint::new(mean.re, mean.im.max(0.0), frame.unit);
        let cols = CMatrix::from_fn(n, k, |row, c| q[(row, members[c])]);
        let projector = extend_complex_operator(&(&cols * cols.adjoint()), &basis, &frame.aux)?;
        if projector.frobenius_norm() < 0.5 {
            continue;
        }
        let cands: Vec<QVector> = basis.vectors.iter().map(|z| projector.apply(z)).collect();
        let vectors: Vec<QVector> =
            vector::orthonormal_span(&cands, k, 1e-6).iter().map(|u| canonical_phase(u, frame)).collect();
        if vectors.len() != k {
            return Err(Error::NumericalFailure(format!("eigenspace of {} + ι{} has no basis of size {k}", point.alpha, point.beta)));
        }
        pieces.push(Piece { point, projector, vectors });
    }
    pieces.sort_by(|x, y| support_order(&x.point, &y.point, tol));

    let eigenbasis: Vec<QVector> = pieces.iter().flat_map(|p| p.vectors.iter().cloned()).collect();
    let l = LeftScalarMultiplication::from_basis(&eigenbasis, 1e-8)?;
    Ok(IqPvm {
        unit: frame.unit,
        support: pieces.iter().map(|p| p.point).collect(),
        projectors: pieces.into_iter().map(|p| p.projector).collect(),
        l,
    })
}

/// `Σ_λ L_λ P_λ`.
pub fn reconstruct(pvm: &IqPvm) -> QMatrix {
    pvm.support
        .iter()
        .zip(&pvm.projectors)
        .fold(QMatrix::zeros(pvm.n()), |acc, (p, proj)| &acc + &(&pvm.left(p) * proj))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumClassification {
    pub point: Vec<SlicePoint>,
    /// Always empty for normal matrices.
    pub residual: Vec<SlicePoint>,
    /// Always empty in finite dimension.
    pub continuous: Vec<SlicePoint>,
    /// The spherical spectrum, the circularization of `point`.
    pub spherical: CircularSet,
}

pub fn classify_spectrum(pvm: &IqPvm) -> SpectrumClassification {
    let point: Vec<SlicePoint> = pvm
        .support
        .iter()
        .zip(&pvm.projectors)
        .filter(|(_, p)| p.frobenius_norm() > 0.5)
        .map(|(s, _)| *s)
        .collect();
    SpectrumClassification { spherical: circularize(&point), point, residual: Vec::new(), continuous: Vec::new() }
}

/// `Δ_q(T) = T² − 2Re(q)·T + |q|²·I`.
pub fn delta(t: &QMatrix, q: &Quaternion) -> QMatrix {
    let n = t.n();
    &(&(t * t) - &t.scale(2.0 * q.re())) + &QMatrix::scalar(n, Quaternion::real(q.norm_sqr()))
}

fn values_on_support(phi: &[(SlicePoint, Quaternion)], pvm: &IqPvm) -> Result<Vec<Quaternion>> {
    pvm.support
        .iter()
        .map(|s| {
            phi.iter()
                .find(|(p, _)| p.distance(s) <= TOL_SUPPORT * (1.0 + s.to_complex().norm()))
                .map(|(_, v)| *v)
                .ok_or(Error::MissingSupportPoint { alpha: s.alpha, beta: s.beta })
        })
        .collect()
}

/// `∫ φ dP = Σ_λ L_{φ(λ)} P_λ`.
pub fn integrate(phi: &[(SlicePoint, Quaternion)], pvm: &IqPvm) -> Result<QMatrix> {
    let values = values_on_support(phi, pvm)?;
    Ok(values
        .iter()
        .zip(&pvm.projectors)
        .fold(QMatrix::zeros(pvm.n()), |acc, (v, proj)| &acc + &(&pvm.l.op(v) * proj)))
}

/// `(∫ φ dP)⁻¹ = ∫ φ⁻¹ dP`.
pub fn invert_via_calculus(phi: &[(SlicePoint, Quaternion)], pvm: &IqPvm) -> Result<QMatrix> {
    let values = values_on_support(phi, pvm)?;
    let scale = values.iter().map(Quaternion::norm).fold(0.0, f64::max);
    let mut inverted = Vec::with_capacity(values.len());
    for (s, v) in pvm.support.iter().zip(&values) {
        if v.norm() <= 1e-14 * scale.max(1.0) {
            return Err(Error::NotInjective { alpha: s.alpha, beta: s.beta });
        }
        inverted.push((*s, v.inverse()?));
    }
    integrate(&inverted, pvm)
}

/// `max |φ(λ)|` over the support points with nonzero projector.
pub fn essential_sup(phi: &[(SlicePoint, Quaternion)], pvm: &IqPvm) -> Result<f64> {
    let values = values_on_support(phi, pvm)?;
    Ok(values
        .iter()
        .zip(&pvm.projectors)
        .filter(|(_, p)| p.frobenius_norm() > 0.5)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max))
}

/// `μ_u({λ}) = ⟨u|P_λ u⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarSpectralMeasure {
    pub support: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl ScalarSpectralMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `ν_{u,v}({λ}) = ⟨u|P_λ v⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuaternionSpectralMeasure {
    pub support: Vec<[f64; 2]>,
    pub values: Vec<Quaternion>,
}

fn check_len(u: &[Quaternion], n: usize) -> Result<()> {
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    Ok(())
}

fn support_arrays(pvm: &IqPvm) -> Vec<[f64; 2]> {
    pvm.support.iter().map(|s| [s.alpha, s.beta]).collect()
}

pub fn scalar_measure(u: &[Quaternion], pvm: &IqPvm) -> Result<ScalarSpectralMeasure> {
    check_len(u, pvm.n())?;
    let weights = pvm.projectors.iter().map(|p| vector::inner(u, &p.apply(u)).w.max(0.0)).collect();
    Ok(ScalarSpectralMeasure { support: support_arrays(pvm), weights })
}

pub fn quaternion_measure(u: &[Quaternion], v: &[Quaternion], pvm: &IqPvm) -> Result<QuaternionSpectralMeasure> {
    check_len(u, pvm.n())?;
    check_len(v, pvm.n())?;
    let values = pvm.projectors.iter().map(|p| vector::inner(u, &p.apply(v))).collect();
    Ok(QuaternionSpectralMeasure { support: support_arrays(pvm), values })
}

/// Residuals of `L_ι T = T L_ι`, `L_ȷ T = T* L_ȷ` and `−L_ι(T − T*) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AssociationResiduals {
    pub commutes: f64,
    pub conjugates: f64,
    pub positivity: f64,
}

impl AssociationResiduals {
    pub fn max(&self) -> f64 {
        self.commutes.max(self.conjugates).max(self.positivity)
    }
}

pub fn association_residuals(t: &QMatrix, l: &LeftScalarMultiplication, frame: &SliceFrame) -> AssociationResiduals {
    let li = l.op(&frame.unit);
    let lj = l.op(&frame.aux);
    let tstar = t.adjoint();
    let m = -(&li * &(t - &tstar));
    let asym = m.max_diff(&m.adjoint());
    let min = qmatrix::hermitian_eigen(&qmatrix::chi(&m).0).0.first().cloned().unwrap_or(0.0);
    AssociationResiduals {
        commutes: (&li * t).max_diff(&(t * &li)),
        conjugates: (&lj * t).max_diff(&(&tstar * &lj)),
        positivity: asym.max(-min),
    }
}

/// Whether `(T, L)` satisfies the three conditions making `L` the left
/// multiplication of the iqPVM of `T`.
pub fn verify_propl_conditions(t: &QMatrix, l: &LeftScalarMultiplication, frame: &SliceFrame) -> bool {
    t.n() == l.n() && association_residuals(t, l, frame).max() <= TOL_ASSOCIATED * t.frobenius_norm().max(1.0)
}

/// `H^n = ⊕ H_α`, each block generated by one vector `z_α` with
/// `L_q z_α = z_α q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicBlock {
    pub generator: QVector,
    pub measure: ScalarSpectralMeasure,
    /// Support indices with nonzero mass, in order.
    pub points: Vec<usize>,
    /// `P_λ z_α / sqrt(μ_{z_α}({λ}))` for each entry of `points`; the image
    /// of the indicator of `{λ}` under the isometry.
    pub vectors: Vec<QVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicModel {
    pub blocks: Vec<CyclicBlock>,
}

impl CyclicModel {
    /// The assembled isometry, block by block.
    pub fn isometry(&self) -> QMatrix {
        let cols: Vec<QVector> = self.blocks.iter().flat_map(|b| b.vectors.iter().cloned()).collect();
        QMatrix::from_columns(&cols)
    }

    /// Support index of each column of the isometry.
    pub fn column_points(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.points.iter().cloned()).collect()
    }

    /// `U* M U`.
    pub fn conjugate(&self, m: &QMatrix) -> QMatrix {
        let u = self.isometry();
        &(&u.adjoint() * m) * &u
    }

    /// Multiplication by `φ` in the model: `diag(φ(λ_c))` over the columns.
    pub fn multiplier(&self, values: &[Quaternion]) -> QMatrix {
        let d: Vec<Quaternion> = self.column_points().iter().map(|&k| values[k]).collect();
        QMatrix::diagonal(&d)
    }
}

/// Decomposes `H^n` into cyclic subspaces of the iqPVM. Generators are drawn
/// one support point at a time from the vectors fixed by `L`, so every block
/// carries a point mass.
pub fn cyclic_l2_model(pvm: &IqPvm) -> Result<CyclicModel> {
    let n = pvm.n();
    let mut complement = QMatrix::identity(n);
    let mut blocks = Vec::new();
    for proj in &pvm.projectors {
        loop {
            let within = proj * &complement;
            if within.frobenius_norm() < 0.5 {
                break;
            }
            let z = pvm
                .l
                .fixed_vector(&within, 1e-6)
                .ok_or_else(|| Error::NumericalFailure("no L-fixed vector in a nonzero spectral subspace".into()))?;
            let measure = scalar_measure(&z, pvm)?;
            let mut points = Vec::new();
            let mut vectors = Vec::new();
            for (k, p) in pvm.projectors.iter().enumerate() {
                let mass = measure.weights[k];
                if mass > 1e-12 {
                    let v = vector::scale(&p.apply(&z), 1.0 / mass.sqrt());
                    complement = &complement - &QMatrix::outer(&v, &v);
                    points.push(k);
                    vectors.push(v);
                }
            }
            blocks.push(CyclicBlock { generator: z, measure, points, vectors });
        }
    }
    Ok(CyclicModel { blocks })
}

/// `L'_q = Σ_v v γ̄ q γ ⟨v|·⟩` over the model's vectors, one `γ ∈ C_ι` of
/// modulus one per block.
pub fn twist_left_mult(pvm: &IqPvm, model: &CyclicModel, gammas: &[C64]) -> Result<LeftScalarMultiplication> {
    if gammas.len() != model.blocks.len() {
        return Err(Error::DimensionMismatch { expected: model.blocks.len(), found: gammas.len() });
    }
    let frame = pvm.frame();
    let mut vectors = Vec::with_capacity(pvm.n());
    let mut phases = Vec::with_capacity(pvm.n());
    for (block, g) in model.blocks.iter().zip(gammas) {
        let modulus = g.norm();
        if (modulus - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnimodular { modulus });
        }
        for v in &block.vectors {
            vectors.push(v.clone());
            phases.push(frame.from_complex(*g));
        }
    }
    Ok(LeftScalarMultiplication::from_basis_with_phases(&vectors, &phases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn example_one() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![Quaternion::J, Quaternion::ZERO]]).unwrap()
    }

    fn example_two() -> QMatrix {
        QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap()
    }

    fn frame() -> SliceFrame {
        SliceFrame::default()
    }

    #[test]
    fn example_one_projectors() {
        let pvm = spectral_decompose(&example_one(), &frame(), None).unwrap();
        let h = FRAC_1_SQRT_2;
        assert_eq!(pvm.support.len(), 2);
        assert!((pvm.support[0].alpha - h).abs() < 1e-12 && (pvm.support[0].beta - h).abs() < 1e-12);
        assert!((pvm.support[1].alpha + h).abs() < 1e-12 && (pvm.support[1].beta - h).abs() < 1e-12);
        let s = 0.5 * h;
        let p1 = QMatrix::from_rows(vec![vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, s, -s, 0.0)], vec![q(0.0, -s, s, 0.0), q(0.5, 0.0, 0.0, 0.0)]]).unwrap();
        let p2 = QMatrix::from_rows(vec![vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, -s, s, 0.0)], vec![q(0.0, s, -s, 0.0), q(0.5, 0.0, 0.0, 0.0)]]).unwrap();
        assert!(pvm.projectors[0].max_diff(&p1) < 1e-12);
        assert!(pvm.projectors[1].max_diff(&p2) < 1e-12);
        assert!(reconstruct(&pvm).max_diff(&example_one()) < 1e-12);
        assert!(pvm.invariant_residual() < 1e-12);
        assert!(verify_propl_conditions(&example_one(), &pvm.l, &frame()));
    }

    #[test]
    fn example_two_projectors() {
        let s = example_two();
        let pvm = spectral_decompose(&s, &frame(), None).unwrap();
        assert_eq!(pvm.support.iter().map(|p| (p.alpha, p.beta)).collect::<Vec<_>>().len(), 2);
        assert!((pvm.support[0].alpha - 1.0).abs() < 1e-12 && pvm.support[0].beta == 0.0);
        assert!((pvm.support[1].alpha + 1.0).abs() < 1e-12 && pvm.support[1].beta == 0.0);
        let half = Quaternion::real(0.5);
        let p1 = QMatrix::from_rows(vec![vec![half, Quaternion::I * 0.5], vec![-Quaternion::I * 0.5, half]]).unwrap();
        assert!(pvm.projectors[0].max_diff(&p1) < 1e-12);
        assert!((&pvm.projectors[0] - &pvm.projectors[1]).max_diff(&s) < 1e-12);
        assert!(!verify_propl_conditions(&s, &LeftScalarMultiplication::standard(2), &frame()));
        assert!(verify_propl_conditions(&s, &pvm.l, &frame()));
        let c = classify_spectrum(&pvm);
        assert_eq!(c.point.len(), 2);
        assert!(c.residual.is_empty() && c.continuous.is_empty());
    }

    #[test]
    fn real_diagonal_has_one_point() {
        let t = QMatrix::scalar(3, Quaternion::real(0.7));
        let pvm = spectral_decompose(&t, &frame(), None).unwrap();
        assert_eq!(pvm.support.len(), 1);
        assert!(pvm.projectors[0].max_diff(&QMatrix::identity(3)) < 1e-12);
        let zero = spectral_decompose(&QMatrix::zeros(2), &frame(), None).unwrap();
        assert_eq!(zero.support.len(), 1);
        assert_eq!((zero.support[0].alpha, zero.support[0].beta), (0.0, 0.0));
        assert!(reconstruct(&zero).max_abs() < 1e-15);
    }

    #[test]
    fn calculus_examples() {
        let pvm = spectral_decompose(&example_two(), &frame(), None).unwrap();
        let id = pvm.tabulate(|p| p.to_quaternion());
        assert!(integrate(&id, &pvm).unwrap().max_diff(&example_two()) < 1e-12);
        let ind = pvm.tabulate(|p| Quaternion::real(if p.alpha > 0.0 { 1.0 } else { 0.0 }));
        assert!(integrate(&ind, &pvm).unwrap().max_diff(&pvm.projectors[0]) < 1e-12);
        assert!(invert_via_calculus(&id, &pvm).unwrap().max_diff(&example_two()) < 1e-12);
        let two = pvm.tabulate(|_| Quaternion::real(2.0));
        assert!(invert_via_calculus(&two, &pvm).unwrap().max_diff(&QMatrix::scalar(2, Quaternion::real(0.5))) < 1e-12);
        assert!(matches!(invert_via_calculus(&ind, &pvm), Err(Error::NotInjective { .. })));
        assert!(matches!(integrate(&id[..1], &pvm), Err(Error::MissingSupportPoint { .. })));

        let pvm = spectral_decompose(&example_one(), &frame(), None).unwrap();
        let conj = pvm.tabulate(|p| p.to_quaternion().conj());
        assert!(integrate(&conj, &pvm).unwrap().max_diff(&example_one().adjoint()) < 1e-12);
    }

    #[test]
    fn measures_of_example_two() {
        let pvm = spectral_decompose(&example_two(), &frame(), None).unwrap();
        let u = vector::basis(2, 0, Quaternion::ONE);
        let mu = scalar_measure(&u, &pvm).unwrap();
        assert!((mu.weights[0] - 0.5).abs() < 1e-12 && (mu.weights[1] - 0.5).abs() < 1e-12);
        let nu = quaternion_measure(&u, &u, &pvm).unwrap();
        assert!((nu.values[0] - Quaternion::real(0.5)).norm() < 1e-12);
        assert!(matches!(scalar_measure(&[Quaternion::ONE], &pvm), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn delta_examples() {
        let t = example_one();
        let l1 = q(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
        let d = delta(&t, &l1);
        let r2 = std::f64::consts::SQRT_2;
        let expected = QMatrix::from_rows(vec![vec![q(1.0, 0.0, 0.0, 1.0), q(0.0, -r2, 0.0, 0.0)], vec![q(0.0, 0.0, -r2, 0.0), q(1.0, 0.0, 0.0, -1.0)]]).unwrap();
        assert!(d.max_diff(&expected) < 1e-12);
        assert_eq!(qmatrix::kernel_real_dim(&d, 1e-8), 4);
        assert!(delta(&QMatrix::identity(2), &Quaternion::ONE).max_abs() < 1e-15);
    }

    #[test]
    fn cyclic_model_of_example_two() {
        let pvm = spectral_decompose(&example_two(), &frame(), None).unwrap();
        let model = cyclic_l2_model(&pvm).unwrap();
        assert_eq!(model.blocks.len(), 2);
        for (k, b) in model.blocks.iter().enumerate() {
            assert_eq!(b.points, vec![k]);
            assert!((b.measure.total() - 1.0).abs() < 1e-12);
        }
        let u = model.isometry();
        assert!((&u.adjoint() * &u).max_diff(&QMatrix::identity(2)) < 1e-12);
        for unit in [Quaternion::I, Quaternion::J, Quaternion::K] {
            assert!(model.conjugate(&pvm.l.op(&unit)).max_diff(&QMatrix::scalar(2, unit)) < 1e-12);
        }
    }

    #[test]
    fn twisting_example_one() {
        let t = example_one();
        let pvm = spectral_decompose(&t, &frame(), None).unwrap();
        let model = cyclic_l2_model(&pvm).unwrap();
        let same = twist_left_mult(&pvm, &model, &[C64::new(1.0, 0.0); 2]).unwrap();
        assert!(same.max_diff(&pvm.l) < 1e-12);
        let twisted = twist_left_mult(&pvm, &model, &[C64::new(0.0, 1.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(twisted.li().max_diff(pvm.l.li()) < 1e-12);
        assert!(twisted.lj().max_diff(pvm.l.lj()) > 0.1);
        assert!(verify_propl_conditions(&t, &twisted, &frame()));
        let c = q(1.0, 3.0, 0.0, 0.0);
        assert!(twisted.op(&c).max_diff(&pvm.l.op(&c)) < 1e-12);
        assert!(matches!(twist_left_mult(&pvm, &model, &[C64::new(2.0, 0.0); 2]), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn json_layout() {
        let pvm = spectral_decompose(&example_two(), &frame(), None).unwrap();
        let v: serde_json::Value = serde_json::to_value(&pvm).unwrap();
        assert_eq!(v["unit"], serde_json::json!([0.0, 1.0, 0.0, 0.0]));
        assert_eq!(v["support"].as_array().unwrap().len(), 2);
        assert!(v["L"]["Li"].is_object());
        let back: IqPvm = serde_json::from_value(v).unwrap();
        assert_eq!(back, pvm);
    }

    #[test]
    fn clustering() {
        let v = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1e-12, 0.0)];
        assert_eq!(cluster(&v, 1e-9), vec![vec![0, 2], vec![1]]);
    }
}
