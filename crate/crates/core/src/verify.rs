//! Seeded randomized checks of the library's invariants.
//!
//! Every trial draws its data from its own generator seeded with
//! [`trial_seed`], so results do not depend on scheduling. With the
//! `parallel` feature trials run on the rayon pool.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::left_mult::{is_left_scalar_multiplication, LeftScalarMultiplication};
use crate::left_spectrum::{self, calculus_resolvent, hausdorff, left_membership, left_point_spectrum, spherical_point_spectrum, Membership};
use crate::qmatrix::{self, abs_op, kernel_projector_at, operator_norm, projector_distance, CMatrix, QMatrix, C64};
use crate::quaternion::{Quaternion, SliceFrame};
use crate::random::{trial_seed, QRng};
use crate::slice::{complex_subspace_basis, decompose, extend_complex_operator, restrict_to_plus};
use crate::spectral::{
    association_residuals, cyclic_l2_model, essential_sup, integrate, reconstruct, spectral_decompose, twist_left_mult, IqPvm,
};
use crate::transform::{bounded_transform, decompose_via_transform, inverse_transform};
use crate::vector;

/// Runs `f` once per trial with a generator seeded by `trial_seed(seed, k)`,
/// returning results in trial order.
pub fn run_trials<R: Send>(seed: u64, trials: usize, f: impl Fn(usize, &mut QRng) -> R + Sync) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        run_trials_parallel(seed, trials, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_sequential(seed, trials, f)
    }
}

pub fn run_trials_sequential<R>(seed: u64, trials: usize, f: impl Fn(usize, &mut QRng) -> R) -> Vec<R> {
    (0..trials).map(|k| f(k, &mut QRng::seeded(trial_seed(seed, k as u64)))).collect()
}

#[cfg(feature = "parallel")]
pub fn run_trials_parallel<R: Send>(seed: u64, trials: usize, f: impl Fn(usize, &mut QRng) -> R + Sync) -> Vec<R> {
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(|k| f(k, &mut QRng::seeded(trial_seed(seed, k as u64)))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Slice,
    Spectral,
    Calculus,
    LeftSpectrum,
    LeftMult,
    Transform,
    Cyclic,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Slice, Suite::Spectral, Suite::Calculus, Suite::LeftSpectrum, Suite::LeftMult, Suite::Transform, Suite::Cyclic];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Slice => "slice",
            Suite::Spectral => "spectral",
            Suite::Calculus => "calculus",
            Suite::LeftSpectrum => "left-spectrum",
            Suite::LeftMult => "left-mult",
            Suite::Transform => "transform",
            Suite::Cyclic => "cyclic",
        }
    }

    fn tolerances(&self) -> &'static [(&'static str, f64)] {
        match self {
            Suite::Slice => &[
                ("reconstruction", 1e-9),
                ("commutation", 1e-9),
                ("uniqueness", 1e-9),
                ("extension_norm", 1e-10),
                ("extension_adjoint", 1e-10),
                ("extension_product", 1e-10),
                ("extension_positive", 1e-10),
                ("restrict_extend", 1e-10),
                ("extend_restrict", 1e-10),
            ],
            Suite::Spectral => &[
                ("reconstruction", 1e-8),
                ("pvm_axioms", 1e-9),
                ("association", 1e-8),
                ("real_range", 1e-8),
                ("delta_kernel", 0.0),
            ],
            Suite::Calculus => &[
                ("additivity", 1e-9),
                ("multiplicativity", 1e-9),
                ("adjoint", 1e-9),
                ("modulus", 1e-9),
                ("norm", 1e-9),
                ("kernel", 1e-9),
                ("constant", 1e-9),
            ],
            Suite::LeftSpectrum => &[
                ("left_equals_spherical", 1e-7),
                ("left_equals_support", 1e-7),
                ("membership", 0.0),
                ("resolvent", 1e-8),
                ("eigenvector_promotion", 1e-8),
                ("star_conjugation", 1e-9),
            ],
            Suite::LeftMult => &[("basis_roundtrip", 1e-9), ("rejects_perturbed", 0.0)],
            Suite::Transform => &[
                ("roundtrip", 1e-8),
                ("pushforward_support", 1e-8),
                ("pushforward_projectors", 1e-8),
                ("adjoint", 1e-10),
                ("contraction", 1e-10),
            ],
            Suite::Cyclic => &[
                ("isometry", 1e-8),
                ("calculus_conjugation", 1e-8),
                ("left_conjugation", 1e-8),
                ("twist_association", 1e-8),
                ("twist_agreement", 1e-9),
            ],
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub frame: SliceFrame,
    pub cluster_tol: Option<f64>,
    pub sing_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 42, trials: 50, max_dim: 6, frame: SliceFrame::default(), cluster_tol: None, sing_tol: qmatrix::TOL_SING }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub checks: Vec<InvariantCheck>,
    /// First error raised by a trial, with its index.
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type Residuals = Vec<(&'static str, f64)>;

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<SuiteReport> {
    if config.trials == 0 {
        return Err(Error::NumericalFailure("trial count must be at least 1".into()));
    }
    if config.max_dim < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: config.max_dim });
    }
    let outcomes = run_trials(config.seed, config.trials, |_, rng| match suite {
        Suite::Slice => slice_trial(rng, config),
        Suite::Spectral => spectral_trial(rng, config),
        Suite::Calculus => calculus_trial(rng, config),
        Suite::LeftSpectrum => left_spectrum_trial(rng, config),
        Suite::LeftMult => left_mult_trial(rng, config),
        Suite::Transform => transform_trial(rng, config),
        Suite::Cyclic => cyclic_trial(rng, config),
    });
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    let mut error = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(residuals) => {
                for (name, r) in residuals {
                    let w = worst.entry(name).or_insert(0.0);
                    // NaN must fail the check
                    *w = if r.is_nan() || w.is_nan() { f64::NAN } else { w.max(r) };
                }
            }
            Err(e) if error.is_none() => error = Some(format!("trial {k}: {e}")),
            Err(_) => {}
        }
    }
    let checks = suite
        .tolerances()
        .iter()
        .map(|(name, tol)| {
            let r = worst.get(name).cloned().unwrap_or(0.0);
            InvariantCheck { name: name.to_string(), max_residual: r, tolerance: *tol, passed: r <= *tol }
        })
        .collect();
    Ok(SuiteReport { suite, trials: config.trials, checks, error })
}

pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|s| run_suite(*s, config)).collect()
}

/// Random normal matrix; the first draw of every matrix-based trial, so
/// suites with the same seed see the same matrices.
pub fn random_normal(rng: &mut QRng, config: &VerifyConfig) -> QMatrix {
    let n = rng.index(2, config.max_dim);
    rng.normal(n, &config.frame)
}

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.max(1.0)
}

fn slice_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let frame = config.frame;
    let norm = operator_norm(&t);
    let d = decompose(&t, &frame)?;
    let other = decompose(&t, &SliceFrame::new(frame.aux)?)?;
    let range = &QMatrix::identity(n) - &d.kernel;
    let uniqueness = d
        .a
        .max_diff(&other.a)
        .max(d.b.max_diff(&other.b))
        .max((&d.j * &range).max_diff(&(&other.j * &range)));

    let basis = complex_subspace_basis(&d.j, &frame)?;
    let m = rng.complex_matrix(n);
    let m2 = rng.complex_matrix(n);
    let ext = |x: &CMatrix| extend_complex_operator(x, &basis, &frame.aux);
    let em = ext(&m)?;
    let cnorm = m.clone().singular_values().max();
    let positive = ext(&(&m * m.adjoint()))?;
    let min_eig = qmatrix::hermitian_eigen(&qmatrix::chi(&positive).0).0[0];
    let back = restrict_to_plus(&em, &basis)?;
    let tp = restrict_to_plus(&t, &basis)?;

    Ok(vec![
        ("reconstruction", rel(d.reconstruct().max_diff(&t), norm)),
        ("commutation", rel(d.structure_residual(), norm * norm)),
        ("uniqueness", rel(uniqueness, norm)),
        ("extension_norm", rel((operator_norm(&em) - cnorm).abs(), cnorm)),
        ("extension_adjoint", ext(&m.adjoint())?.max_diff(&em.adjoint())),
        ("extension_product", rel(ext(&(&m * &m2))?.max_diff(&(&em * &ext(&m2)?)), cnorm * cnorm)),
        ("extension_positive", (-min_eig).max(0.0)),
        ("restrict_extend", (back - &m).iter().map(|z| z.norm()).fold(0.0, f64::max)),
        ("extend_restrict", rel(ext(&tp)?.max_diff(&t), norm)),
    ])
}

fn spectral_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let norm = operator_norm(&t);
    let pvm = spectral_decompose(&t, &config.frame, config.cluster_tol)?;
    let real_tol = 1e-8 * norm.max(1.0);
    let real_part = pvm
        .support
        .iter()
        .zip(&pvm.projectors)
        .filter(|(s, _)| s.beta <= real_tol)
        .fold(QMatrix::zeros(n), |acc, (_, p)| &acc + p);
    let ker = kernel_projector_at(&(&t - &t.adjoint()), 1e-8 * norm.max(1.0))?;
    let mut delta_mismatch = 0.0f64;
    for (k, s) in pvm.support.iter().enumerate() {
        let dim = qmatrix::kernel_real_dim_at(&crate::spectral::delta(&t, &s.to_quaternion()), 1e-8 * norm.max(1.0).powi(2));
        if dim != 4 * pvm.rank(k) {
            delta_mismatch = 1.0;
        }
    }
    Ok(vec![
        ("reconstruction", rel(operator_norm(&(&t - &reconstruct(&pvm))), norm)),
        ("pvm_axioms", pvm.invariant_residual()),
        ("association", rel(association_residuals(&t, &pvm.l, &config.frame).max(), norm)),
        ("real_range", projector_distance(&real_part, &ker)),
        ("delta_kernel", delta_mismatch),
    ])
}

/// Random pvm and two random functions on its support.
fn calculus_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let pvm = spectral_decompose(&t, &config.frame, config.cluster_tol)?;
    let m = pvm.support.len();
    let fv: Vec<Quaternion> = (0..m).map(|_| rng.quaternion()).collect();
    let gv: Vec<Quaternion> = (0..m).map(|_| rng.quaternion()).collect();
    let zeros: Vec<bool> = (0..m).map(|_| rng.chance(0.3)).collect();
    let c = rng.quaternion();
    let table = |v: &dyn Fn(usize) -> Quaternion| -> Vec<_> { pvm.support.iter().enumerate().map(|(k, s)| (*s, v(k))).collect() };
    let phi = table(&|k| fv[k]);
    let psi = table(&|k| gv[k]);
    let ip = integrate(&phi, &pvm)?;
    let iq = integrate(&psi, &pvm)?;
    let vanishing = table(&|k| if zeros[k] { Quaternion::ZERO } else { fv[k] });
    let zero_part = pvm
        .projectors
        .iter()
        .zip(&zeros)
        .filter(|(_, z)| **z)
        .fold(QMatrix::zeros(n), |acc, (p, _)| &acc + p);
    let kernel = kernel_projector_at(&integrate(&vanishing, &pvm)?, 1e-8)?;
    Ok(vec![
        ("additivity", integrate(&table(&|k| fv[k] + gv[k]), &pvm)?.max_diff(&(&ip + &iq))),
        ("multiplicativity", integrate(&table(&|k| fv[k] * gv[k]), &pvm)?.max_diff(&(&ip * &iq))),
        ("adjoint", integrate(&table(&|k| fv[k].conj()), &pvm)?.max_diff(&ip.adjoint())),
        ("modulus", integrate(&table(&|k| Quaternion::real(fv[k].norm())), &pvm)?.max_diff(&abs_op(&ip)?)),
        ("norm", (operator_norm(&ip) - essential_sup(&phi, &pvm)?).abs()),
        ("kernel", projector_distance(&kernel, &zero_part)),
        ("constant", integrate(&table(&|_| c), &pvm)?.max_diff(&pvm.l.op(&c))),
    ])
}

fn left_spectrum_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let frame = config.frame;
    let norm = operator_norm(&t);
    let pvm = spectral_decompose(&t, &frame, config.cluster_tol)?;
    let left = left_point_spectrum(&t, &pvm.l, &frame);
    let sph = spherical_point_spectrum(&t, &frame)?;
    let mut membership = 0.0f64;
    for p in &left {
        if left_membership(&t, &pvm.l, &p.to_quaternion(), &frame, config.sing_tol)? != Membership::Point {
            membership = 1.0;
        }
    }
    let mut resolvent = 0.0f64;
    let mut sampled = 0;
    while sampled < 5 {
        let q = rng.quaternion() * 2.5;
        if left_membership(&t, &pvm.l, &q, &frame, config.sing_tol)? != Membership::Resolvent {
            continue;
        }
        let direct = left_spectrum::left_resolvent(&t, &pvm.l, &q, &frame, config.sing_tol)?;
        let calc = calculus_resolvent(&pvm, &q)?;
        resolvent = resolvent.max(rel(operator_norm(&(&direct - &calc)), operator_norm(&direct)));
        sampled += 1;
    }
    let mut promotion = 0.0f64;
    for s in &pvm.support {
        let q = s.to_quaternion();
        let lq = pvm.l.op(&q);
        for u in qmatrix::real_kernel(n, |u| vector::sub(&t.apply(u), &vector::mul_right(u, q)), 1e-8) {
            promotion = promotion.max(vector::distance(&t.apply(&u), &lq.apply(&u)) / vector::norm(&u));
        }
    }
    let u = pvm.l.op(&-frame.aux);
    let star = (&(&u.adjoint() * &t) * &u).max_diff(&t.adjoint()).max((&u.adjoint() * &u).max_diff(&QMatrix::identity(n)));
    Ok(vec![
        ("left_equals_spherical", hausdorff(&left, &sph)),
        ("left_equals_support", hausdorff(&left, &pvm.support)),
        ("membership", membership),
        ("resolvent", resolvent),
        ("eigenvector_promotion", rel(promotion, norm)),
        ("star_conjugation", rel(star, norm)),
    ])
}

fn left_mult_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let n = rng.index(2, config.max_dim);
    let l = LeftScalarMultiplication::from_basis(&rng.orthonormal_basis(n), 1e-9)?;
    let back = LeftScalarMultiplication::from_basis(&l.basis(1e-9)?, 1e-9)?;
    let mut perturbed_li = l.li().clone();
    let r = rng.index(0, n - 1);
    let c = rng.index(0, n - 1);
    perturbed_li[(r, c)] += rng.unit_quaternion() * 1e-3;
    let accepted = is_left_scalar_multiplication(&perturbed_li, l.lj(), qmatrix::TOL_SING);
    Ok(vec![("basis_roundtrip", back.max_diff(&l)), ("rejects_perturbed", if accepted { 1.0 } else { 0.0 })])
}

fn matching(a: &IqPvm, b: &IqPvm) -> (f64, f64) {
    if a.support.len() != b.support.len() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let mut support = 0.0f64;
    let mut proj = 0.0f64;
    for k in 0..a.support.len() {
        support = support.max(a.support[k].distance(&b.support[k]));
        proj = proj.max(a.projectors[k].max_diff(&b.projectors[k]));
    }
    (support, proj)
}

fn transform_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let norm = operator_norm(&t);
    let pair = bounded_transform(&t)?;
    let roundtrip = inverse_transform(&pair.z)?.max_diff(&t) / (1.0 + norm * norm);
    let via = decompose_via_transform(&t, &config.frame, config.cluster_tol)?;
    let direct = spectral_decompose(&t, &config.frame, config.cluster_tol)?;
    let (support, projectors) = matching(&via, &direct);
    let g = rng.matrix(n);
    let adjoint = bounded_transform(&g)?.z.adjoint().max_diff(&bounded_transform(&g.adjoint())?.z);
    let zn = operator_norm(&pair.z);
    let contraction = pair
        .c
        .max_diff(&(&QMatrix::identity(n) - &(&pair.z.adjoint() * &pair.z)))
        .max(if zn < 1.0 { 0.0 } else { zn });
    Ok(vec![
        ("roundtrip", roundtrip),
        ("pushforward_support", rel(support, norm)),
        ("pushforward_projectors", projectors),
        ("adjoint", adjoint),
        ("contraction", contraction),
    ])
}

fn cyclic_trial(rng: &mut QRng, config: &VerifyConfig) -> Result<Residuals> {
    let t = random_normal(rng, config);
    let n = t.n();
    let frame = config.frame;
    let norm = operator_norm(&t);
    let pvm = spectral_decompose(&t, &frame, config.cluster_tol)?;
    let model = cyclic_l2_model(&pvm)?;
    let u = model.isometry();
    let values: Vec<Quaternion> = pvm.support.iter().map(|_| rng.quaternion()).collect();
    let phi: Vec<_> = pvm.support.iter().cloned().zip(values.iter().cloned()).collect();
    let calc = model.conjugate(&integrate(&phi, &pvm)?).max_diff(&model.multiplier(&values));
    let mut left = 0.0f64;
    for q in [Quaternion::I, Quaternion::J, Quaternion::K, rng.quaternion()] {
        left = left.max(model.conjugate(&pvm.l.op(&q)).max_diff(&QMatrix::scalar(n, q)));
    }
    let gammas: Vec<C64> = model
        .blocks
        .iter()
        .map(|_| {
            let a = rng.uniform(0.0, std::f64::consts::TAU);
            C64::new(a.cos(), a.sin())
        })
        .collect();
    let twisted = twist_left_mult(&pvm, &model, &gammas)?;
    let c = frame.from_complex(C64::new(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)));
    Ok(vec![
        ("isometry", (&u.adjoint() * &u).max_diff(&QMatrix::identity(n))),
        ("calculus_conjugation", calc),
        ("left_conjugation", left),
        ("twist_association", rel(association_residuals(&t, &twisted, &frame).max(), norm)),
        ("twist_agreement", twisted.op(&c).max_diff(&pvm.l.op(&c))),
    ])
}
