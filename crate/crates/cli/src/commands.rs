use log::{debug, info};
use serde::Serialize;

use qspectra::left_mult::{LeftScalarMultiplication, TOL_LEFT};
use qspectra::left_spectrum::{
    calculus_resolvent, eigenspace_compare, hausdorff, left_determinant, left_point_spectrum, left_resolvent, spherical_point_spectrum,
    Membership,
};
use qspectra::qmatrix::operator_norm;
use qspectra::random::QRng;
use qspectra::slice::{decompose, TOL_KER, TOL_NORMAL};
use qspectra::spectral::{
    association_residuals, classify_spectrum, essential_sup, integrate, invert_via_calculus, reconstruct, scalar_measure, spectral_decompose,
    AssociationResiduals, IqPvm, ScalarSpectralMeasure, TOL_ASSOCIATED, TOL_CLUSTER,
};
use qspectra::transform::{bounded_transform, decompose_via_transform, inverse_transform, TOL_MARGIN};
use qspectra::verify::{run_all, SuiteReport, VerifyConfig};
use qspectra::quaternion::CircularSet;
use qspectra::{Error, QMatrix, Quaternion, SliceFrame, SlicePoint};

use crate::input::Document;
use crate::phi;

pub struct Settings {
    pub frame: SliceFrame,
    pub cluster_tol: Option<f64>,
    pub sing_tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub samples: usize,
    pub points: usize,
    pub phi: Option<String>,
}

pub enum Failure {
    Config(String),
    Library(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Library(e) if e.is_precondition() => 2,
            Failure::Library(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Config(m) => m.clone(),
            Failure::Library(e) => format!("{}: {e}", error_kind(e)),
            Failure::Verification(m) => format!("verification failed: {m}"),
        }
    }
}

/// The variant name of a library error.
pub fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

/// A finished command: its report, and the verification failure if any.
pub struct Outcome {
    pub report: serde_json::Value,
    pub failure: Option<String>,
}

fn ok(report: impl Serialize) -> Result<Outcome, Failure> {
    let report = serde_json::to_value(report).map_err(|e| Failure::Config(format!("cannot serialize report: {e}")))?;
    Ok(Outcome { report, failure: None })
}

#[derive(Serialize)]
struct Tolerances {
    normal: f64,
    kernel: f64,
    cluster: f64,
    singular: f64,
    associated: f64,
}

impl Tolerances {
    fn new(settings: &Settings, t: &QMatrix) -> Self {
        Tolerances {
            normal: TOL_NORMAL,
            kernel: TOL_KER,
            cluster: settings.cluster_tol.unwrap_or(TOL_CLUSTER * operator_norm(t).max(f64::MIN_POSITIVE)),
            singular: settings.sing_tol,
            associated: TOL_ASSOCIATED,
        }
    }
}

fn pairs(points: &[SlicePoint]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.alpha, p.beta]).collect()
}

fn decompose_matrix(t: &QMatrix, settings: &Settings) -> Result<IqPvm, Failure> {
    info!("decomposing a {0}x{0} matrix", t.n());
    let pvm = spectral_decompose(t, &settings.frame, settings.cluster_tol)?;
    debug!("support {:?}", pairs(&pvm.support));
    Ok(pvm)
}

#[derive(Serialize)]
struct DecomposeReport {
    command: &'static str,
    unit: Quaternion,
    tolerances: Tolerances,
    #[serde(rename = "A")]
    a: QMatrix,
    #[serde(rename = "B")]
    b: QMatrix,
    #[serde(rename = "J")]
    j: QMatrix,
    kernel_projector: QMatrix,
    structure_residual: f64,
    support: Vec<[f64; 2]>,
    ranks: Vec<usize>,
    projectors: Vec<QMatrix>,
    #[serde(rename = "L")]
    l: LeftScalarMultiplication,
    reconstruction_error: f64,
}

pub fn run_decompose(doc: &Document, settings: &Settings) -> Result<Outcome, Failure> {
    let t = doc.matrix().map_err(Failure::Config)?;
    let d = decompose(t, &settings.frame)?;
    let pvm = decompose_matrix(t, settings)?;
    ok(DecomposeReport {
        command: "decompose",
        unit: settings.frame.unit,
        tolerances: Tolerances::new(settings, t),
        structure_residual: d.structure_residual(),
        a: d.a,
        b: d.b,
        j: d.j,
        kernel_projector: d.kernel,
        support: pairs(&pvm.support),
        ranks: (0..pvm.support.len()).map(|k| pvm.rank(k)).collect(),
        reconstruction_error: reconstruct(&pvm).max_diff(t),
        projectors: pvm.projectors,
        l: pvm.l,
    })
}

#[derive(Serialize)]
struct SpectrumReport {
    command: &'static str,
    unit: Quaternion,
    tolerances: Tolerances,
    point: Vec<[f64; 2]>,
    multiplicities: Vec<usize>,
    residual: Vec<[f64; 2]>,
    continuous: Vec<[f64; 2]>,
    spherical: CircularSet,
    /// Spherical point spectrum read off the complex representation.
    spherical_check: Vec<[f64; 2]>,
    spherical_distance: f64,
}

pub fn run_spectrum(doc: &Document, settings: &Settings) -> Result<Outcome, Failure> {
    let t = doc.matrix().map_err(Failure::Config)?;
    let pvm = decompose_matrix(t, settings)?;
    let c = classify_spectrum(&pvm);
    let check = spherical_point_spectrum(t, &settings.frame)?;
    ok(SpectrumReport {
        command: "spectrum",
        unit: settings.frame.unit,
        tolerances: Tolerances::new(settings, t),
        multiplicities: c.point.iter().filter_map(|p| pvm.locate(p)).map(|k| pvm.rank(k)).collect(),
        spherical_distance: hausdorff(&c.point, &check),
        point: pairs(&c.point),
        residual: pairs(&c.residual),
        continuous: pairs(&c.continuous),
        spherical: c.spherical,
        spherical_check: pairs(&check),
    })
}

fn left_multiplication(doc: &Document, fallback: &LeftScalarMultiplication) -> Result<(LeftScalarMultiplication, &'static str), Failure> {
    match &doc.l {
        Some((li, lj)) => Ok((LeftScalarMultiplication::new(li.clone(), lj.clone(), TOL_LEFT)?, "input")),
        None => Ok((fallback.clone(), "constructed")),
    }
}

#[derive(Serialize)]
struct Eigenspace {
    point: [f64; 2],
    right_dim_real: usize,
    left_dim_real: usize,
    right_subset_left: bool,
    equality: bool,
}

#[derive(Serialize)]
struct Sample {
    q: Quaternion,
    membership: Membership,
    det: f64,
    threshold: f64,
    resolvent: Option<QMatrix>,
    /// `‖(T − L_q)⁻¹ − ∫ (z − q)⁻¹ dP‖`.
    calculus_difference: Option<f64>,
}

#[derive(Serialize)]
struct LeftSpectrumReport {
    command: &'static str,
    unit: Quaternion,
    tolerances: Tolerances,
    left_multiplication: &'static str,
    association: AssociationResiduals,
    point: Vec<[f64; 2]>,
    residual: Vec<[f64; 2]>,
    continuous: Vec<[f64; 2]>,
    spherical: Vec<[f64; 2]>,
    spherical_distance: f64,
    eigenspaces: Vec<Eigenspace>,
    samples: Vec<Sample>,
}

pub fn run_left_spectrum(doc: &Document, settings: &Settings) -> Result<Outcome, Failure> {
    let t = doc.matrix().map_err(Failure::Config)?;
    let frame = settings.frame;
    let pvm = decompose_matrix(t, settings)?;
    let (l, source) = left_multiplication(doc, &pvm.l)?;
    let pvm = IqPvm { l, ..pvm };
    let association = association_residuals(t, &pvm.l, &frame);
    let mut eigenspaces = Vec::new();
    for p in &pvm.support {
        let c = eigenspace_compare(t, &pvm.l, p, &frame, settings.sing_tol)?;
        eigenspaces.push(Eigenspace {
            point: [p.alpha, p.beta],
            right_dim_real: c.right_dim_real,
            left_dim_real: c.left_dim_real,
            right_subset_left: c.right_subset_left,
            equality: c.equality,
        });
    }
    let mut rng = QRng::seeded(settings.seed);
    let mut samples = Vec::new();
    for _ in 0..settings.samples {
        let q = rng.quaternion() * 2.5;
        let (det, threshold) = left_determinant(t, &pvm.l, &q, settings.sing_tol);
        let (membership, resolvent, calculus_difference) = if det <= threshold {
            (Membership::Point, None, None)
        } else {
            let r = left_resolvent(t, &pvm.l, &q, &frame, settings.sing_tol)?;
            let diff = r.max_diff(&calculus_resolvent(&pvm, &q)?);
            (Membership::Resolvent, Some(r), Some(diff))
        };
        samples.push(Sample { q, membership, det, threshold, resolvent, calculus_difference });
    }
    let point = left_point_spectrum(t, &pvm.l, &frame);
    let spherical = spherical_point_spectrum(t, &frame)?;
    ok(LeftSpectrumReport {
        command: "left-spectrum",
        unit: frame.unit,
        tolerances: Tolerances::new(settings, t),
        left_multiplication: source,
        association,
        spherical_distance: hausdorff(&point, &spherical),
        point: pairs(&point),
        residual: Vec::new(),
        continuous: Vec::new(),
        spherical: pairs(&spherical),
        eigenspaces,
        samples,
    })
}

#[derive(Serialize)]
struct Value {
    point: [f64; 2],
    value: Quaternion,
}

#[derive(Serialize)]
struct CalculusReport {
    command: &'static str,
    unit: Quaternion,
    tolerances: Tolerances,
    phi: String,
    values: Vec<Value>,
    #[serde(rename = "phi(T)")]
    phi_t: QMatrix,
    norm: f64,
    essential_sup: f64,
    inverse: Option<QMatrix>,
    inverse_error: Option<String>,
}

pub fn run_calculus(doc: &Document, settings: &Settings) -> Result<Outcome, Failure> {
    let t = doc.matrix().map_err(Failure::Config)?;
    let source = settings.phi.clone().ok_or_else(|| Failure::Config("calculus needs --phi".into()))?;
    let pvm = decompose_matrix(t, settings)?;
    let table: Vec<(SlicePoint, Quaternion)> = if source.trim_start().starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(&source).map_err(|e| Failure::Config(format!("--phi: {e}")))?;
        let values = v.as_array().ok_or_else(|| Failure::Config("--phi: expected an array of values".into()))?;
        if values.len() > pvm.support.len() {
            return Err(Failure::Config(format!("--phi has {} values for {} support points", values.len(), pvm.support.len())));
        }
        let values = values.iter().map(crate::input::quaternion).collect::<Result<Vec<_>, _>>().map_err(|e| Failure::Config(format!("--phi: {e}")))?;
        pvm.support.iter().copied().zip(values).collect()
    } else {
        let expr = phi::parse(&source).map_err(|e| Failure::Config(format!("--phi: {e}")))?;
        pvm.tabulate(|p| expr.eval(p.to_quaternion()))
    };
    let phi_t = integrate(&table, &pvm)?;
    let (inverse, inverse_error) = match invert_via_calculus(&table, &pvm) {
        Ok(m) => (Some(m), None),
        Err(e @ Error::NotInjective { .. }) => (None, Some(format!("{}: {e}", error_kind(&e)))),
        Err(e) => return Err(e.into()),
    };
    ok(CalculusReport {
        command: "calculus",
        unit: settings.frame.unit,
        tolerances: Tolerances::new(settings, t),
        phi: source,
        values: table.iter().map(|(p, v)| Value { point: [p.alpha, p.beta], value: *v }).collect(),
        norm: operator_norm(&phi_t),
        essential_sup: essential_sup(&table, &pvm)?,
        phi_t,
        inverse,
        inverse_error,
    })
}

#[derive(Serialize)]
struct TransformTolerances {
    margin: f64,
    cluster: f64,
}

#[derive(Serialize)]
struct TransformReport {
    command: &'static str,
    unit: Quaternion,
    tolerances: TransformTolerances,
    #[serde(rename = "C")]
    c: QMatrix,
    #[serde(rename = "Z")]
    z: QMatrix,
    z_norm: f64,
    roundtrip_error: f64,
    /// Support of `T` pushed forward from that of `Z`, for normal `T`.
    support: Option<Vec<[f64; 2]>>,
    direct_support: Option<Vec<[f64; 2]>>,
    projector_difference: Option<f64>,
}

pub fn run_transform(doc: &Document, settings: &Settings) -> Result<Outcome, Failure> {
    let t = doc.matrix().map_err(Failure::Config)?;
    let pair = bounded_transform(t)?;
    let back = inverse_transform(&pair.z)?;
    let (support, direct_support, projector_difference) = if t.is_normal(TOL_NORMAL * t.frobenius_norm().powi(2).max(f64::MIN_POSITIVE)) {
        let via = decompose_via_transform(t, &settings.frame, settings.cluster_tol)?;
        let direct = decompose_matrix(t, settings)?;
        let diff = if via.projectors.len() == direct.projectors.len() {
            via.projectors.iter().zip(&direct.projectors).map(|(a, b)| a.max_diff(b)).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        (Some(pairs(&via.support)), Some(pairs(&direct.support)), Some(diff))
    } else {
        info!("matrix is not normal, skipping the spectral comparison");
        (None, None, None)
    };
    ok(TransformReport {
        command: "transform",
        unit: settings.frame.unit,
        tolerances: TransformTolerances { margin: TOL_MARGIN, cluster: Tolerances::new(settings, t).cluster },
        z_norm: operator_norm(&pair.z),
        roundtrip_error: back.max_diff(t),
        c: pair.c,
        z: pair.z,
        support,
        direct_support,
        projector_difference,
    })
}

#[derive(Serialize)]
struct InputCheck {
    name: &'static str,
    residual: f64,
    tolerance: f64,
    passed: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    seed: u64,
    trials: usize,
    max_dim: usize,
    unit: Quaternion,
    cluster_tol: Option<f64>,
    sing_tol: f64,
    input: Vec<InputCheck>,
    suites: Vec<SuiteReport>,
    passed: bool,
}

fn input_checks(doc: &Document, frame: &SliceFrame) -> Vec<InputCheck> {
    let mut checks = Vec::new();
    let Some((li, lj)) = &doc.l else {
        return checks;
    };
    let residual = doc.left_residual().unwrap_or(f64::NAN);
    let l = LeftScalarMultiplication::new(li.clone(), lj.clone(), TOL_LEFT);
    checks.push(InputCheck {
        name: "left_multiplication",
        residual,
        tolerance: TOL_LEFT,
        passed: l.is_ok(),
        error: l.as_ref().err().map(|e| format!("{}: {e}", error_kind(e))),
    });
    if let (Ok(l), Some(t)) = (l, &doc.t) {
        let r = association_residuals(t, &l, frame).max();
        let tolerance = TOL_ASSOCIATED * t.frobenius_norm().max(1.0);
        let passed = r <= tolerance;
        checks.push(InputCheck {
            name: "association",
            residual: r,
            tolerance,
            passed,
            error: (!passed).then(|| format!("NotAssociatedPair: residual {r:e} exceeds {tolerance:e}")),
        });
    }
    checks
}

pub fn run_verify(doc: Option<&Document>, settings: &Settings) -> Result<Outcome, Failure> {
    let config = VerifyConfig {
        seed: settings.seed,
        trials: settings.trials,
        max_dim: settings.max_dim,
        frame: settings.frame,
        cluster_tol: settings.cluster_tol,
        sing_tol: settings.sing_tol,
    };
    let input = doc.map(|d| input_checks(d, &settings.frame)).unwrap_or_default();
    info!("running {} trials per suite with seed {}", config.trials, config.seed);
    let suites = run_all(&config)?;
    let mut failures: Vec<String> = input.iter().filter(|c| !c.passed).map(|c| format!("input {}: {}", c.name, c.error.clone().unwrap_or_default())).collect();
    for s in &suites {
        if let Some(e) = &s.error {
            failures.push(format!("{}: {e}", s.suite.name()));
        }
        for c in s.checks.iter().filter(|c| !c.passed) {
            failures.push(format!("{}/{}: residual {:e} exceeds {:e}", s.suite.name(), c.name, c.max_residual, c.tolerance));
        }
    }
    let mut outcome = ok(VerifyReport {
        command: "verify",
        seed: config.seed,
        trials: config.trials,
        max_dim: config.max_dim,
        unit: config.frame.unit,
        cluster_tol: config.cluster_tol,
        sing_tol: config.sing_tol,
        input,
        suites,
        passed: failures.is_empty(),
    })?;
    if !failures.is_empty() {
        outcome.failure = Some(failures.join("; "));
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct DemoReport {
    command: &'static str,
    unit: Quaternion,
    points: usize,
    diagonal: Vec<f64>,
    support: Vec<[f64; 2]>,
    spectrum_is_real: bool,
    spectrum_in_unit_interval: bool,
    /// Spectral measure of the normalized all-ones vector.
    measure: ScalarSpectralMeasure,
    reconstruction_error: f64,
}

pub fn run_demo_l2(settings: &Settings) -> Result<Outcome, Failure> {
    let n = settings.points;
    let diagonal: Vec<f64> = (0..n).map(|k| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 }).collect();
    let t = QMatrix::diagonal(&diagonal.iter().map(|&x| Quaternion::real(x)).collect::<Vec<_>>());
    let pvm = decompose_matrix(&t, settings)?;
    let u = vec![Quaternion::real(1.0 / (n as f64).sqrt()); n];
    ok(DemoReport {
        command: "demo-l2",
        unit: settings.frame.unit,
        points: n,
        spectrum_is_real: pvm.support.iter().all(|p| p.beta == 0.0),
        spectrum_in_unit_interval: pvm.support.iter().all(|p| (-1e-12..=1.0 + 1e-12).contains(&p.alpha)),
        measure: scalar_measure(&u, &pvm)?,
        reconstruction_error: reconstruct(&pvm).max_diff(&t),
        support: pairs(&pvm.support),
        diagonal,
    })
}
