//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one result line.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qspectra::left_mult::LeftScalarMultiplication;
use qspectra::left_spectrum::{eigenspace_compare, left_determinant, left_spectrum_report};
use qspectra::qmatrix::{self, kernel_projector, kernel_real_dim, projector_distance, QMatrix};
use qspectra::random::{trial_seed, QRng};
use qspectra::slice::decompose;
use qspectra::spectral::{delta, reconstruct, spectral_decompose, verify_propl_conditions};
use qspectra::verify::{random_normal, run_suite, Suite, SuiteReport, VerifyConfig};
use qspectra::{Quaternion, SliceFrame};

const SEED: u64 = 20_240_917;

fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
    Quaternion::new(w, x, y, z)
}

fn example_one() -> QMatrix {
    QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![Quaternion::J, Quaternion::ZERO]]).unwrap()
}

fn example_two() -> QMatrix {
    QMatrix::from_rows(vec![vec![Quaternion::ZERO, Quaternion::I], vec![-Quaternion::I, Quaternion::ZERO]]).unwrap()
}

fn example_one_p1() -> QMatrix {
    let s = 0.5 * FRAC_1_SQRT_2;
    QMatrix::from_rows(vec![vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, s, -s, 0.0)], vec![q(0.0, -s, s, 0.0), q(0.5, 0.0, 0.0, 0.0)]]).unwrap()
}

fn example_one_p2() -> QMatrix {
    let s = 0.5 * FRAC_1_SQRT_2;
    QMatrix::from_rows(vec![vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, -s, s, 0.0)], vec![q(0.0, s, -s, 0.0), q(0.5, 0.0, 0.0, 0.0)]]).unwrap()
}

/// The left multiplication of the first example, entry by entry in `q`.
fn example_one_left(p: Quaternion) -> QMatrix {
    let [q0, q1, q2, q3] = p.to_array();
    let r = FRAC_1_SQRT_2;
    QMatrix::from_rows(vec![
        vec![q(q0, 0.0, -q2, 0.0), q(-q3 * r, q1 * r, q1 * r, -q3 * r)],
        vec![q(q3 * r, q1 * r, q1 * r, -q3 * r), q(q0, q2, 0.0, 0.0)],
    ])
    .unwrap()
}

fn config(trials: usize) -> VerifyConfig {
    VerifyConfig { seed: SEED, trials, max_dim: 8, ..VerifyConfig::default() }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(checks: &[(&str, f64, f64)]) -> Outcome {
    let passed = checks.iter().all(|(_, value, tol)| value <= tol);
    let detail = checks.iter().map(|(name, value, tol)| format!("{name} {value:.2e}/{tol:.0e}")).collect::<Vec<_>>().join(", ");
    Outcome { passed, detail }
}

fn suite_outcome(report: &SuiteReport) -> Outcome {
    let mut detail = report.checks.iter().map(|c| format!("{} {:.2e}/{:.0e}", c.name, c.max_residual, c.tolerance)).collect::<Vec<_>>().join(", ");
    if let Some(e) = &report.error {
        detail.push_str(&format!("; error: {e}"));
    }
    Outcome { passed: report.passed(), detail: format!("{} trials: {detail}", report.trials) }
}

fn bool_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn golden_one() -> Outcome {
    let t = example_one();
    let frame = SliceFrame::default();
    let d = decompose(&t, &frame).unwrap();
    let s = FRAC_1_SQRT_2;
    let a = QMatrix::from_rows(vec![vec![Quaternion::ZERO, q(0.0, 0.5, -0.5, 0.0)], vec![q(0.0, -0.5, 0.5, 0.0), Quaternion::ZERO]]).unwrap();
    let j = QMatrix::from_rows(vec![vec![Quaternion::ZERO, q(0.0, s, s, 0.0)], vec![q(0.0, s, s, 0.0), Quaternion::ZERO]]).unwrap();
    let pvm = spectral_decompose(&t, &frame, None).unwrap();
    let support = if pvm.support.len() == 2 {
        (pvm.support[0].alpha - s).abs().max((pvm.support[0].beta - s).abs()).max((pvm.support[1].alpha + s).abs()).max((pvm.support[1].beta - s).abs())
    } else {
        f64::INFINITY
    };
    let projectors = if pvm.projectors.len() == 2 {
        pvm.projectors[0].max_diff(&example_one_p1()).max(pvm.projectors[1].max_diff(&example_one_p2()))
    } else {
        f64::INFINITY
    };
    let left = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K]
        .iter()
        .map(|u| pvm.l.op(u).max_diff(&example_one_left(*u)))
        .fold(0.0, f64::max);
    outcome(&[
        ("A", d.a.max_diff(&a), 1e-10),
        ("B", d.b.max_diff(&QMatrix::scalar(2, Quaternion::real(SQRT_2 / 2.0))), 1e-10),
        ("J", d.j.max_diff(&j), 1e-10),
        ("support", support, 1e-10),
        ("P", projectors, 1e-10),
        ("L", left, 1e-10),
    ])
}

fn golden_two() -> Outcome {
    let s = example_two();
    let frame = SliceFrame::default();
    let pvm = spectral_decompose(&s, &frame, None).unwrap();
    let support = if pvm.support.len() == 2 {
        (pvm.support[0].alpha - 1.0).abs().max(pvm.support[0].beta.abs()).max((pvm.support[1].alpha + 1.0).abs()).max(pvm.support[1].beta.abs())
    } else {
        f64::INFINITY
    };
    let half = Quaternion::real(0.5);
    let p1 = QMatrix::from_rows(vec![vec![half, Quaternion::I * 0.5], vec![-Quaternion::I * 0.5, half]]).unwrap();
    let p2 = QMatrix::from_rows(vec![vec![half, -Quaternion::I * 0.5], vec![Quaternion::I * 0.5, half]]).unwrap();
    let projectors = if pvm.projectors.len() == 2 {
        pvm.projectors[0].max_diff(&p1).max(pvm.projectors[1].max_diff(&p2))
    } else {
        f64::INFINITY
    };
    let standard = verify_propl_conditions(&s, &LeftScalarMultiplication::standard(2), &frame);
    let constructed = verify_propl_conditions(&s, &pvm.l, &frame);
    outcome(&[
        ("support", support, 1e-10),
        ("P", projectors, 1e-10),
        ("S=P1-P2", (&p1 - &p2).max_diff(&s).max(reconstruct(&pvm).max_diff(&s)), 1e-10),
        ("standard L rejected", bool_residual(!standard), 0.0),
        ("constructed L accepted", bool_residual(constructed), 0.0),
    ])
}

fn golden_delta() -> Outcome {
    let t = example_one();
    let frame = SliceFrame::default();
    let pvm = spectral_decompose(&t, &frame, None).unwrap();
    let l1 = q(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    let l2 = q(-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    let det = left_determinant(&t, &pvm.l, &l1, qmatrix::TOL_SING).0.max(left_determinant(&t, &pvm.l, &l2, qmatrix::TOL_SING).0);
    let d = delta(&t, &l1);
    let ker_delta_dim = kernel_real_dim(&d, 1e-8);
    let cmp = eigenspace_compare(&t, &pvm.l, &pvm.support[0], &frame, qmatrix::TOL_SING).unwrap();
    let ker_delta = kernel_projector(&d, 1e-8).unwrap();
    let ker_left = kernel_projector(&(&t - &pvm.l.op(&l1)), 1e-8).unwrap();
    let angles = projector_distance(&ker_delta, &ker_left).max(projector_distance(&ker_left, &pvm.projectors[0]));
    outcome(&[
        ("det", det, 1e-9),
        ("dim Ker delta - 4", (ker_delta_dim as f64 - 4.0).abs(), 0.0),
        ("dim right eigenspace - 2", (cmp.right_dim_real as f64 - 2.0).abs(), 0.0),
        ("principal angles", angles, 1e-8),
    ])
}

fn reconstruction() -> Outcome {
    let report = run_suite(Suite::Spectral, &config(200)).unwrap();
    let check = report.check("reconstruction").unwrap();
    let mut o = outcome(&[("reconstruction", check.max_residual, 1e-8)]);
    o.passed &= report.error.is_none();
    if let Some(e) = report.error {
        o.detail.push_str(&format!("; error: {e}"));
    }
    o
}

fn left_spectrum() -> Outcome {
    let cfg = config(200);
    let report = run_suite(Suite::LeftSpectrum, &cfg).unwrap();
    let mut empty = true;
    for k in 0..cfg.trials {
        let mut rng = QRng::seeded(trial_seed(cfg.seed, k as u64));
        let t = random_normal(&mut rng, &cfg);
        let pvm = spectral_decompose(&t, &cfg.frame, None).unwrap();
        let r = left_spectrum_report(&t, &pvm.l, &cfg.frame, &[], cfg.sing_tol).unwrap();
        empty &= r.residual.is_empty() && r.continuous.is_empty();
    }
    let mut o = suite_outcome(&report);
    o.passed &= empty;
    o.detail.push_str(&format!(", residual spectra empty {empty}"));
    o
}

fn run(index: usize, title: &str, budget: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = o.passed && in_time;
    println!(
        "[{}] {index}. {title} ({:.2} s of {} s): {}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        o.detail
    );
    passed
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let start = Instant::now();
    let secs = Duration::from_secs;
    let criteria: [Criterion; 9] = [
        ("golden example [[0,i],[j,0]]", secs(1), golden_one),
        ("golden example [[0,i],[-i,0]]", secs(1), golden_two),
        ("left determinant and kernels at the first eigenvalue", secs(1), golden_delta),
        ("randomized reconstruction", secs(30), reconstruction),
        ("left spectrum against spherical spectrum and resolvents", secs(60), left_spectrum),
        ("functional calculus laws", secs(60), || suite_outcome(&run_suite(Suite::Calculus, &config(100)).unwrap())),
        ("left multiplication roundtrip and rejection", secs(60), || suite_outcome(&run_suite(Suite::LeftMult, &config(50)).unwrap())),
        ("bounded transform", secs(60), || suite_outcome(&run_suite(Suite::Transform, &config(100)).unwrap())),
        ("cyclic model and twisted multiplications", secs(60), || suite_outcome(&run_suite(Suite::Cyclic, &config(50)).unwrap())),
    ];
    let mut failed = 0;
    for (k, (title, budget, f)) in criteria.into_iter().enumerate() {
        if !run(k + 1, title, budget, f) {
            failed += 1;
        }
    }
    let total = start.elapsed();
    let in_time = total <= secs(60);
    println!("[{}] total {:.2} s of 60 s", if in_time { "PASS" } else { "FAIL" }, total.as_secs_f64());
    if failed == 0 && in_time {
        println!("acceptance: 9/9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
