//! `qspectra`: spectral reports for quaternionic normal matrices.

mod commands;
mod input;
mod phi;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qspectra::SliceFrame;

use commands::{Failure, Outcome, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Slice decomposition, spectral projectors and left multiplication of T.
    Decompose,
    /// Point, residual, continuous and spherical spectrum of T.
    Spectrum,
    /// Left spectrum of T with respect to an associated left multiplication.
    LeftSpectrum,
    /// phi(T) for a function given by --phi.
    Calculus,
    /// Bounded transform Z = T (I + T*T)^(-1/2) and its inverse.
    Transform,
    /// Randomized invariant suites over seeded normal matrices.
    Verify,
    /// The real spectrum of diag(t_1, ..., t_n) sampling [0, 1].
    DemoL2,
}

#[derive(Parser, Debug)]
#[command(name = "qspectra", version, about = "Spectral reports for quaternionic normal matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON matrix document.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Imaginary unit of the slice: i, j, k or [w, x, y, z].
    #[arg(long, global = true, default_value = "i")]
    unit: String,

    /// Absolute tolerance for merging eigenvalues (default 1e-8·‖T‖).
    #[arg(long, global = true)]
    cluster_tol: Option<f64>,

    /// Relative determinant cutoff for singularity.
    #[arg(long, global = true, default_value_t = qspectra::qmatrix::TOL_SING)]
    sing_tol: f64,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Trials per verification suite.
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,

    /// Largest dimension of random matrices in verify.
    #[arg(long, global = true, default_value_t = 6)]
    max_dim: usize,

    /// Random quaternions tested against the left resolvent set.
    #[arg(long, global = true, default_value_t = 3)]
    samples: usize,

    /// Size of the demo-l2 matrix.
    #[arg(long, global = true, default_value_t = 16)]
    points: usize,

    /// Expression in z such as "2z^2 - conj(z) + i", or a JSON array of values in support order.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Failure::Config(format!("--{name} must be a positive number, got {x}")))
    }
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let unit = input::unit(&cli.unit).map_err(|e| Failure::Config(format!("--unit: {e}")))?;
    let frame = SliceFrame::new(unit).map_err(|e| Failure::Config(format!("--unit: {e}")))?;
    if cli.trials == 0 {
        return Err(Failure::Config("--trials must be at least 1".into()));
    }
    if cli.max_dim < 2 {
        return Err(Failure::Config("--max-dim must be at least 2".into()));
    }
    if cli.points == 0 {
        return Err(Failure::Config("--points must be at least 1".into()));
    }
    Ok(Settings {
        frame,
        cluster_tol: cli.cluster_tol.map(|x| positive("cluster-tol", x)).transpose()?,
        sing_tol: positive("sing-tol", cli.sing_tol)?,
        seed: cli.seed,
        trials: cli.trials,
        max_dim: cli.max_dim,
        samples: cli.samples,
        points: cli.points,
        phi: cli.phi.clone(),
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let settings = settings(cli)?;
    let doc = cli.input.as_deref().map(input::load).transpose().map_err(Failure::Config)?;
    let needs_input = || doc.as_ref().ok_or_else(|| Failure::Config("this command needs --input".into()));
    match cli.command {
        Command::Decompose => commands::run_decompose(needs_input()?, &settings),
        Command::Spectrum => commands::run_spectrum(needs_input()?, &settings),
        Command::LeftSpectrum => commands::run_left_spectrum(needs_input()?, &settings),
        Command::Calculus => commands::run_calculus(needs_input()?, &settings),
        Command::Transform => commands::run_transform(needs_input()?, &settings),
        Command::Verify => commands::run_verify(doc.as_ref(), &settings),
        Command::DemoL2 => commands::run_demo_l2(&settings),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QSPECTRA_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n",
                Format::Text => render::text(&outcome.report),
            };
            let _ = std::io::stdout().write_all(body.as_bytes());
            match outcome.failure {
                Some(m) => {
                    let failure = Failure::Verification(m);
                    eprintln!("error: {}", failure.message());
                    ExitCode::from(failure.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
