//! Command-line front end: argument parsing, scalar-mode selection and exit
//! codes. Each verb lives in [`commands`] or [`scenario`].

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hodgekit::field::{Exact, Gq, Tolerance, C64};
use hodgekit::io::{self, JsonScalar};
use hodgekit::Error;
use serde_json::{json, Value};

pub mod commands;
pub mod scenario;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "hodgekit", version, about = "Mixed Hodge structures, weight filtrations and nilpotent orbit scans")]
pub struct Cli {
    /// Output format; CSV is available for scans and scenario reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Zero threshold for floating-point input (selects the floating path).
    #[arg(long, global = true, conflicts_with = "exact")]
    pub tolerance: Option<f64>,
    /// Require exact input and exact arithmetic.
    #[arg(long, global = true)]
    pub exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mixed Hodge structures.
    #[command(subcommand)]
    Mhs(MhsCommand),
    /// Weight filtrations and gradings.
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Nilpotent orbits and decay scans.
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Bundled scenarios and the verification suite.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Subcommand, Debug)]
pub enum MhsCommand {
    /// Classify F relative to (W, S): InM when (F, W) is a graded-polarized MHS.
    Check { file: PathBuf },
    /// Deligne's bigrading I^{p,q}.
    Bigrading { file: PathBuf },
    /// Gram matrix of the mixed Hodge metric.
    Metric { file: PathBuf },
    /// The real splitting e^{-i delta} F.
    DeltaSplit { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum WeightsCommand {
    /// Monodromy weight filtration W(N).
    Monodromy { file: PathBuf },
    /// Relative weight filtration relW(N, W).
    Relative { file: PathBuf },
    /// The sl2-triple (N0, relY - Y, N0+).
    Sl2 { file: PathBuf },
    /// Deligne's grading Y(F, W, N).
    DeligneGrading { file: PathBuf },
    /// Full admissibility check with all derived data.
    Admissible { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum OrbitCommand {
    /// e^{zN} F.
    Eval {
        file: PathBuf,
        /// Point z as a scalar string, e.g. "1/2+3i".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Distance scan along z = iy.
    Scan { file: PathBuf },
    /// Horizontality of the perturbation and first-order connection shape.
    Horizontality { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ScenarioCommand {
    /// Names of the available scenarios.
    List,
    /// Run one scenario, or "all" for every scenario plus the full suite.
    Run { name: String },
}

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Successful computation whose requested check may still have failed.
pub struct Report {
    pub body: String,
    /// Structured reason when a mathematical check failed.
    pub failure: Option<Value>,
    /// Progress lines for the error stream.
    pub notes: Vec<String>,
}

impl Report {
    pub fn json(v: &Value, failure: Option<Value>) -> Self {
        Report {
            body: io::to_pretty(v),
            failure,
            notes: Vec::new(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float(f64),
}

fn diagnostic(code: i32, kind: &str, name: &str, message: &str, extra: Option<Value>) -> String {
    let mut d = json!({
        "status": if code == 1 { "check_failed" } else { "error" },
        "exit_code": code,
        "kind": kind,
        "code": name,
        "message": message,
    });
    if let (Some(o), Some(Value::Object(x))) = (d.as_object_mut(), extra) {
        o.extend(x);
    }
    serde_json::to_string(&d).expect("diagnostic serializes") + "\n"
}

pub fn error_outcome(e: &Error) -> Outcome {
    let code = if e.is_input_error() { 2 } else { 1 };
    let kind = if code == 2 { "input" } else { "math" };
    let extra = match e {
        Error::NotAdmissible(clause) => Some(json!({ "clause": clause.to_string() })),
        _ => None,
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: diagnostic(code, kind, e.code(), &e.to_string(), extra),
    }
}

fn usage_outcome(message: &str) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: diagnostic(2, "usage", "Usage", message.trim(), None),
    }
}

pub fn read_json(path: &Path) -> Result<Value, Error> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Exact unless a tolerance was given or the input holds non-exact scalars.
pub fn select_mode(cli: &Cli, v: &Value) -> Result<Mode, Error> {
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Invalid(format!("tolerance must be a nonnegative number, got {t}")));
        }
        return Ok(Mode::Float(t));
    }
    if scalars_exact(v) {
        return Ok(Mode::Exact);
    }
    if cli.exact {
        return Err(Error::Parse("--exact given but the input contains non-exact scalars".into()));
    }
    Ok(Mode::Float(DEFAULT_TOLERANCE))
}

/// Whether every scalar position of a record parses as a Gaussian rational.
fn scalars_exact(v: &Value) -> bool {
    fn walk(v: &Value) -> bool {
        match v {
            Value::Object(o) => o
                .iter()
                .filter(|(k, _)| !matches!(k.as_str(), "dimension" | "hodge_numbers" | "expect"))
                .all(|(_, x)| walk(x)),
            Value::Array(a) => a.iter().all(walk),
            Value::Number(_) | Value::String(_) => Gq::from_json(v).is_ok(),
            _ => true,
        }
    }
    walk(v)
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    use commands as c;
    let float_only = |what: &str| -> Result<(), Error> {
        if cli.tolerance.is_some() {
            return Err(Error::Invalid(format!("{what} always runs in exact arithmetic; --tolerance does not apply")));
        }
        Ok(())
    };
    let csv_unsupported = |what: &str| -> Result<(), Error> {
        if cli.format == Format::Csv {
            return Err(Error::Invalid(format!("{what} has no CSV output; use --format json")));
        }
        Ok(())
    };
    macro_rules! generic {
        ($file:expr, $f:ident $(, $arg:expr)*) => {{
            csv_unsupported(stringify!($f))?;
            let v = read_json($file)?;
            match select_mode(cli, &v)? {
                Mode::Exact => c::$f::<Gq>(&v, Exact $(, $arg)*),
                Mode::Float(t) => c::$f::<C64>(&v, Tolerance(t) $(, $arg)*),
            }
        }};
    }
    match &cli.command {
        Command::Mhs(m) => match m {
            MhsCommand::Check { file } => generic!(file, mhs_check),
            MhsCommand::Bigrading { file } => generic!(file, mhs_bigrading),
            MhsCommand::Metric { file } => generic!(file, mhs_metric),
            MhsCommand::DeltaSplit { file } => generic!(file, mhs_delta_split),
        },
        Command::Weights(w) => match w {
            WeightsCommand::Monodromy { file } => generic!(file, weights_monodromy),
            WeightsCommand::Relative { file } => generic!(file, weights_relative),
            WeightsCommand::Sl2 { file } => generic!(file, weights_sl2),
            WeightsCommand::DeligneGrading { file } => generic!(file, weights_deligne_grading),
            WeightsCommand::Admissible { file } => generic!(file, weights_admissible),
        },
        Command::Orbit(o) => match o {
            OrbitCommand::Eval { file, z } => generic!(file, orbit_eval, z),
            OrbitCommand::Horizontality { file } => generic!(file, orbit_horizontality),
            OrbitCommand::Scan { file } => {
                float_only("orbit scan")?;
                let v = read_json(file)?;
                if !scalars_exact(&v) {
                    return Err(Error::Parse("orbit scan needs exact scenario data".into()));
                }
                c::orbit_scan(&v, cli.format, cli.exact)
            }
        },
        Command::Scenario(s) => {
            float_only("scenario")?;
            match s {
                ScenarioCommand::List => scenario::list(cli.format),
                ScenarioCommand::Run { name } => scenario::run(name, cli.format),
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => usage_outcome(&e.to_string()),
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let mut stderr: String = report.notes.iter().map(|n| format!("{n}\n")).collect();
            let code = match &report.failure {
                None => 0,
                Some(reason) => {
                    stderr.push_str(&diagnostic(1, "math", "CheckFailed", "requested check failed", Some(json!({ "reason": reason }))));
                    1
                }
            };
            Outcome {
                code,
                stdout: report.body,
                stderr,
            }
        }
        Err(e) => error_outcome(&e),
    }
}
