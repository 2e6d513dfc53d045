//! `discord-game` command line: curves as CSV, reports as JSON.
//!
//! Exit codes: 0 success, 1 internal failure, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::discord::{self, SearchSettings, DEFAULT_CURVE_SAMPLES};
use crate::error::Error;
use crate::game::{decompose, StrategyProfile};
use crate::hessian::{self, DEFAULT_STEP};
use crate::optimize::{self, MaximizeSettings, Scenario, DEFAULT_ADVANTAGE_SAMPLES};

#[derive(Debug, Parser)]
#[command(name = "discord-game", version, about = "Quantum discord in a modified CHSH Bayesian game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default: csv for curves, json for reports)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// JSON object of option values; explicit flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discord D_A(ρ(x)) sampled over x ∈ [0, 2π)
    DiscordCurve(DiscordCurveArgs),
    /// Payoff along x at the constrained optimum angles
    AdvantageCurve(AdvantageCurveArgs),
    /// Run a named maximization scenario
    Optimize(OptimizeArgs),
    /// Total, classical and quantum payoff with κ at one profile
    Payoff(ProfileArgs),
    /// Finite-difference Hessian and trace relation at one profile
    Hessian(HessianArgs),
}

#[derive(Debug, Args)]
pub struct DiscordCurveArgs {
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub theta_points: Option<usize>,
    #[arg(long)]
    pub phi_points: Option<usize>,
    #[arg(long)]
    pub simplex_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AdvantageCurveArgs {
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub angle_points: Option<usize>,
    #[arg(long)]
    pub x_points: Option<usize>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub simplex_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_ap: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_bp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Interpret angles and x in degrees
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct HessianArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Differentiate in x as well (5×5); the residual is then informational
    #[arg(long)]
    pub include_x: bool,
    #[arg(long)]
    pub step: Option<f64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
    pub theta_points: Option<usize>,
    pub phi_points: Option<usize>,
    pub simplex_tol: Option<f64>,
    pub scenario: Option<String>,
    pub angle_points: Option<usize>,
    pub x_points: Option<usize>,
    pub starts: Option<usize>,
    pub theta_a: Option<f64>,
    pub theta_ap: Option<f64>,
    pub theta_b: Option<f64>,
    pub theta_bp: Option<f64>,
    pub x: Option<f64>,
    pub degrees: Option<bool>,
    pub include_x: Option<bool>,
    pub step: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::UnknownScenario(_) | Error::InvalidBox { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Rendered command output and where it should go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn profile_from(args: &ProfileArgs, config: &ConfigFile) -> Result<StrategyProfile, CliError> {
    let degrees = args.degrees || config.degrees.unwrap_or(false);
    let convert = |v: f64| if degrees { v.to_radians() } else { v };
    let coords = [
        require(args.theta_a.or(config.theta_a), "theta-a")?,
        require(args.theta_ap.or(config.theta_ap), "theta-ap")?,
        require(args.theta_b.or(config.theta_b), "theta-b")?,
        require(args.theta_bp.or(config.theta_bp), "theta-bp")?,
        require(args.x.or(config.x), "x")?,
    ];
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(CliError::Usage("profile coordinates must be finite".into()));
    }
    Ok(StrategyProfile::from_array(coords.map(convert)))
}

#[derive(Serialize)]
struct OptimizeReport {
    scenario: Scenario,
    value: f64,
    argmax: StrategyProfile,
    evaluations: usize,
}

#[derive(Serialize)]
struct HessianJson<'a> {
    matrix: &'a [Vec<f64>],
    trace: f64,
    eigenvalue_sum: f64,
    f_value: f64,
    residual: f64,
}

/// Runs a parsed command and renders its output.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = cli.format.or(config.format);
    let path = cli.out.clone().or_else(|| config.out.clone());

    let text = match &cli.command {
        Command::DiscordCurve(args) => {
            let samples = args.samples.or(config.samples).unwrap_or(DEFAULT_CURVE_SAMPLES);
            if samples < 2 {
                return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
            }
            let defaults = SearchSettings::default();
            let search = SearchSettings {
                theta_points: args.theta_points.or(config.theta_points).unwrap_or(defaults.theta_points),
                phi_points: args.phi_points.or(config.phi_points).unwrap_or(defaults.phi_points),
                simplex_tol: args.simplex_tol.or(config.simplex_tol).unwrap_or(defaults.simplex_tol),
                ..defaults
            };
            let rows = discord::discord_curve(samples, &search)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut s = String::from("x,discord_nats\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{}", num(r.x), num(r.discord_nats));
                    }
                    s
                }
            }
        }
        Command::AdvantageCurve(args) => {
            let samples = args.samples.or(config.samples).unwrap_or(DEFAULT_ADVANTAGE_SAMPLES);
            if samples < 2 {
                return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
            }
            let rows = optimize::advantage_region(samples)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => json(&rows)?,
                Format::Csv => {
                    let mut s = String::from("x,f,advantage\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{}", num(r.x), num(r.f), u8::from(r.advantage));
                    }
                    s
                }
            }
        }
        Command::Optimize(args) => {
            let name = require(args.scenario.clone().or_else(|| config.scenario.clone()), "scenario")?;
            let scenario: Scenario = name.parse()?;
            let defaults = MaximizeSettings::default();
            let settings = MaximizeSettings {
                angle_points: args.angle_points.or(config.angle_points).unwrap_or(defaults.angle_points),
                x_points: args.x_points.or(config.x_points).unwrap_or(defaults.x_points),
                starts: args.starts.or(config.starts).unwrap_or(defaults.starts),
                simplex_tol: args.simplex_tol.or(config.simplex_tol).unwrap_or(defaults.simplex_tol),
                ..defaults
            };
            let result = optimize::run_scenario(scenario, &settings)?;
            if !result.value.is_finite() {
                return Err(CliError::Internal(format!("scenario {scenario} produced {}", result.value)));
            }
            let report = OptimizeReport {
                scenario,
                value: result.value,
                argmax: result.argmax,
                evaluations: result.evaluations,
            };
            match format.unwrap_or(Format::Json) {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let [a, ap, b, bp, x] = report.argmax.to_array();
                    format!(
                        "scenario,value,theta_a,theta_a_prime,theta_b,theta_b_prime,x,evaluations\n{},{},{},{},{},{},{},{}\n",
                        scenario,
                        num(report.value),
                        num(a),
                        num(ap),
                        num(b),
                        num(bp),
                        num(x),
                        report.evaluations
                    )
                }
            }
        }
        Command::Payoff(args) => {
            let profile = profile_from(args, &config)?;
            let d = decompose(&profile);
            match format.unwrap_or(Format::Json) {
                Format::Json => json(&d)?,
                Format::Csv => format!(
                    "total,classical,quantum,kappa\n{},{},{},{}\n",
                    num(d.total),
                    num(d.classical),
                    num(d.quantum),
                    match d.kappa {
                        crate::game::Kappa::Finite(k) => num(k),
                        other => other.to_string(),
                    }
                ),
            }
        }
        Command::Hessian(args) => {
            let profile = profile_from(&args.profile, &config)?;
            let include_x = args.include_x || config.include_x.unwrap_or(false);
            let step = args.step.or(config.step).unwrap_or(DEFAULT_STEP);
            let report = hessian::payoff_hessian(&profile, step, include_x)?;
            if !report.residual.is_finite() {
                return Err(CliError::Internal("non-finite Hessian".into()));
            }
            match format.unwrap_or(Format::Json) {
                Format::Json => json(&HessianJson {
                    matrix: &report.matrix,
                    trace: report.trace,
                    eigenvalue_sum: report.eigenvalue_sum,
                    f_value: report.f_value,
                    residual: report.residual,
                })?,
                Format::Csv => {
                    let n = report.matrix.len();
                    let mut header = String::from("f_value,trace,eigenvalue_sum,residual");
                    let mut row = format!(
                        "{},{},{},{}",
                        num(report.f_value),
                        num(report.trace),
                        num(report.eigenvalue_sum),
                        num(report.residual)
                    );
                    for i in 0..n {
                        for j in 0..n {
                            let _ = write!(header, ",h_{i}_{j}");
                            let _ = write!(row, ",{}", num(report.matrix[i][j]));
                        }
                    }
                    format!("{header}\n{row}\n")
                }
            }
        }
    };
    Ok(Output { text, path })
}

fn write_output(output: &Output) -> Result<(), CliError> {
    match &output.path {
        Some(p) => std::fs::write(p, &output.text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Internal(format!("cannot write stdout: {e}")))
        }
    }
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = match Cli::command().color(color).try_get_matches_from(args) {
        Ok(m) => m,
        // help and version exit 0, parse errors exit 2
        Err(e) => e.exit(),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match execute(&cli).and_then(|out| write_output(&out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
