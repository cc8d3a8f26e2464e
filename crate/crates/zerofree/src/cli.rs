//! Command-line interface.  Exit codes: 0 success, 1 verification failure,
//! 2 input error, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zerofree_core::bounds::{verify_chain, ChainOptions, CheckKind};
use zerofree_core::generators::{binomial, random_root_pgf, sharpness, SharpnessParams};
use zerofree_core::Error;

use crate::io::InputDocument;
use crate::mc;
use crate::report::{McParams, McReport, ReportDocument, VerificationOut};
use crate::sweep::{parse_k_range, parse_list, sharpness_sweep, write_csv, NSpec};
use crate::AppError;

#[derive(Debug, Parser)]
#[command(
    name = "zerofree",
    version,
    about = "Root geometry and bound verification for probability generating functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry, moments, bound shapes and corollary ratios of a distribution.
    Analyze(AnalyzeArgs),
    /// Run the verification chain and its checks.
    Verify(VerifyArgs),
    /// Write an input document for a built-in family.
    Generate(GenerateArgs),
    /// Tabulate the lattice family over a (k, R) grid as CSV.
    Sweep(SweepArgs),
    /// Monte Carlo estimate of the Brownian exit probability.
    McExit(McArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Report path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[arg(long, default_value_t = 1e-3)]
    pub s: f64,
    /// Truncation radius (default depends on delta and R).
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// gamma as a fraction of delta.
    #[arg(long, default_value_t = 0.0078125)]
    pub gamma_frac: f64,
    /// tau as a fraction of delta.
    #[arg(long, default_value_t = 0.999)]
    pub tau_frac: f64,
    /// Assumed zero-free sector half-angle (default: the measured one).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Sharpness,
    Binomial,
    Random,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long = "R-max")]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "sharpness")]
    pub family: Family,
    /// `3..8` (inclusive) or `3,4,6`.
    #[arg(long)]
    pub k_range: String,
    /// Comma-separated radii.
    #[arg(long = "R-list")]
    pub r_list: String,
    /// An integer, or `<c>k` for n = c * k.
    #[arg(long, default_value = "120k")]
    pub n: String,
    /// CSV path (stdout if omitted).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub walks: u64,
    /// Euler time step (default 1e-4 times the squared domain diameter).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("zerofree: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, AppError> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
        Command::Generate(a) => generate(a),
        Command::Sweep(a) => sweep(a),
        Command::McExit(a) => mc_exit(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| AppError::Input(format!("{}: {e}", p.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn analyze(a: AnalyzeArgs) -> Result<i32, AppError> {
    let doc = InputDocument::read(&a.input)?;
    let pgf = doc.analyze()?;
    let config = json!({ "input": a.input.display().to_string() });
    let report = ReportDocument::analyze(&pgf, "analyze", config)?;
    emit(a.out.as_deref(), &report.to_json())?;
    Ok(0)
}

fn parse_checks(s: &str) -> Result<Option<Vec<CheckKind>>, AppError> {
    if s.trim() == "all" {
        return Ok(None);
    }
    let mut out = vec![CheckKind::Sector];
    for name in s.split(',') {
        let name = name.trim();
        let k = CheckKind::from_name(name).ok_or_else(|| AppError::Input(format!("unknown check '{name}'")))?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    Ok(Some(out))
}

fn verify(a: VerifyArgs) -> Result<i32, AppError> {
    let doc = InputDocument::read(&a.input)?;
    let pgf = doc.analyze()?;
    let opts = ChainOptions {
        delta: a.delta,
        gamma_frac: a.gamma_frac,
        tau_frac: a.tau_frac,
        s: a.s,
        m: a.m,
        checks: parse_checks(&a.checks)?,
        ..ChainOptions::default()
    };
    let config = json!({
        "input": a.input.display().to_string(),
        "checks": a.checks,
        "s": a.s,
        "M": a.m,
        "gamma_frac": a.gamma_frac,
        "tau_frac": a.tau_frac,
        "delta": a.delta,
    });
    let mut report = ReportDocument::analyze(&pgf, "verify", config)?;
    match verify_chain(&pgf, &opts) {
        Ok(v) => {
            report.verification = Some(VerificationOut::from(&v));
            let failure = v.first_failure().map(|c| c.name().to_string());
            report.failure = failure.clone();
            emit(a.out.as_deref(), &report.to_json())?;
            match failure {
                Some(name) => {
                    eprintln!("zerofree: verification failed: {name}");
                    Ok(1)
                }
                None => Ok(0),
            }
        }
        Err(Error::Hypothesis { stage, detail }) => {
            report.failure = Some(stage.to_string());
            emit(a.out.as_deref(), &report.to_json())?;
            eprintln!("zerofree: verification failed: {stage}: {detail}");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, AppError> {
    v.ok_or_else(|| AppError::Input(format!("missing --{flag}")))
}

fn generate(a: GenerateArgs) -> Result<i32, AppError> {
    let doc = match a.family {
        Family::Sharpness => {
            let (k, r, n) = (need(a.k, "k")?, need(a.r, "R")?, need(a.n, "n")?);
            let pgf = sharpness(&SharpnessParams::new(k, r, n)?)?;
            InputDocument::probs(pgf.dist.probs().to_vec())
                .with_source(json!({ "family": "sharpness", "k": k, "R": r, "n": n }))
        }
        Family::Binomial => {
            let (n, p) = (need(a.n, "n")?, need(a.p, "p")?);
            let pgf = binomial(n, p)?;
            InputDocument::probs(pgf.dist.probs().to_vec()).with_source(json!({ "family": "binomial", "n": n, "p": p }))
        }
        Family::Random => {
            let degree = need(a.degree, "degree")?;
            let delta_min = need(a.delta_min, "delta-min")?;
            let r_max = need(a.r_max, "R-max")?;
            let pgf = random_root_pgf(degree, delta_min, r_max, a.seed)?;
            InputDocument::probs(pgf.dist.probs().to_vec()).with_source(json!({
                "family": "random", "degree": degree, "delta_min": delta_min, "R_max": r_max, "seed": a.seed
            }))
        }
    };
    emit(a.out.as_deref(), &doc.to_json())?;
    Ok(0)
}

fn sweep(a: SweepArgs) -> Result<i32, AppError> {
    if a.family != Family::Sharpness {
        return Err(AppError::Input("sweep supports --family sharpness only".into()));
    }
    let ks = parse_k_range(&a.k_range).map_err(AppError::Input)?;
    let rs = parse_list(&a.r_list).map_err(AppError::Input)?;
    let n: NSpec = a.n.parse().map_err(AppError::Input)?;
    let (rows, warnings) = sharpness_sweep(&ks, &rs, n)?;
    for w in warnings {
        eprintln!("zerofree: warning: {w}");
    }
    match a.csv {
        Some(p) => {
            let f = fs::File::create(&p).map_err(|e| AppError::Input(format!("{}: {e}", p.display())))?;
            write_csv(&rows, f)?;
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(0)
}

fn mc_exit(a: McArgs) -> Result<i32, AppError> {
    if a.walks == 0 {
        return Err(AppError::Input("--walks must be at least 1".into()));
    }
    let problem = mc::exit_problem(a.delta, a.eta, a.step, a.seed)?;
    let est = mc::run_parallel(&problem, a.walks);
    let params = McParams { delta: a.delta, eta: a.eta, walks: a.walks, step: problem.step, seed: a.seed };
    emit(a.out.as_deref(), &McReport::new(params, &est).to_json())?;
    Ok(0)
}
