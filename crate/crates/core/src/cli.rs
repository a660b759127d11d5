//! Command-line front end of the `lowdim` binary.
//!
//! Every subcommand is a plain function over parsed arguments so it can be
//! driven from tests; [`run`] maps results to exit codes (0 success, 1 a
//! failed check, 2 usage or configuration error).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cutout::{Block, CutoutSet, GapSequence, GapSpec, GrowthRule, LiminfWindow};
use crate::error::{Error, Result};
use crate::metric_cover::{cover_report, Ball, IntervalUnion};
use crate::spectrum::{
    empirical_spectrum_point, format_sig, full_report, run_suite, theta_grid, Approximation, Check,
    ReportConfig, SuiteConfig, Tolerances,
};

#[derive(Debug, Parser)]
#[command(name = "lowdim", version, about = "Lower Assouad type dimensions of cut-out sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a gap-sequence document and print its ratio table.
    GenGaps(GenGapsArgs),
    /// Exact spectrum over a θ grid, as CSV.
    Spectrum(SpectrumArgs),
    /// The five-dimension report at one θ.
    Dims(DimsArgs),
    /// Run the verification suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Covering and packing numbers of an explicit interval list.
    CoverOracle(CoverOracleArgs),
}

#[derive(Debug, Args)]
pub struct GenGapsArgs {
    /// ternary | uniform-ratio | example
    #[arg(long, default_value = "example")]
    pub kind: String,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 0.4)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub beta: f64,
    /// Emit an explicit document with this many level gaps instead.
    #[arg(long)]
    pub explicit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Gap document: a file path or inline JSON.
    #[arg(long)]
    pub gaps: String,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    #[arg(long, default_value_t = 2000)]
    pub horizon: usize,
    /// start:stop:step
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub theta: String,
    /// kmin:kmax; automatic per θ when absent
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// name=value, repeatable
    #[arg(long = "tol")]
    pub tol: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Add an empirical column from the covering oracle.
    #[arg(long)]
    pub empirical: bool,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 0.5)]
    pub theta_star: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Check to run, repeatable; all when absent.
    #[arg(long = "check")]
    pub checks: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CoverOracleArgs {
    /// a:b,c:d,… ; endpoints may be fractions such as 1/3
    #[arg(long, allow_hyphen_values = true)]
    pub intervals: String,
    /// center:radius
    #[arg(long)]
    pub ball: Option<String>,
    #[arg(long)]
    pub r: String,
}

/// Validated run settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub gaps: GapSpec,
    pub depth: usize,
    pub horizon: usize,
    pub theta_grid: (f64, f64, f64),
    pub window: Option<LiminfWindow>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let gaps = read_gap_spec(&args.gaps)?;
        let theta = parse_triple(&args.theta)?;
        let (start, stop, step) = theta;
        if !(start > 0.0 && start < stop && stop < 1.0 && step > 0.0) {
            return Err(Error::Config(format!(
                "--theta needs 0 < start < stop < 1 and step > 0, got {}",
                args.theta
            )));
        }
        if args.depth > args.horizon {
            return Err(Error::Config(format!("--depth {} exceeds --horizon {}", args.depth, args.horizon)));
        }
        let window = args.window.as_deref().map(parse_window).transpose()?;
        let mut tolerances = Tolerances::default();
        for item in &args.tol {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--tol expects name=value, got {item:?}")))?;
            tolerances.set(name.trim(), parse_number(value)?)?;
        }
        Ok(Self {
            gaps,
            depth: args.depth,
            horizon: args.horizon,
            theta_grid: theta,
            window,
            seed: args.seed,
            tolerances,
            output_path: args.out.clone(),
        })
    }

    pub fn build_set(&self) -> Result<CutoutSet> {
        CutoutSet::build(GapSequence::from_spec(&self.gaps)?, self.depth, self.horizon)
    }

    pub fn thetas(&self) -> Result<Vec<f64>> {
        let (a, b, h) = self.theta_grid;
        theta_grid(a, b, h)
    }
}

fn read_gap_spec(source: &str) -> Result<GapSpec> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| Error::Config(format!("cannot read gap file {source}: {e}")))?
    };
    GapSpec::from_json(&text)
}

/// A decimal number or a fraction `p/q`.
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad_number(text))?;
            let q: f64 = q.trim().parse().map_err(|_| bad_number(text))?;
            p / q
        }
        None => text.parse().map_err(|_| bad_number(text))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad_number(text))
    }
}

fn bad_number(text: &str) -> Error {
    Error::Config(format!("not a number: {text:?}"))
}

fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("expected a:b, got {text:?}")))?;
    Ok((parse_number(a)?, parse_number(b)?))
}

fn parse_triple(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("expected start:stop:step, got {text:?}")));
    }
    Ok((parse_number(parts[0])?, parse_number(parts[1])?, parse_number(parts[2])?))
}

fn parse_window(text: &str) -> Result<LiminfWindow> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("expected kmin:kmax, got {text:?}")))?;
    let a = a.trim().parse().map_err(|_| bad_number(a))?;
    let b = b.trim().parse().map_err(|_| bad_number(b))?;
    LiminfWindow::new(a, b)
}

/// Parses `a:b,c:d,…`; an empty string is the empty set.
pub fn parse_intervals(text: &str) -> Result<IntervalUnion> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.push(parse_pair(part)?);
    }
    if out.windows(2).any(|w| w[0].1 >= w[1].0) {
        return Err(Error::InvalidIntervals("intervals must be disjoint".into()));
    }
    IntervalUnion::new(out)
}

/// Result of a subcommand: text for stdout or the output file, and whether
/// every check passed.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

pub fn cmd_gen_gaps(args: &GenGapsArgs) -> Result<(String, String)> {
    let spec = match args.kind.as_str() {
        "ternary" => GapSpec::Ternary,
        "uniform-ratio" => GapSpec::UniformRatio {
            d: args.d.ok_or_else(|| Error::Config("uniform-ratio needs --d".into()))?,
        },
        "example" => {
            if !(args.alpha < args.beta) {
                return Err(Error::InvalidParameter(format!(
                    "require α < β (α = {}, β = {})",
                    args.alpha, args.beta
                )));
            }
            GapSpec::Example { alpha: args.alpha, beta: args.beta, growth: GrowthRule::Default }
        }
        other => return Err(Error::Config(format!("unknown gap kind {other:?}"))),
    };
    let gaps = GapSequence::from_spec(&spec)?;
    let table_len = 50;
    let log_s = gaps.log_scales(args.explicit.unwrap_or(0).max(table_len))?;
    let mut table = String::from("k,ratio,block\n");
    for k in 1..=table_len {
        let block = match gaps.block(k) {
            Some(Block::Alpha) => "alpha",
            Some(Block::Beta) => "beta",
            None => "",
        };
        writeln!(table, "{k},{},{block}", format_sig((log_s[k] - log_s[k - 1]).exp())).unwrap();
    }
    let document = match args.explicit {
        Some(n) => {
            let levels = explicit_levels(&gaps, &log_s, n)?;
            GapSequence::explicit(levels)?.spec().to_json()
        }
        None => spec.to_json(),
    };
    Ok((document, table))
}

fn explicit_levels(gaps: &GapSequence, log_s: &[f64], n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Config("--explicit needs at least 2 levels".into()));
    }
    (1..=n)
        .map(|k| {
            let g = gaps.relative_gap(k, log_s[k - 1], log_s[k]) * log_s[k - 1].exp();
            if g > 0.0 {
                Ok(g)
            } else {
                Err(Error::Config(format!("level {k} gap underflows; use fewer --explicit levels")))
            }
        })
        .collect()
}

pub fn cmd_spectrum(config: &RunConfig, empirical: bool) -> Result<Output> {
    let set = config.build_set()?;
    let thetas = config.thetas()?;
    let curve = crate::spectrum::SpectrumCurve::exact(&set, &thetas, config.window)?;
    let mut extra = vec![("running_min", curve.running_min())];
    if empirical {
        let level = set.resolvable_depth().min(config.depth);
        let approx = Approximation::of(&set, level)?;
        let endpoints = approx.union.endpoints();
        let stride = (endpoints.len() / 256).max(1);
        let centers: Vec<f64> = endpoints.iter().step_by(stride).copied().collect();
        let column = thetas
            .par_iter()
            .map(|&theta| {
                let radii: Vec<f64> = (1..=level)
                    .filter_map(|k| set.scale(k).ok().map(f64::exp))
                    .filter(|r| r.powf(1.0 / theta) >= approx.resolution)
                    .collect();
                if radii.is_empty() {
                    return Ok(f64::NAN);
                }
                empirical_spectrum_point(&approx, theta, &radii, &centers)
            })
            .collect::<Result<Vec<_>>>()?;
        extra.push(("empirical", column));
    }
    Ok(Output { text: curve.to_csv_with(&extra)?, ok: true })
}

pub fn cmd_dims(config: &RunConfig, theta_star: f64) -> Result<Output> {
    let set = config.build_set()?;
    let report_config = ReportConfig { window: config.window, tol_chain: config.tolerances.chain, ..ReportConfig::default() };
    let report = full_report(&set, theta_star, &report_config)?;
    Ok(Output { text: report.to_text(), ok: report.chain_ok })
}

pub fn cmd_verify(config: &RunConfig, checks: &[Check]) -> Result<Output> {
    let set = config.build_set()?;
    let suite = SuiteConfig {
        window: config.window,
        tolerances: config.tolerances,
        seed: config.seed,
        approximation_level: config.depth,
        ..SuiteConfig::default()
    };
    let selected = if checks.is_empty() { Check::ALL.to_vec() } else { checks.to_vec() };
    let outcomes = run_suite(&set, &suite, &selected)?;
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
    }
    Ok(Output { text, ok: outcomes.iter().all(|o| o.passed) })
}

pub fn cmd_cover_oracle(args: &CoverOracleArgs) -> Result<Output> {
    let set = parse_intervals(&args.intervals)?;
    let r = parse_number(&args.r)?;
    if !(r > 0.0) {
        return Err(Error::Config(format!("--r must be positive, got {r}")));
    }
    let ball = match &args.ball {
        Some(b) => {
            let (c, radius) = parse_pair(b)?;
            Some(Ball::new(c, radius)?)
        }
        None => None,
    };
    let rep = cover_report(&set, ball, r);
    let text = format!(
        "N_r = {}\nM_r = {}\nM_4r = {}\nsandwich = {}\n",
        rep.n_cover,
        rep.m_pack,
        rep.m_pack_4r,
        if rep.sandwich_ok() { "ok" } else { "violated" }
    );
    Ok(Output { text, ok: rep.sandwich_ok() })
}

fn describe(e: &Error) -> String {
    match e {
        Error::HorizonTooSmall { .. } => format!("{e} (pass a larger --horizon)"),
        Error::Resolution { .. } => format!("{e} (pass a larger --depth)"),
        _ => e.to_string(),
    }
}

fn emit(out_path: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write output: {e}"))),
    }
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<bool> {
    match command {
        Command::GenGaps(args) => {
            let (document, table) = cmd_gen_gaps(args)?;
            emit(args.out.as_ref(), &(document + "\n"), stdout)?;
            emit(None, &table, stdout)?;
            Ok(true)
        }
        Command::Spectrum(args) => {
            let config = RunConfig::from_args(&args.run)?;
            let output = cmd_spectrum(&config, args.empirical)?;
            emit(config.output_path.as_ref(), &output.text, stdout)?;
            Ok(output.ok)
        }
        Command::Dims(args) => {
            let config = RunConfig::from_args(&args.run)?;
            let output = cmd_dims(&config, args.theta_star)?;
            emit(config.output_path.as_ref(), &output.text, stdout)?;
            Ok(output.ok)
        }
        Command::Verify(args) => {
            let config = RunConfig::from_args(&args.run)?;
            let checks = args.checks.iter().map(|c| c.parse()).collect::<Result<Vec<Check>>>()?;
            let output = cmd_verify(&config, &checks)?;
            emit(config.output_path.as_ref(), &output.text, stdout)?;
            Ok(output.ok)
        }
        Command::CoverOracle(args) => {
            let output = cmd_cover_oracle(args)?;
            emit(None, &output.text, stdout)?;
            Ok(output.ok)
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", describe(&e));
            2
        }
    }
}
