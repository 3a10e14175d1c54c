//! Command-line front end. Exit codes: 0 when every counted report passes,
//! 1 when some check finds a violation, 2 on usage or configuration errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::arith::{self, int, rat};
use crate::axer;
use crate::bounds::{self, ScanContext};
use crate::error::{Error, Result};
use crate::identities;
use crate::mobius::{self, MuTable};
use crate::phi;
use crate::report::{self, json_f64, json_rational, Report, ResidualTracker, ScanReport, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const INFORMATIONAL: &str = "informational";
/// Upper end of the exact x·m(x) chain run by `verify gram`.
pub const GRAM_CHAIN_CAP: u64 = 1000;

#[derive(Debug, Parser)]
#[command(name = "moebius", version, about = "Verify identities and inequalities for the Möbius function")]
pub struct Cli {
    /// Sieve limit N (defaults to what the command needs)
    #[arg(long, global = true)]
    pub sieve_limit: Option<u64>,
    /// Binary sieve cache to load from or write to
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Report destination (stdout when absent)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,
    /// Seed for the random sample points
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Identity {
    #[value(name = "meissel")]
    Meissel,
    #[value(name = "macleod")]
    Macleod,
    #[value(name = "gram")]
    Gram,
    #[value(name = "vonmangoldt")]
    Vonmangoldt,
    #[value(name = "id19-20")]
    Id1920,
    #[value(name = "prop3")]
    Prop3,
    #[value(name = "prop7")]
    Prop7,
    #[value(name = "prop10")]
    Prop10,
    #[value(name = "prop6")]
    Prop6,
    #[value(name = "prop9")]
    Prop9,
    #[value(name = "eq5")]
    Eq5,
}

impl Identity {
    /// Looks up an identity by its command-line name.
    pub fn from_name(name: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(name, false).ok()
    }

    pub fn name(self) -> &'static str {
        match self {
            Identity::Meissel => "meissel",
            Identity::Macleod => "macleod",
            Identity::Gram => "gram",
            Identity::Vonmangoldt => "vonmangoldt",
            Identity::Id1920 => "id19-20",
            Identity::Prop3 => "prop3",
            Identity::Prop7 => "prop7",
            Identity::Prop10 => "prop10",
            Identity::Prop6 => "prop6",
            Identity::Prop9 => "prop9",
            Identity::Eq5 => "eq5",
        }
    }

    pub fn default_x_max(self) -> f64 {
        match self {
            Identity::Macleod => 2000.0,
            Identity::Id1920 => 2000.0,
            Identity::Prop6 | Identity::Prop9 => 1000.0,
            _ => 100_000.0,
        }
    }

    pub fn needs_table(self) -> bool {
        !matches!(self, Identity::Prop6 | Identity::Prop9 | Identity::Eq5)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the sieve (and write --cache when given)
    Sieve,
    /// Run one named verification
    Verify {
        #[arg(value_enum)]
        name: Identity,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        report_x: Option<f64>,
    },
    /// Scan |m₁| ≤ C x^{1-k}∫|M|t^{k-3}dt + D/x
    ScanConstants {
        #[arg(long)]
        k: usize,
        #[arg(long = "C")]
        c: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long)]
        x_max: Option<f64>,
    },
    /// Solve the λ-system and check Δ_k and ψ
    Lambda {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build f_α and check its propositions
    Axer {
        #[arg(long)]
        alpha_inv: Option<u64>,
        #[arg(long)]
        j_max: Option<u32>,
    },
    /// The constants table, the C = 1 probe and L(30)
    Table {
        #[arg(long)]
        x_max: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Sieve,
    Verify(Identity),
    ScanConstants,
    Lambda,
    Axer,
    Table,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub sieve_limit: Option<u64>,
    pub x_max: Option<f64>,
    pub k: Option<usize>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub report_x: Option<f64>,
    pub alpha_inv: Option<u64>,
    #[serde(rename = "J_max")]
    pub j_max: Option<u32>,
    pub cache: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub parallelism: Option<usize>,
    pub seed: u64,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let mut cfg = RunConfig {
            command: CommandKind::Sieve,
            sieve_limit: cli.sieve_limit,
            x_max: None,
            k: None,
            c: None,
            d: None,
            report_x: None,
            alpha_inv: None,
            j_max: None,
            cache: cli.cache,
            output_path: cli.output,
            format: cli.format,
            parallelism: cli.parallelism,
            seed: cli.seed,
        };
        match cli.command {
            Command::Sieve => {}
            Command::Verify { name, x_max, k, report_x } => {
                cfg.command = CommandKind::Verify(name);
                cfg.x_max = x_max;
                cfg.k = k;
                cfg.report_x = report_x;
            }
            Command::ScanConstants { k, c, d, x_max } => {
                cfg.command = CommandKind::ScanConstants;
                cfg.k = Some(k);
                cfg.c = Some(c);
                cfg.d = Some(d);
                cfg.x_max = x_max;
            }
            Command::Lambda { k } => {
                cfg.command = CommandKind::Lambda;
                cfg.k = k;
            }
            Command::Axer { alpha_inv, j_max } => {
                cfg.command = CommandKind::Axer;
                cfg.alpha_inv = alpha_inv;
                cfg.j_max = j_max;
            }
            Command::Table { x_max } => {
                cfg.command = CommandKind::Table;
                cfg.x_max = x_max;
            }
        }
        cfg
    }
}

impl RunConfig {
    fn command_name(&self) -> String {
        match self.command {
            CommandKind::Sieve => "sieve".into(),
            CommandKind::Verify(id) => format!("verify {}", id.name()),
            CommandKind::ScanConstants => "scan-constants".into(),
            CommandKind::Lambda => "lambda".into(),
            CommandKind::Axer => "axer".into(),
            CommandKind::Table => "table".into(),
        }
    }

    fn x_max_or(&self, default: f64) -> Result<u64> {
        let x = self.x_max.unwrap_or(default);
        if !x.is_finite() || x < 1.0 {
            return Err(Error::InvalidArgument(format!("--x-max must be >= 1, got {x}")));
        }
        Ok(x.floor() as u64)
    }

    /// The sieve size the command needs, checked against --sieve-limit.
    fn sieve_target(&self, needed: u64) -> Result<u64> {
        match self.sieve_limit {
            Some(limit) if needed > limit => Err(Error::OutOfRange {
                x: needed as f64,
                limit: limit as f64,
            }),
            Some(limit) => Ok(limit),
            None => Ok(needed),
        }
    }
}

/// Everything a run produced.
#[derive(Debug, Serialize)]
pub struct RunOutput {
    pub command: String,
    pub config: RunConfig,
    pub reports: Vec<Report>,
    #[serde(skip)]
    pub axer_rows: Vec<axer::AxerRow>,
    pub wall_time_s: f64,
}

impl RunOutput {
    /// Reports that decide the exit code.
    pub fn counted(&self) -> impl Iterator<Item = &Report> {
        self.reports.iter().filter(|r| !is_informational(r))
    }

    pub fn exit_code(&self) -> i32 {
        if self.counted().all(Report::passed) {
            EXIT_PASS
        } else {
            EXIT_VIOLATION
        }
    }
}

fn is_informational(r: &Report) -> bool {
    let details = match r {
        Report::Verification(v) => &v.details,
        Report::Scan(s) => &s.details,
    };
    details.get(INFORMATIONAL).and_then(|v| v.as_bool()).unwrap_or(false)
}

/// Loads the cached table when it is large enough, otherwise sieves and
/// refreshes the cache.
pub fn acquire_table(limit: u64, cache: Option<&Path>) -> Result<MuTable> {
    if let Some(path) = cache {
        if path.exists() {
            let t = mobius::load_table(path)?;
            if t.limit() >= limit {
                return Ok(t);
            }
        }
    }
    let t = mobius::build_mu_sieve(limit)?;
    if let Some(path) = cache {
        mobius::save_table(&t, path)?;
    }
    Ok(t)
}

fn table_for(cfg: &RunConfig, needed: u64) -> Result<MuTable> {
    acquire_table(cfg.sieve_target(needed)?, cfg.cache.as_deref())
}

/// Executes the configured command inside a pool of the requested size.
pub fn execute(cfg: RunConfig) -> Result<RunOutput> {
    let pool = match cfg.parallelism {
        Some(0) => return Err(Error::InvalidArgument("--parallelism must be >= 1".into())),
        Some(p) => rayon::ThreadPoolBuilder::new().num_threads(p),
        None => rayon::ThreadPoolBuilder::new(),
    }
    .build()
    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let start = Instant::now();
    let (reports, axer_rows) = pool.install(|| dispatch(&cfg))?;
    Ok(RunOutput {
        command: cfg.command_name(),
        config: cfg,
        reports,
        axer_rows,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

type Produced = (Vec<Report>, Vec<axer::AxerRow>);

fn dispatch(cfg: &RunConfig) -> Result<Produced> {
    match cfg.command {
        CommandKind::Sieve => run_sieve(cfg),
        CommandKind::Verify(id) => run_verify(cfg, id).map(|r| (r, Vec::new())),
        CommandKind::ScanConstants => run_scan_constants(cfg).map(|r| (vec![r.into()], Vec::new())),
        CommandKind::Lambda => run_lambda(cfg).map(|r| (r, Vec::new())),
        CommandKind::Axer => run_axer(cfg),
        CommandKind::Table => run_table(cfg).map(|r| (r, Vec::new())),
    }
}

fn run_sieve(cfg: &RunConfig) -> Result<Produced> {
    let limit = cfg.sieve_limit.unwrap_or(100_000);
    let t = acquire_table(limit, cfg.cache.as_deref())?;
    let mut tr = ResidualTracker::exact("sieve");
    // spot-check against trial division at the top of the range
    let lo = t.limit().saturating_sub(99).max(1);
    for n in lo..=t.limit() {
        tr.observe_exact(n as f64, int(i64::from(t.mu(n) - mobius::trial_mu(n))));
    }
    let mut r = tr.finish();
    r.detail("limit", json!(t.limit()));
    r.detail("M(limit)", json!(t.mertens_at(t.limit())));
    if let Some(p) = &cfg.cache {
        r.detail("cache", json!(p.display().to_string()));
    }
    Ok((vec![r.into()], Vec::new()))
}

fn run_verify(cfg: &RunConfig, id: Identity) -> Result<Vec<Report>> {
    let x_max = cfg.x_max_or(id.default_x_max())?;
    let needed = match id {
        Identity::Macleod => x_max.max(500),
        _ => x_max,
    };
    let t = if id.needs_table() { Some(table_for(cfg, needed)?) } else { None };
    verify_named(id, t.as_ref(), x_max, cfg.k, cfg.report_x, cfg.seed)
}

/// Runs one named verification against an existing table. Identities that
/// need the table fail with `InvalidArgument` when it is absent.
pub fn verify_named(
    id: Identity,
    t: Option<&MuTable>,
    x_max: u64,
    k: Option<usize>,
    report_x: Option<f64>,
    seed: u64,
) -> Result<Vec<Report>> {
    let t = match (t, id.needs_table()) {
        (None, true) => return Err(Error::InvalidArgument(format!("{} needs a sieved table", id.name()))),
        (t, _) => t,
    };
    let reports: Vec<Report> = match id {
        Identity::Meissel => vec![identities::verify_meissel(t.unwrap(), x_max, 1000, seed)?.into()],
        Identity::Macleod => {
            let k = k.unwrap_or(8);
            vec![identities::verify_macleod_range(t.unwrap(), k, x_max, 200, 500, seed)?.into()]
        }
        Identity::Gram => {
            let t = t.unwrap();
            vec![
                identities::verify_gram_bound(t, x_max, 1e-9)?.into(),
                identities::verify_gram_chain_range(t, 2, x_max.clamp(2, GRAM_CHAIN_CAP))?.into(),
            ]
        }
        Identity::Vonmangoldt => {
            let t = t.unwrap();
            vec![
                identities::verify_vonmangoldt_box(t, x_max, report_x)?.into(),
                identities::verify_log_mean_integral(t, x_max, 1e-8)?.into(),
            ]
        }
        Identity::Id1920 => {
            let t = t.unwrap();
            vec![
                identities::verify_identity_19_20(t, x_max, 200, seed, 1e-8)?.into(),
                identities::verify_identity_8(t, x_max.min(500), 50, seed)?.into(),
            ]
        }
        Identity::Prop3 | Identity::Prop7 | Identity::Prop10 => {
            let ctx = ScanContext::new(t.unwrap(), x_max)?;
            let r = match id {
                Identity::Prop3 => bounds::check_prop3(&ctx)?,
                Identity::Prop7 => bounds::check_prop7(&ctx)?,
                _ => bounds::check_prop10(&ctx)?,
            };
            vec![r.into()]
        }
        Identity::Prop6 => vec![identities::verify_prop6(10_000, 1.0, x_max as f64, seed, 1e-10)?.into()],
        Identity::Prop9 => vec![identities::check_prop9(10_000, 1.0, x_max as f64, seed, 1e-9)?.into()],
        Identity::Eq5 => {
            let k = k.unwrap_or(8);
            vec![identities::verify_eq5(k, phi::DEFAULT_TAIL_CUTOFF)?.into()]
        }
    };
    Ok(reports)
}

fn run_scan_constants(cfg: &RunConfig) -> Result<ScanReport> {
    let (k, c, d) = (cfg.k.unwrap_or(4), cfg.c.unwrap_or(1.0), cfg.d.unwrap_or(2.1));
    let x_max = cfg.x_max_or(100_000.0)?;
    let t = table_for(cfg, x_max)?;
    let ctx = ScanContext::new(&t, x_max)?;
    bounds::scan_constants(&ctx, k, c, d)
}

/// λ residuals, Δ_k direct against the recurrence on k..=3k, Δ_k(2k) ≠ 0,
/// and φ = x - c_k + ψ at a few rationals, for one k.
pub fn lambda_report(k: usize) -> Result<VerificationReport> {
    let sol = bounds::solve_lambda_system(k)?;
    let mut tr = ResidualTracker::exact(&format!("lambda-k{k}"));
    for (i, r) in bounds::lambda_residuals(&sol).into_iter().enumerate() {
        tr.observe_exact(i as f64, r);
    }
    let mut delta_ok = true;
    for x in k..=3 * k {
        let x = int(x as i64);
        delta_ok &= bounds::delta_k_direct(k, &x) == bounds::delta_k_recurrence(k, &x);
    }
    let delta_2k = bounds::delta_k_direct(k, &int(2 * k as i64));
    let mut psi_ok = true;
    for x in [int(1), rat(3, 2), rat(37, 3), rat(1001, 7)] {
        psi_ok &= bounds::psi_consistency(&sol, &x)?.is_zero();
    }
    let (psi_c, psi_x) = bounds::psi_prime_constant(&sol, 1000.0, 20_000)?;
    let mut r = tr.finish();
    r.detail("k", json!(k));
    r.detail("lambdas", sol.to_json()["lambdas"].clone());
    r.detail("c_k", json_rational(&sol.c_k));
    r.detail("delta_2k", json_rational(&delta_2k));
    r.detail("sup_abs_psi_prime_x^2k", json_f64(psi_c));
    r.detail("sup_argmax", json_f64(psi_x));
    r.require("delta_direct_equals_recurrence", delta_ok);
    r.require("delta_2k_nonzero", !delta_2k.is_zero());
    r.require("phi_equals_x_minus_c_plus_psi", psi_ok);
    Ok(r)
}

fn run_lambda(cfg: &RunConfig) -> Result<Vec<Report>> {
    let ks: Vec<usize> = match cfg.k {
        Some(k) => vec![k],
        None => (1..=10).collect(),
    };
    ks.into_iter().map(|k| lambda_report(k).map(Report::from)).collect()
}

fn run_axer(cfg: &RunConfig) -> Result<Produced> {
    let a = axer::build_axer(cfg.alpha_inv.unwrap_or(12), cfg.j_max.unwrap_or(1))?;
    let reports = axer::verify_axer(&a)?;
    let rows = axer::prop15_diagnostic(&a)?;
    Ok((reports.into_iter().map(Report::from).collect(), rows))
}

fn run_table(cfg: &RunConfig) -> Result<Vec<Report>> {
    let x_max = cfg.x_max_or(100_000.0)?;
    let t = table_for(cfg, x_max.max(30))?;
    let ctx = ScanContext::new(&t, x_max)?;
    let mut reports: Vec<Report> = Vec::new();
    for (k, c, d) in bounds::CONSTANT_TABLE {
        let mut r = bounds::scan_constants(&ctx, k, c, d)?;
        r.rows.clear();
        reports.push(r.into());
    }
    let (k, c, d) = bounds::QUESTION2_PROBE;
    let mut probe = bounds::scan_constants(&ctx, k, c, d)?;
    probe.rows.clear();
    probe.identity = "question2-probe".into();
    probe.detail(INFORMATIONAL, json!(true));
    reports.push(probe.into());
    reports.push(identities::verify_vonmangoldt_box(&t, x_max.max(30), Some(30.0))?.into());
    let from = 1000.min(x_max);
    let mut diag = ResidualTracker::float("limsup-diagnostics", f64::INFINITY).finish();
    diag.detail("eq12", bounds::eq12_diagnostic(&ctx, from, 0.05).to_json());
    diag.detail("eq14", bounds::eq14_diagnostic(&ctx, from, 0.0).to_json());
    diag.detail(INFORMATIONAL, json!(true));
    reports.push(diag.into());
    Ok(reports)
}

/// Writes the report in the configured format.
pub fn write_output<W: Write>(out: &RunOutput, w: W) -> Result<()> {
    match out.config.format {
        Format::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, out)?;
            writeln!(w)?;
            Ok(())
        }
        Format::Csv => {
            if out.config.command == CommandKind::Axer {
                return axer::write_axer_csv(&out.axer_rows, w);
            }
            let scans: Vec<&ScanReport> = out
                .reports
                .iter()
                .filter_map(|r| match r {
                    Report::Scan(s) if !s.rows.is_empty() => Some(s),
                    _ => None,
                })
                .collect();
            if scans.len() == out.reports.len() {
                report::write_scan_csv(&scans, w)
            } else {
                report::write_summary_csv(&out.reports, w)
            }
        }
    }
}

/// One human-readable line per report.
pub fn summary_line(r: &Report) -> String {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let tag = if is_informational(r) { " (informational)" } else { "" };
    match r {
        Report::Verification(v) => format!(
            "{verdict} {}{tag}: {} points, max residual {} at x = {}",
            v.identity,
            v.points,
            residual_text(&v.max_residual),
            arith::format_f64(v.worst_x)
        ),
        Report::Scan(s) => format!(
            "{verdict} {}{}{tag}: {} points, min margin {} at x = {}",
            s.identity,
            s.k.map(|k| format!(" k={k}")).unwrap_or_default(),
            s.points,
            arith::format_f64(s.min_margin),
            arith::format_f64(s.argmin_x)
        ),
    }
}

fn residual_text(r: &report::Residual) -> String {
    match r {
        report::Residual::Exact(q) => arith::format_rational(q),
        report::Residual::Float(v) => arith::format_f64(*v),
    }
}

/// Runs a configuration end to end and returns the exit code.
pub fn run(cfg: RunConfig) -> i32 {
    let out = match execute(cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::DuplicateKey(_) => EXIT_VIOLATION,
                _ => EXIT_USAGE,
            };
        }
    };
    for r in &out.reports {
        eprintln!("{}", summary_line(r));
    }
    let written = match &out.config.output_path {
        Some(p) => File::create(p).map_err(Error::from).and_then(|f| write_output(&out, BufWriter::new(f))),
        None => write_output(&out, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    out.exit_code()
}

/// Parses arguments and runs; clap handles --help and --version.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.into()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        Cli::try_parse_from(std::iter::once("moebius").chain(args.iter().copied()))
            .unwrap()
            .into()
    }

    #[test]
    fn parses_commands() {
        let c = parse(&["verify", "id19-20", "--x-max", "50"]);
        assert_eq!(c.command, CommandKind::Verify(Identity::Id1920));
        assert_eq!(c.x_max, Some(50.0));
        let c = parse(&["--format", "csv", "scan-constants", "--k", "4", "--C", "1.0", "--D", "2.1"]);
        assert_eq!((c.k, c.c, c.d), (Some(4), Some(1.0), Some(2.1)));
        assert_eq!(c.format, Format::Csv);
        let c = parse(&["axer", "--alpha-inv", "3", "--j-max", "0", "--parallelism", "2"]);
        assert_eq!((c.alpha_inv, c.j_max, c.parallelism), (Some(3), Some(0), Some(2)));
        assert!(Cli::try_parse_from(["moebius", "verify", "nope"]).is_err());
    }

    #[test]
    fn x_max_beyond_sieve_is_a_usage_error() {
        let c = parse(&["--sieve-limit", "100", "verify", "meissel", "--x-max", "1000"]);
        assert!(matches!(execute(c), Err(Error::OutOfRange { .. })));
        let c = parse(&["--parallelism", "0", "lambda"]);
        assert!(execute(c).is_err());
    }

    #[test]
    fn vonmangoldt_reports_l30() {
        let c = parse(&["verify", "vonmangoldt", "--x-max", "30", "--report-x", "30"]);
        let out = execute(c).unwrap();
        assert_eq!(out.exit_code(), EXIT_PASS);
        let Report::Verification(v) = &out.reports[0] else { panic!() };
        let l30 = v.details.values().filter_map(|v| v.as_f64()).any(|v| (v - 1.00302).abs() < 2e-5);
        assert!(l30, "{:?}", v.details);
    }

    #[test]
    fn lambda_reports_pass() {
        let out = execute(parse(&["lambda", "--k", "3"])).unwrap();
        assert_eq!(out.reports.len(), 1);
        assert_eq!(out.exit_code(), EXIT_PASS);
    }

    #[test]
    fn informational_reports_do_not_count() {
        let out = execute(parse(&["table", "--x-max", "300"])).unwrap();
        assert_eq!(out.reports.len(), 8);
        assert_eq!(out.counted().count(), 6);
    }
}
