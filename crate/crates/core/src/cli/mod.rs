//! Command-line driver: `transform`, `verify` and `sweep`.

pub mod config;
pub mod pipeline;
pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::potentials::OscillatorParams;

use config::{seed_tolerance, Family, GaugeSpec, Pipeline, PipelineConfig, WindowSpec};
use report::{fmt_num, write_file, Outcome, RunReport, FAILED, PASSED};
use suites::Suite;

pub const DEFAULT_OUT_DIR: &str = "riccati-forge-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "riccati-forge", version, about = "Riccati/Darboux transformations of solvable Schrodinger problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a transformation and write curves (CSV) and a report (JSON).
    Transform(CommonArgs),
    /// Run checks only; no curve data.
    Verify(VerifyArgs),
    /// Run one pipeline per grid value of a parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// oscillator | coulomb
    #[arg(long)]
    family: Option<String>,
    /// shifted | unshifted
    #[arg(long)]
    variant: Option<String>,
    /// T1 | T2 | T3 | INTERTWINE
    #[arg(long)]
    theorem: Option<String>,
    /// osc-7.1 | coul-7.2 | coul-7.3 | coul-7.4
    #[arg(long)]
    example: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    l: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Constant gauge value, or "example"
    #[arg(long, allow_negative_numbers = true)]
    gauge: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    window_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    window_hi: Option<f64>,
    /// Sample count for curve output [default: 2000]
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// JSON config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// group-law | orthonormality | all
    #[arg(long)]
    suite: Option<String>,
    /// Highest state index for orthonormality
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// l | b | q | k
    #[arg(long)]
    param: Option<String>,
    /// Comma-separated values
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
}

impl CommonArgs {
    fn to_config(&self) -> Result<PipelineConfig> {
        let base = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        let mut flags = PipelineConfig {
            family: self.family.clone(),
            variant: self.variant.clone(),
            theorem: self.theorem.clone(),
            example: self.example.clone(),
            gauge: self.gauge.as_ref().map(|g| match g.parse::<f64>() {
                Ok(c) => GaugeSpec::Constant(c),
                Err(_) => GaugeSpec::Named(g.clone()),
            }),
            samples: self.samples,
            out_dir: self.out_dir.clone(),
            ..PipelineConfig::default()
        };
        for (name, v) in [("l", self.l), ("b", self.b), ("q", self.q), ("k", self.k)] {
            if let Some(v) = v {
                flags.set_param(name, v);
            }
        }
        if self.window_lo.is_some() || self.window_hi.is_some() {
            let current = base.window.unwrap_or(WindowSpec {
                lo: crate::fnspace::WINDOW_LO,
                hi: crate::fnspace::WINDOW_HI,
            });
            flags.window = Some(WindowSpec {
                lo: self.window_lo.unwrap_or(current.lo),
                hi: self.window_hi.unwrap_or(current.hi),
            });
        }
        Ok(base.overlay(flags))
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Transform(a) => transform(&a),
        Command::Verify(a) => verify(&a),
        Command::Sweep(a) => sweep(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

/// Config and parameter problems are usage errors; everything else is a
/// failed run.
fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Parameter(_) | Error::NotNormalizable(_) | Error::Argument(_))
}

fn out_dir(cfg: &PipelineConfig) -> PathBuf {
    cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Artifact {
    Csv,
    Report,
}

fn artifacts(cfg: &PipelineConfig) -> Result<Vec<Artifact>> {
    if cfg.outputs.is_empty() {
        return Ok(vec![Artifact::Csv, Artifact::Report]);
    }
    cfg.outputs
        .iter()
        .map(|o| match o.as_str() {
            "csv" => Ok(Artifact::Csv),
            "report" => Ok(Artifact::Report),
            _ => Err(Error::Config(format!("outputs may contain csv and report, got '{o}'"))),
        })
        .collect()
}

/// A failed computation becomes a failed check so files are still written.
fn run_or_fail(p: &Pipeline, with_table: bool) -> std::result::Result<Outcome, Error> {
    match pipeline::run(p, with_table) {
        Ok(o) => Ok(o),
        Err(e) if is_usage_error(&e) => Err(e),
        Err(e) => {
            let mut o = Outcome::default();
            o.at_most("pipeline", f64::NAN, 0.0);
            o.diag("error", e.to_string());
            Ok(o)
        }
    }
}

fn print_summary(report: &RunReport) {
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} = {:.3e} (threshold {:.1e})", c.name, c.value, c.threshold);
    }
    if let Some(Value::String(e)) = report.diagnostics.get("error") {
        println!("error: {e}");
    }
    for path in &report.outputs {
        println!("wrote {path}");
    }
    println!("status: {}", report.status);
}

fn finish(report: &RunReport) -> i32 {
    print_summary(report);
    if report.passed() {
        EXIT_OK
    } else {
        eprintln!("{FAILED}: {}", report.failures.join("; "));
        EXIT_CHECKS_FAILED
    }
}

fn transform(args: &CommonArgs) -> Result<i32> {
    let start = Instant::now();
    let cfg = args.to_config()?;
    let wanted = artifacts(&cfg)?;
    let pipeline = cfg.resolve()?;
    let outcome = run_or_fail(&pipeline, true)?;
    let dir = out_dir(&cfg);
    let stem = pipeline.stem();
    let mut report = RunReport::new("transform", stem.clone(), pipeline.parameters(), &outcome);
    if wanted.contains(&Artifact::Csv) {
        if let Some(t) = &outcome.table {
            report.outputs.push(path_string(&write_file(&dir, &format!("{stem}.csv"), &t.to_csv())?));
        }
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    if wanted.contains(&Artifact::Report) {
        let path = dir.join(format!("{stem}.report.json"));
        report.outputs.push(path_string(&path));
        write_file(&dir, &format!("{stem}.report.json"), &report.to_json())?;
    }
    Ok(finish(&report))
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let start = Instant::now();
    let mut cfg = args.common.to_config()?;
    if args.suite.is_some() {
        cfg.suite = args.suite.clone();
    }
    if args.kmax.is_some() {
        cfg.kmax = args.kmax;
    }
    let (name, parameters, outcome) = match cfg.suite.as_deref() {
        Some(s) => {
            let suite: Suite = s.parse()?;
            let tol = seed_tolerance()?;
            let mut o = Outcome::default();
            let mut parameters = BTreeMap::new();
            parameters.insert("suite".to_string(), json!(s));
            parameters.insert("seed_tol".to_string(), json!(tol));
            if matches!(suite, Suite::GroupLaw | Suite::All) {
                suites::group_law(&mut o, tol)?;
            }
            if matches!(suite, Suite::Orthonormality | Suite::All) {
                let family = suite_family(&cfg)?;
                let kmax = cfg.kmax.unwrap_or(4);
                parameters.insert("kmax".to_string(), json!(kmax));
                parameters.insert("family".to_string(), json!(family.name()));
                suites::orthonormality(&mut o, &family, kmax)?;
            }
            (format!("suite-{s}"), parameters, o)
        }
        None => {
            let pipeline = cfg.resolve()?;
            (pipeline.stem(), pipeline.parameters(), run_or_fail(&pipeline, false)?)
        }
    };
    let mut report = RunReport::new("verify", name.clone(), parameters, &outcome);
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    if let Some(dir) = &cfg.out_dir {
        let file = format!("{name}.verify.json");
        report.outputs.push(path_string(&dir.join(&file)));
        write_file(dir, &file, &report.to_json())?;
    }
    Ok(finish(&report))
}

/// Family for the orthonormality suite; oscillator `l = 0, b = 2` unless
/// one is configured.
fn suite_family(cfg: &PipelineConfig) -> Result<Family> {
    if cfg.family.is_none() {
        return Ok(Family::Oscillator(OscillatorParams::new(
            cfg.params.get("l").copied().unwrap_or(0.0),
            cfg.params.get("b").copied().unwrap_or(2.0),
            false,
        )?));
    }
    let mut probe = cfg.clone();
    probe.theorem = Some("T1".into());
    probe.example = None;
    probe.gauge = None;
    match probe.resolve()?.kind {
        config::PipelineKind::Family { family, .. } => Ok(family),
        config::PipelineKind::Example { .. } => unreachable!("example cleared"),
    }
}

/// Output name when the first grid point does not validate.
fn sweep_stem(cfg: &PipelineConfig) -> Result<String> {
    if let Some(e) = &cfg.example {
        return Ok(e.parse::<crate::potentials::Example>()?.name().to_string());
    }
    let family = cfg.family.clone().unwrap_or_default().to_ascii_lowercase();
    let theorem: config::Theorem = cfg.theorem.as_deref().unwrap_or("INTERTWINE").parse()?;
    Ok(format!("{family}-{}", theorem.to_string().to_ascii_lowercase()))
}

/// One sweep row.
struct SweepPoint {
    value: f64,
    norm: Option<f64>,
    max_residual: Option<f64>,
    status: &'static str,
    message: String,
}

fn sweep_point(cfg: &PipelineConfig, param: &str, value: f64) -> SweepPoint {
    let mut c = cfg.clone();
    c.set_param(param, value);
    let failed = |message: String| SweepPoint {
        value,
        norm: None,
        max_residual: None,
        status: "ERROR",
        message,
    };
    let pipeline = match c.resolve() {
        Ok(p) => p,
        Err(e) => return failed(e.to_string()),
    };
    match pipeline::run(&pipeline, false) {
        Ok(o) => SweepPoint {
            value,
            norm: pipeline::headline_norm(&pipeline, &o),
            max_residual: o.max_residuals.values().copied().reduce(|a, b| if a.is_nan() || b > a { b } else { a }),
            status: if o.passed() { PASSED } else { FAILED },
            message: o.failures().join("; "),
        },
        Err(e) => failed(e.to_string()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// `increasing`, `decreasing`, `mixed`, or `undetermined` when fewer than
/// two norms are available.
fn trend(norms: &[f64]) -> &'static str {
    if norms.len() < 2 {
        return "undetermined";
    }
    if norms.windows(2).all(|w| w[1] > w[0]) {
        "increasing"
    } else if norms.windows(2).all(|w| w[1] < w[0]) {
        "decreasing"
    } else {
        "mixed"
    }
}

fn sweep(args: &SweepArgs) -> Result<i32> {
    let start = Instant::now();
    let mut cfg = args.common.to_config()?;
    if args.param.is_some() {
        cfg.param = args.param.clone();
    }
    if args.grid.is_some() {
        cfg.grid = args.grid.clone();
    }
    let param = cfg
        .param
        .clone()
        .ok_or_else(|| Error::Config("sweep needs --param (l, b, q or k)".into()))?;
    if !["l", "b", "q", "k"].contains(&param.as_str()) {
        return Err(Error::Config(format!("param must be l, b, q or k, got '{param}'")));
    }
    let grid = cfg.grid.clone().unwrap_or_default();
    if grid.is_empty() {
        return Err(Error::Config("sweep needs a nonempty --grid".into()));
    }
    // everything but the swept value must validate; range errors at a
    // grid point are reported in its row
    let seed_tol = seed_tolerance()?;
    let mut probe = cfg.clone();
    probe.set_param(&param, grid[0]);
    let (stem, mut parameters) = match probe.resolve() {
        Ok(p) => (p.stem(), p.parameters()),
        Err(Error::Parameter(_) | Error::NotNormalizable(_)) => (sweep_stem(&cfg)?, BTreeMap::new()),
        Err(e) => return Err(e),
    };
    let stem = format!("{stem}-sweep-{param}");

    let points: Vec<SweepPoint> = grid.par_iter().map(|&v| sweep_point(&cfg, &param, v)).collect();

    let mut csv = format!("{param},norm,max_residual,status,message\n");
    for p in &points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_num(p.value),
            opt_num(p.norm),
            opt_num(p.max_residual),
            p.status,
            csv_field(&p.message)
        ));
    }
    let norms: Vec<f64> = points.iter().filter_map(|p| p.norm).collect();
    let mut o = Outcome::default();
    for p in &points {
        let name = format!("point.{param}={}", p.value);
        o.checks.push(report::Check {
            name,
            value: p.max_residual.unwrap_or(f64::NAN),
            threshold: seed_tol,
            passed: p.status == PASSED,
        });
        if let Some(n) = p.norm {
            o.norm(&format!("{param}={}", p.value), n);
        }
        if p.status == "ERROR" {
            o.diag(&format!("error.{param}={}", p.value), p.message.clone());
        }
    }
    o.diag("norm_trend", trend(&norms));
    o.diag("points", points.len());

    let dir = out_dir(&cfg);
    parameters.remove(&param);
    parameters.insert("sweep_param".into(), json!(param));
    parameters.insert("sweep_grid".into(), json!(grid));
    let mut report = RunReport::new("sweep", stem.clone(), parameters, &o);
    report.outputs.push(path_string(&write_file(&dir, &format!("{stem}.csv"), &csv)?));
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    let file = format!("{stem}.report.json");
    report.outputs.push(path_string(&dir.join(&file)));
    write_file(&dir, &file, &report.to_json())?;
    println!("norm trend: {}", trend(&norms));
    Ok(finish(&report))
}
