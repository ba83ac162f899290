//! Configuration-driven runner: JSON suites in, JSON reports and sweep CSVs out.
//!
//! Exit status is 0 when every run passes, 1 when any run fails or errors,
//! and 2 for configuration or i/o problems.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::quadrature::{OracleResolution, QuadratureSpec};
use crate::verifiers::{
    estimate_sharpness, list_theorems, run_case, run_random_sweep, Admissibility, Case, Outcome, SharpnessOptions,
    SharpnessResult, SharpnessTarget, SweepSummary, VerifyOptions,
};

/// Version tag written into every report.
pub const REPORT_FORMAT: &str = "hardy-verify-report/1";

/// Exact header of sweep CSV files.
pub const CSV_COLUMNS: [&str; 5] = ["theorem_id", "epsilon", "quotient", "sharp_constant", "gap"];

/// A suite of independent runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub admissibility: Option<Admissibility>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub oracle_resolution: Option<OracleResolution>,
    #[serde(default)]
    pub runs: Vec<RunConfig>,
}

/// One run; exactly one of `check`, `sharpness`, `random` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub id: String,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub admissibility: Option<Admissibility>,
    #[serde(default)]
    pub check: Option<Case>,
    #[serde(default)]
    pub sharpness: Option<SharpnessRun>,
    #[serde(default)]
    pub random: Option<RandomRun>,
}

/// Rayleigh-quotient sweep along a trial family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessRun {
    pub target: SharpnessTarget,
    #[serde(default)]
    pub options: SharpnessOptions,
    /// Fails the run when the final gap exceeds this.
    #[serde(default)]
    pub max_gap: Option<f64>,
}

/// Randomized admissible margin sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomRun {
    pub theorem: String,
    pub count: usize,
    /// Defaults to the suite seed.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Check,
    Sharpness,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunError {
    pub kind: String,
    pub message: String,
}

impl From<&HardyError> for RunError {
    fn from(e: &HardyError) -> Self {
        RunError {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RunResult {
    Check(Outcome),
    Sharpness(SharpnessResult),
    Random(SweepSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub id: String,
    pub kind: RunKind,
    pub theorem_id: String,
    pub passed: bool,
    pub error: Option<RunError>,
    pub result: Option<RunResult>,
    /// Seconds; `null` unless timings were requested, which keeps reports byte-stable.
    pub wall_clock_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub tool_version: String,
    pub seed: u64,
    pub runs: Vec<RunReport>,
    pub passed: bool,
}

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunSettings {
    /// Replaces the suite-level admissibility; a run's own choice still wins.
    pub admissibility: Option<Admissibility>,
    pub timings: bool,
}

/// Parses and validates a suite config.
pub fn parse_config(text: &str) -> Result<SuiteConfig> {
    let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| HardyError::Config(e.to_string()))?;
    validate(&cfg)?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SuiteConfig> {
    let text = fs::read_to_string(path).map_err(|e| HardyError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn validate(cfg: &SuiteConfig) -> Result<()> {
    let mut seen = BTreeSet::new();
    for run in &cfg.runs {
        let id_ok = !run.id.is_empty()
            && run
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !id_ok {
            return Err(HardyError::Config(format!(
                "run id '{}' must be non-empty and use only [A-Za-z0-9_.-]",
                run.id
            )));
        }
        if !seen.insert(run.id.as_str()) {
            return Err(HardyError::Config(format!("duplicate run id '{}'", run.id)));
        }
        let set = [run.check.is_some(), run.sharpness.is_some(), run.random.is_some()];
        if set.iter().filter(|s| **s).count() != 1 {
            return Err(HardyError::Config(format!(
                "run '{}' needs exactly one of check, sharpness, random",
                run.id
            )));
        }
        if let Some(r) = &run.random {
            if !list_theorems().iter().any(|t| t.id == r.theorem) {
                return Err(HardyError::Config(format!(
                    "run '{}': unknown theorem id '{}'",
                    run.id, r.theorem
                )));
            }
        }
    }
    Ok(())
}

fn options_for(cfg: &SuiteConfig, run: &RunConfig, settings: &RunSettings) -> VerifyOptions {
    let mut o = VerifyOptions::default();
    if let Some(q) = run.quadrature.as_ref().or(cfg.quadrature.as_ref()) {
        o.quadrature = q.clone();
    }
    if let Some(r) = cfg.oracle_resolution {
        o.oracle_resolution = r;
    }
    o.admissibility = run
        .admissibility
        .or(settings.admissibility)
        .or(cfg.admissibility)
        .unwrap_or_default();
    o
}

fn theorem_of(run: &RunConfig) -> (RunKind, String) {
    if let Some(c) = &run.check {
        (RunKind::Check, c.theorem_id().to_string())
    } else if let Some(s) = &run.sharpness {
        (RunKind::Sharpness, s.target.theorem_id().to_string())
    } else if let Some(r) = &run.random {
        (RunKind::Random, r.theorem.clone())
    } else {
        unreachable!("validated config has one job per run")
    }
}

fn execute(run: &RunConfig, seed: u64, opts: &VerifyOptions) -> Result<(RunResult, bool)> {
    if let Some(case) = &run.check {
        let out = run_case(case, opts)?;
        let ok = out.passed();
        Ok((RunResult::Check(out), ok))
    } else if let Some(s) = &run.sharpness {
        let res = estimate_sharpness(&s.target, &s.options, opts)?;
        let ok = res.monotone && res.one_sided && res.oracle_ok && s.max_gap.is_none_or(|g| res.gap <= g);
        Ok((RunResult::Sharpness(res), ok))
    } else if let Some(r) = &run.random {
        let sum = run_random_sweep(&r.theorem, r.count, r.seed.unwrap_or(seed), opts)?;
        let ok = sum.all_passed();
        Ok((RunResult::Random(sum), ok))
    } else {
        unreachable!("validated config has one job per run")
    }
}

fn run_one(cfg: &SuiteConfig, run: &RunConfig, settings: &RunSettings) -> RunReport {
    let opts = options_for(cfg, run, settings);
    let (kind, theorem_id) = theorem_of(run);
    let start = Instant::now();
    let outcome = execute(run, cfg.seed, &opts);
    let wall_clock_s = settings.timings.then(|| start.elapsed().as_secs_f64());
    let (passed, error, result) = match outcome {
        Ok((res, ok)) => (ok, None, Some(res)),
        Err(e) => (false, Some(RunError::from(&e)), None),
    };
    RunReport {
        id: run.id.clone(),
        kind,
        theorem_id,
        passed,
        error,
        result,
        wall_clock_s,
    }
}

/// Executes every run; failures are recorded per run and never abort the suite.
pub fn run_suite(cfg: &SuiteConfig, settings: &RunSettings) -> ReportFile {
    let runs: Vec<RunReport> = cfg.runs.par_iter().map(|r| run_one(cfg, r, settings)).collect();
    let passed = runs.iter().all(|r| r.passed);
    ReportFile {
        format: REPORT_FORMAT.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        runs,
        passed,
    }
}

pub fn report_json(report: &ReportFile) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HardyError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| HardyError::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    theorem_id: &'a str,
    epsilon: f64,
    quotient: f64,
    sharp_constant: f64,
    gap: f64,
}

/// Renders one sharpness result as CSV with the columns in [`CSV_COLUMNS`].
pub fn sharpness_csv(res: &SharpnessResult) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(|e| HardyError::Io(e.to_string()))?;
    for p in &res.schedule {
        w.serialize(CsvRow {
            theorem_id: &res.theorem_id,
            epsilon: p.epsilon,
            quotient: p.quotient,
            sharp_constant: res.sharp_constant,
            gap: p.gap,
        })
        .map_err(|e| HardyError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| HardyError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs a sharpness-only suite, writing `<id>.csv` per run and `sweep.json` into `out_dir`.
pub fn sweep_sharpness(cfg: &SuiteConfig, out_dir: &Path, settings: &RunSettings) -> Result<ReportFile> {
    if let Some(bad) = cfg.runs.iter().find(|r| r.sharpness.is_none()) {
        return Err(HardyError::Config(format!(
            "sweep accepts sharpness runs only; run '{}' is not one",
            bad.id
        )));
    }
    let report = run_suite(cfg, settings);
    fs::create_dir_all(out_dir).map_err(|e| HardyError::Io(format!("{}: {e}", out_dir.display())))?;
    for run in &report.runs {
        if let Some(RunResult::Sharpness(res)) = &run.result {
            write_file(&out_dir.join(format!("{}.csv", run.id)), sharpness_csv(res)?.as_bytes())?;
        }
    }
    write_file(&out_dir.join("sweep.json"), report_json(&report).as_bytes())?;
    Ok(report)
}

/// Plain-text listing of every theorem id with its constant and conditions.
pub fn render_theorem_list() -> String {
    let mut s = String::new();
    for t in list_theorems() {
        s.push_str(&format!("{}\n", t.id));
        s.push_str(&format!("  statement:  {}\n", t.statement));
        s.push_str(&format!("  constant:   {}\n", t.constant));
        s.push_str(&format!("  conditions: {}\n", t.conditions));
        s.push_str(&format!("  sharpness:  {}\n", if t.sharpness { "yes" } else { "no" }));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdmissibilityArg {
    #[value(alias = "main")]
    Thm2,
    Corollary,
}

impl From<AdmissibilityArg> for Admissibility {
    fn from(a: AdmissibilityArg) -> Self {
        match a {
            AdmissibilityArg::Thm2 => Admissibility::Main,
            AdmissibilityArg::Corollary => Admissibility::Corollary,
        }
    }
}

/// Numerical verifier for weighted Hardy inequalities on Grushin and Landau geometries.
///
/// Reports are byte-identical across runs and thread counts unless --timings is given.
#[derive(Debug, Parser)]
#[command(name = "hardy-verify", version)]
struct Cli {
    /// Second admissibility condition for the Aharonov-Bohm inequality.
    #[arg(long, global = true, value_enum)]
    admissibility: Option<AdmissibilityArg>,
    /// Record wall-clock seconds per run (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a suite and write the JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run sharpness sweeps and write one CSV per run plus sweep.json.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// List theorem ids, constants and conditions.
    List,
}

fn exit_for(report: &ReportFile) -> ExitCode {
    for r in report.runs.iter().filter(|r| !r.passed) {
        match &r.error {
            Some(e) => eprintln!("run {} ({}): {} error: {}", r.id, r.theorem_id, e.kind, e.message),
            None => eprintln!("run {} ({}): failed", r.id, r.theorem_id),
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let settings = RunSettings {
        admissibility: cli.admissibility.map(Into::into),
        timings: cli.timings,
    };
    match cli.command {
        Command::Verify { config, out } => {
            let cfg = load_config(&config)?;
            let report = run_suite(&cfg, &settings);
            write_file(&out, report_json(&report).as_bytes())?;
            Ok(exit_for(&report))
        }
        Command::Sweep { config, out_dir } => {
            let cfg = load_config(&config)?;
            let report = sweep_sharpness(&cfg, &out_dir, &settings)?;
            Ok(exit_for(&report))
        }
        Command::List => {
            print!("{}", render_theorem_list());
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Entry point of the `hardy-verify` binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hardy-verify: {e}");
            ExitCode::from(2)
        }
    }
}
