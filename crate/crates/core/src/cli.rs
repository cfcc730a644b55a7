//! The `lpbm` command line: `run` executes checks on two body spec files and
//! writes a report, `curve` writes the plot data of one `F_{p;K,L}` curve.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 bad input,
//! 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functionals::{Budget, EvalContext, FunctionalDescriptor};
use crate::geometry::compare::Tolerances;
use crate::geometry::measure::approximation_grid;
use crate::geometry::spec_file::{de_p, parse_p, ser_p};
use crate::geometry::{BodySpec, ConvexBody, DirectionSet};
use crate::harness::{
    alpha_grid, check_concavity, check_corollary_isotropic, check_equality_characterization, check_lp_bm,
    check_lp_inclusion, check_pinfty_limit, cross_check_midpoints, curve_slacks, sample_curve, CurveSample,
    SlackRecord,
};
use crate::rng::RngStream;

pub const SCHEMA_VERSION: u32 = 1;

/// Check ids with their own procedure; any registry functional name is
/// also accepted and runs the plain L_p inequality for that functional.
pub const NAMED_CHECKS: [&str; 6] = ["firey", "concavity", "equality", "pinf_limit", "isotropic_corollary", "inclusion"];

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Direction counts for support-level checks, per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridResolution {
    pub planar: usize,
    pub spherical: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        GridResolution { planar: 4096, spherical: 2562 }
    }
}

impl GridResolution {
    pub fn directions(&self, n: usize) -> Result<DirectionSet> {
        match n {
            2 => DirectionSet::circle(self.planar),
            3 => DirectionSet::with_count(3, self.spherical),
            _ => DirectionSet::default_for(n),
        }
    }
}

fn ser_p_list<S: serde::Serializer>(ps: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        seq.serialize_element(&PValue(*p))?;
    }
    seq.end()
}

fn de_p_list<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Ok(Vec::<PValue>::deserialize(d)?.into_iter().map(|p| p.0).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
struct PValue(#[serde(serialize_with = "ser_p", deserialize_with = "de_p")] f64);

/// Everything that determines a run's report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub grid_resolution: GridResolution,
    pub budget: Budget,
    #[serde(serialize_with = "ser_p_list", deserialize_with = "de_p_list")]
    pub p_values: Vec<f64>,
    pub alpha_count: usize,
    pub tolerances: Tolerances,
    pub checks: Vec<String>,
    /// Functionals used by `concavity`, `equality` and `pinf_limit`.
    pub functionals: Vec<String>,
    #[serde(serialize_with = "ser_p_list", deserialize_with = "de_p_list")]
    pub pinf_sequence: Vec<f64>,
    /// Random midpoint tests per curve in the `concavity` check.
    pub midpoint_checks: usize,
    /// Where the report goes; not part of the report itself.
    #[serde(skip_serializing)]
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            grid_resolution: GridResolution::default(),
            budget: Budget::default(),
            p_values: vec![2.0],
            alpha_count: 21,
            tolerances: Tolerances::default(),
            checks: Vec::new(),
            functionals: vec!["volume".into()],
            pinf_sequence: vec![2.0, 4.0, 8.0, 16.0],
            midpoint_checks: 8,
            output: Output { path: None, format: Format::Json },
        }
    }
}

impl RunConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))
    }

    /// Every check id and functional name must resolve for dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        self.tolerances.validate()?;
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        if self.alpha_count < 3 {
            return Err(Error::Config("alpha_count must be at least 3".into()));
        }
        if self.p_values.is_empty() {
            return Err(Error::Config("no exponents given".into()));
        }
        for &p in &self.p_values {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::Config(format!("exponents must be finite and at least 1, got {p}")));
            }
        }
        for c in &self.checks {
            if !NAMED_CHECKS.contains(&c.as_str()) {
                FunctionalDescriptor::parse(c, n).map_err(|e| Error::Config(format!("check {c:?}: {e}")))?;
            }
        }
        for f in &self.functionals {
            FunctionalDescriptor::parse(f, n).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.pinf_sequence.windows(2).any(|w| !(w[0] < w[1])) || self.pinf_sequence.iter().any(|p| !(*p >= 1.0)) {
            return Err(Error::Config("pinf_sequence must be increasing finite exponents >= 1".into()));
        }
        Ok(())
    }
}

/// A body file as recorded in the report.
#[derive(Debug, Clone, Serialize)]
pub struct BodyInfo {
    pub path: String,
    pub sha256: String,
    pub dim: usize,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub budget: Budget,
    pub grid_resolution: GridResolution,
    /// Directions of the circumscribed polytopes behind approximate values.
    pub approximation_grid: usize,
}

/// The output of one job: one check for one functional and exponent.
#[derive(Debug, Clone, Serialize)]
pub struct JobResult {
    pub check: String,
    pub functional: Option<String>,
    #[serde(serialize_with = "ser_opt_p")]
    pub p: Option<f64>,
    pub stream: u64,
    pub passed: bool,
    pub records: Vec<SlackRecord>,
    pub curves: Vec<CurveSample>,
    pub details: serde_json::Value,
}

fn ser_opt_p<S: serde::Serializer>(p: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => ser_p(p, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub jobs: usize,
    pub records: usize,
    pub violated: usize,
    pub failed_jobs: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub bodies: Vec<BodyInfo>,
    pub provenance: Provenance,
    pub jobs: Vec<JobResult>,
    pub summary: Summary,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.summary.passed {
            EXIT_OK
        } else {
            EXIT_VIOLATED
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Curves and slack records as one flat table.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record([
            "row", "check", "functional", "p", "alpha", "value", "stderr", "lhs", "rhs", "slack", "slack_stderr", "verdict",
        ])
        .map_err(io)?;
        let num = |x: f64| if x.is_infinite() { "inf".to_string() } else { x.to_string() };
        for job in &self.jobs {
            let f = job.functional.clone().unwrap_or_default();
            for c in &job.curves {
                for i in 0..c.alphas.len() {
                    w.write_record([
                        "curve".to_string(),
                        job.check.clone(),
                        c.functional.clone(),
                        num(c.p),
                        num(c.alphas[i]),
                        num(c.values[i]),
                        num(c.stderr[i]),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ])
                    .map_err(io)?;
                }
            }
            for r in &job.records {
                w.write_record([
                    "slack".to_string(),
                    job.check.clone(),
                    if r.functional.is_empty() { f.clone() } else { r.functional.clone() },
                    num(r.p),
                    r.alpha.map(num).unwrap_or_default(),
                    String::new(),
                    String::new(),
                    num(r.lhs.value),
                    num(r.rhs.value),
                    num(r.slack),
                    num(r.slack_stderr),
                    serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Stream label of a job, independent of the other jobs in the run.
fn job_label(check: &str, functional: Option<&str>, p: Option<f64>) -> u64 {
    let mut h = Sha256::new();
    h.update(check.as_bytes());
    h.update([0]);
    h.update(functional.unwrap_or("").as_bytes());
    h.update([0]);
    h.update(p.map(f64::to_bits).unwrap_or(0).to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

#[derive(Debug, Clone)]
struct Job {
    check: String,
    functional: Option<String>,
    p: Option<f64>,
}

fn plan(cfg: &RunConfig, n: usize) -> Vec<Job> {
    let mut jobs = Vec::new();
    let job = |check: &str, f: Option<String>, p: Option<f64>| Job { check: check.to_string(), functional: f, p };
    for c in &cfg.checks {
        match c.as_str() {
            "firey" => {
                for &p in &cfg.p_values {
                    for j in 1..=n {
                        let f = if j == n { "volume".to_string() } else { format!("quermass:{}", n - j) };
                        jobs.push(job(c, Some(f), Some(p)));
                    }
                }
            }
            "concavity" | "equality" => {
                for f in &cfg.functionals {
                    for &p in &cfg.p_values {
                        jobs.push(job(c, Some(f.clone()), Some(p)));
                    }
                }
            }
            "pinf_limit" => {
                for f in &cfg.functionals {
                    jobs.push(job(c, Some(f.clone()), None));
                }
            }
            "isotropic_corollary" | "inclusion" => {
                for &p in &cfg.p_values {
                    jobs.push(job(c, None, Some(p)));
                }
            }
            name => {
                for &p in &cfg.p_values {
                    jobs.push(job("lp_bm", Some(name.to_string()), Some(p)));
                }
            }
        }
    }
    jobs
}

fn run_job(job: &Job, cfg: &RunConfig, k: &ConvexBody, l: &ConvexBody) -> Result<JobResult> {
    let n = k.dim();
    let label = job_label(&job.check, job.functional.as_deref(), job.p);
    let ctx = EvalContext { rng: RngStream::new(cfg.seed).fork(label), budget: cfg.budget };
    let tol = &cfg.tolerances;
    let desc = job.functional.as_deref().map(|f| FunctionalDescriptor::parse(f, n)).transpose()?;
    let mut out = JobResult {
        check: job.check.clone(),
        functional: job.functional.clone(),
        p: job.p,
        stream: label,
        passed: true,
        records: Vec::new(),
        curves: Vec::new(),
        details: serde_json::Value::Null,
    };
    match (job.check.as_str(), desc, job.p) {
        ("firey" | "lp_bm", Some(f), Some(p)) => {
            let r = check_lp_bm(&f, p, k, l, &ctx, tol)?;
            out.passed = r.passed();
            out.records.push(r);
        }
        ("concavity", Some(f), Some(p)) => {
            let alphas = alpha_grid(cfg.alpha_count)?;
            let curve = sample_curve(&f, p, k, l, &alphas, &ctx)?;
            let verdict = check_concavity(&curve, tol)?;
            let cross = cross_check_midpoints(&f, p, k, l, &curve, cfg.midpoint_checks, &ctx, tol)?;
            out.records = curve_slacks(&f, &curve, k, l, &ctx, tol)?;
            out.passed = verdict.concave && cross.agree && out.records.iter().all(SlackRecord::passed);
            out.details = serde_json::json!({ "concavity": serde_json::to_value(&verdict)?, "midpoint": serde_json::to_value(&cross)? });
            out.curves.push(curve);
        }
        ("equality", Some(f), Some(p)) => {
            let pairs = vec![(k.clone(), k.scaled(2.0)?), (k.clone(), l.clone()), (l.clone(), l.scaled(0.5)?)];
            let rep = check_equality_characterization(&f, &pairs, p, &ctx, tol)?;
            out.passed = rep.ok;
            out.records = rep.pairs.iter().map(|o| o.record.clone()).collect();
            out.details = serde_json::to_value(&rep)?;
        }
        ("pinf_limit", Some(f), None) => {
            let rep = check_pinfty_limit(&f, k, l, &cfg.pinf_sequence, &ctx, tol)?;
            out.passed = rep.ok;
            out.details = serde_json::to_value(&rep)?;
        }
        ("isotropic_corollary", None, Some(p)) => {
            let r = check_corollary_isotropic(k, l, p, &ctx, tol)?;
            out.passed = r.passed();
            out.records.push(r);
        }
        ("inclusion", None, Some(p)) => {
            let grid = cfg.grid_resolution.directions(n)?;
            let alphas = alpha_grid(cfg.alpha_count)?;
            let mut reports = Vec::new();
            for &a in &alphas[1..alphas.len() - 1] {
                let r = check_lp_inclusion(k, l, p, a, &grid)?;
                out.passed &= r.consistent();
                reports.push(r);
            }
            out.details = serde_json::to_value(&reports)?;
        }
        _ => return Err(Error::InvalidArgument(format!("malformed job {job:?}"))),
    }
    Ok(out)
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Spec(m) => Error::Spec(format!("{}: {m}", path.display())),
        e => Error::Spec(format!("{}: {e}", path.display())),
    }
}

fn load_bodies(paths: &[PathBuf]) -> Result<(Vec<ConvexBody>, Vec<BodyInfo>)> {
    if paths.len() != 2 {
        return Err(Error::Config(format!("exactly two body specs are required, got {}", paths.len())));
    }
    let mut bodies = Vec::new();
    let mut infos = Vec::new();
    for p in paths {
        let bytes = std::fs::read(p).map_err(|e| in_file(p, e.into()))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Spec(format!("{}: not utf-8", p.display())))?;
        let spec = BodySpec::from_json_str(&text).map_err(|e| in_file(p, e))?;
        let body = spec.build().map_err(|e| in_file(p, e))?;
        infos.push(BodyInfo {
            path: p.display().to_string(),
            sha256: sha256_hex(&bytes),
            dim: body.dim(),
            kind: body.kind().to_string(),
        });
        bodies.push(body);
    }
    if bodies[0].dim() != bodies[1].dim() {
        return Err(Error::Spec(format!("bodies have dimensions {} and {}", bodies[0].dim(), bodies[1].dim())));
    }
    Ok((bodies, infos))
}

/// Runs every selected check and assembles the report. Jobs run in parallel
/// and are collected in plan order.
pub fn run(cfg: &RunConfig, body_paths: &[PathBuf]) -> Result<Report> {
    let (bodies, infos) = load_bodies(body_paths)?;
    let n = bodies[0].dim();
    cfg.validate(n)?;
    let jobs = plan(cfg, n);
    let results: Vec<JobResult> = jobs
        .par_iter()
        .map(|j| run_job(j, cfg, &bodies[0], &bodies[1]))
        .collect::<Result<_>>()?;
    let records: usize = results.iter().map(|r| r.records.len()).sum();
    let violated = results
        .iter()
        .flat_map(|r| &r.records)
        .filter(|r| r.verdict == crate::harness::Verdict::Violated)
        .count();
    let failed_jobs = results.iter().filter(|r| !r.passed).count();
    let approx = if (2..=3).contains(&n) { approximation_grid(n)?.len() } else { 0 };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: "lpbm".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        bodies: infos,
        provenance: Provenance {
            seed: cfg.seed,
            budget: cfg.budget,
            grid_resolution: cfg.grid_resolution.clone(),
            approximation_grid: approx,
        },
        summary: Summary { jobs: results.len(), records, violated, failed_jobs, passed: failed_jobs == 0 },
        jobs: results,
    })
}

/// CSV rows `alpha,value,stderr` of `F_{p;K,L}`.
pub fn emit_curve(cfg: &RunConfig, functional: &str, p: f64, body_paths: &[PathBuf]) -> Result<String> {
    let (bodies, _) = load_bodies(body_paths)?;
    let n = bodies[0].dim();
    cfg.tolerances.validate()?;
    let f = FunctionalDescriptor::parse(functional, n).map_err(|e| Error::Config(e.to_string()))?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Config(format!("exponent must be finite and at least 1, got {p}")));
    }
    let alphas = alpha_grid(cfg.alpha_count).map_err(|e| Error::Config(e.to_string()))?;
    let label = job_label("curve", Some(functional), Some(p));
    let ctx = EvalContext { rng: RngStream::new(cfg.seed).fork(label), budget: cfg.budget };
    let c = sample_curve(&f, p, &bodies[0], &bodies[1], &alphas, &ctx)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["alpha", "value", "stderr"]).map_err(io)?;
    for i in 0..alphas.len() {
        w.write_record([c.alphas[i].to_string(), c.values[i].to_string(), c.stderr[i].to_string()]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Parser)]
#[command(name = "lpbm", version, about = "Numerical checks of L_p Brunn-Minkowski inequalities")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "LPBM_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Base configuration file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Two body spec files, K then L.
    #[arg(long, num_args = 2, required = true)]
    pub bodies: Vec<PathBuf>,
    #[arg(long)]
    pub alpha_count: Option<usize>,
    #[arg(long)]
    pub mc_samples: Option<usize>,
    #[arg(long)]
    pub walkers: Option<usize>,
    #[arg(long)]
    pub projection_grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run checks and write a report.
    Run {
        #[command(flatten)]
        common: Common,
        /// Check ids or functional names (repeatable, comma separated).
        #[arg(long = "check", value_delimiter = ',', required = true)]
        checks: Vec<String>,
        /// Exponents (repeatable, comma separated).
        #[arg(long = "p", value_delimiter = ',')]
        p: Vec<String>,
        /// Functionals for concavity, equality and pinf_limit.
        #[arg(long = "functional", value_delimiter = ',')]
        functionals: Vec<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write `alpha,value,stderr` for one curve.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        functional: String,
        #[arg(long = "p")]
        p: String,
    },
}

fn base_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(a) = common.alpha_count {
        cfg.alpha_count = a;
    }
    if let Some(m) = common.mc_samples {
        cfg.budget.mc_samples = m;
    }
    if let Some(w) = common.walkers {
        cfg.budget.walkers = w;
    }
    if let Some(g) = common.projection_grid {
        cfg.budget.projection_grid = g;
    }
    if common.out.is_some() {
        cfg.output.path = common.out.clone();
    }
    Ok(cfg)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) | Error::Degenerate(_) => EXIT_NUMERIC,
        _ => EXIT_PARSE,
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { common, checks, p, functionals, format } => {
            let mut cfg = base_config(&common)?;
            cfg.checks = checks;
            if !p.is_empty() {
                cfg.p_values = p.iter().map(|s| parse_p(s)).collect::<Result<_>>()?;
            }
            if !functionals.is_empty() {
                cfg.functionals = functionals;
            }
            if let Some(f) = format {
                cfg.output.format = f;
            }
            let report = run(&cfg, &common.bodies)?;
            let text = match cfg.output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv()?,
            };
            write_output(cfg.output.path.as_deref(), &text)?;
            let s = &report.summary;
            eprintln!(
                "lpbm: {} jobs, {} records, {} violated, {} failed",
                s.jobs, s.records, s.violated, s.failed_jobs
            );
            Ok(report.exit_code())
        }
        Command::Curve { common, functional, p } => {
            let cfg = base_config(&common)?;
            let p = parse_p(&p)?;
            let text = emit_curve(&cfg, &functional, p, &common.bodies)?;
            write_output(cfg.output.path.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("lpbm: {e}");
            return EXIT_PARSE;
        }
    };
    match pool.install(|| execute(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lpbm: {e}");
            exit_code_for(&e)
        }
    }
}
