//! Batch command-line front end.
//!
//! Tables are written as CSV with a header row, structured results as JSON.
//! Floats are printed with 17 significant digits. Output files are written
//! to a temporary file in the target directory and renamed into place.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::balls::{deep_set, lemma_bound_check, random_special_family, BallFamily};
use crate::boxes::{box_family, BoxSearch, DEFAULT_MAX_RADIUS};
use crate::classify::{density_sweep, estimate_expansion_constants, evaluate_row, totaldepth_diagnostic, VerdictConfig, VerdictRow};
use crate::error::{Error, Result};
use crate::family::MapFamily;
use crate::orbit::{critical_orbit, summability_partial, transversality_from_orbit};
use crate::returns::analyze_returns;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cedensity", version, about = "Critical-orbit statistics and parameter exclusion for interval map families")]
struct Cli {
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical orbit table.
    Orbit(OrbitArgs),
    /// Return records of one critical orbit.
    Returns(ReturnsArgs),
    /// Verdict rows at given parameters.
    Classify(ClassifyArgs),
    /// Density sweep around a base parameter.
    Sweep(SweepArgs),
    #[command(subcommand)]
    Balls(BallsCommand),
    #[command(subcommand)]
    Boxes(BoxesCommand),
    /// Analysis constants, derived rates and optional expansion estimates.
    Constants(ConstantsArgs),
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    crit: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
}

#[derive(Args, Debug)]
struct ReturnsArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    crit: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    theta0: f64,
}

#[derive(Args, Debug, Clone)]
struct VerdictArgs {
    #[arg(long = "C", default_value_t = 20.0)]
    c: f64,
    #[arg(long, default_value_t = 2.0)]
    tau: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.05)]
    lambda_ce: f64,
    #[arg(long, default_value_t = 50)]
    n_min: usize,
    #[arg(long, default_value_t = 10_000)]
    n_max: usize,
    #[arg(long, default_value_t = 0.1)]
    theta0: f64,
    #[arg(long, default_value_t = 200)]
    nv_terms: usize,
    #[arg(long, default_value_t = 32)]
    lambda_samples: usize,
}

impl VerdictArgs {
    fn config(&self) -> std::result::Result<VerdictConfig, Usage> {
        positive("--C", self.c)?;
        check("--tau", self.tau, self.tau > 1.0, "must exceed 1")?;
        check("--beta", self.beta, self.beta > 1.0, "must exceed 1")?;
        positive("--lambda-ce", self.lambda_ce)?;
        positive("--theta0", self.theta0)?;
        if self.n_min > self.n_max {
            return Err(Usage(format!("--n-min {} exceeds --n-max {}", self.n_min, self.n_max)));
        }
        Ok(VerdictConfig {
            c: self.c,
            tau: self.tau,
            beta: self.beta,
            lambda_ce: self.lambda_ce,
            n_min: self.n_min,
            n_max: self.n_max,
            theta0: self.theta0,
            nv_terms: self.nv_terms,
            lambda_samples: self.lambda_samples,
        })
    }
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[arg(long)]
    eps: f64,
    #[command(flatten)]
    verdict: VerdictArgs,
    #[arg(long = "C0", default_value_t = 5.0)]
    c0: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Writes depth diagnostics as JSON.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long)]
    center: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    grid: usize,
    #[command(flatten)]
    verdict: VerdictArgs,
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BallsCommand {
    /// Specialness, height and the deep-set measure bound.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
    },
    /// Random special family as JSON.
    Random {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        height: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Intervals of the deep set as CSV.
    Deepset {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "N")]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
enum BoxesCommand {
    /// Boxes around pre-critical parameters as JSON.
    Find(BoxesFindArgs),
}

#[derive(Args, Debug)]
struct BoxesFindArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long, value_parser = parse_range)]
    range: (f64, f64),
    #[arg(long, default_value_t = 0)]
    crit: usize,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    #[arg(long, default_value_t = 4)]
    n_cap: usize,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    theta: f64,
    #[arg(long, default_value_t = 4000)]
    grid: usize,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_RADIUS)]
    max_radius: f64,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    #[arg(long, default_value = "logistic")]
    family: String,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long = "C", default_value_t = 20.0)]
    c: f64,
    #[arg(long = "C0", default_value_t = 5.0)]
    c0: f64,
    #[arg(long, default_value_t = 2.0)]
    tau: f64,
    #[arg(long, default_value_t = 2.0)]
    tau0: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    theta: f64,
    #[arg(long, default_value_t = 0.1)]
    theta0: f64,
    /// Estimate expansion constants over this parameter range.
    #[arg(long, value_parser = parse_range)]
    estimate: Option<(f64, f64)>,
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

/// Analysis constants with their derived rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub family: String,
    pub eps: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    pub tau: f64,
    pub tau0: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub theta: f64,
    pub theta0: f64,
    pub ell_max: f64,
    pub rho: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl RunConfig {
    fn new(a: &ConstantsArgs, ell_max: f64) -> std::result::Result<RunConfig, Usage> {
        positive("--eps", a.eps)?;
        positive("--C", a.c)?;
        positive("--C0", a.c0)?;
        check("--tau", a.tau, a.tau > 1.0, "must exceed 1")?;
        check("--tau0", a.tau0, a.tau0 > 1.0, "must exceed 1")?;
        check("--gamma", a.gamma, a.gamma > 0.0 && a.gamma < 1.0, "must lie in (0, 1)")?;
        check("--kappa", a.kappa, a.kappa > 0.0 && a.kappa < 1.0, "must lie in (0, 1)")?;
        check("--lambda", a.lambda, a.lambda > 1.0, "must exceed 1")?;
        positive("--theta", a.theta)?;
        positive("--theta0", a.theta0)?;
        let rho = 1.0 - a.gamma.sqrt();
        let rho1 = rho / 4.0;
        Ok(RunConfig {
            family: a.family.clone(),
            eps: a.eps,
            c: a.c,
            c0: a.c0,
            tau: a.tau,
            tau0: a.tau0,
            gamma: a.gamma,
            kappa: a.kappa,
            lambda: a.lambda,
            theta: a.theta,
            theta0: a.theta0,
            ell_max,
            rho,
            rho1,
            rho2: rho1 / (2.0 * ell_max),
        })
    }
}

#[derive(Debug)]
struct Usage(String);

fn check(flag: &str, v: f64, ok: bool, what: &str) -> std::result::Result<(), Usage> {
    if ok {
        Ok(())
    } else {
        Err(Usage(format!("{flag} {v}: {what}")))
    }
}

fn positive(flag: &str, v: f64) -> std::result::Result<(), Usage> {
    check(flag, v, v > 0.0, "must be positive")
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if !(lo < hi) {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `argv`, whose first element is the program name,
/// and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads 0: must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Orbit(a) => cmd_orbit(a, out),
        Command::Returns(a) => cmd_returns(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Sweep(a) => cmd_sweep(a, cli.seed, out),
        Command::Balls(b) => cmd_balls(b, cli.seed, out),
        Command::Boxes(BoxesCommand::Find(a)) => cmd_boxes(a, out),
        Command::Constants(a) => cmd_constants(a, cli.seed, out),
    }
}

fn family(arg: &str) -> std::result::Result<MapFamily, Failure> {
    MapFamily::resolve(arg).map_err(|e| match e {
        Error::Io(msg) => Failure::Usage(format!("--family {arg}: {msg}")),
        other => Failure::Runtime(other),
    })
}

/// Writes `contents` to `path` atomically, or to standard output.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    Ok(())
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn cmd_orbit(a: &OrbitArgs, out: Option<&Path>) -> Outcome {
    let fam = family(&a.family)?;
    let orbit = critical_orbit(&fam, a.t, a.crit, a.n)?;
    let mut s = String::from("n,x,sign_D,log_D,crit_dist,partial_W,M_n\n");
    let len = orbit.length();
    let zero = orbit.first_zero_derivative(len);
    let sums = transversality_from_orbit(&fam, &orbit, zero.map_or(len, |z| z.saturating_sub(1)));
    let mut partial_w = 0.0;
    let mut m_n = 0.0;
    for n in 0..=len {
        let d = orbit.cum_deriv[n];
        let finite = zero.is_none_or(|z| n < z);
        if finite {
            partial_w += (-d.logmag).exp();
            if let Ok(tr) = &sums {
                m_n += tr.terms[n];
            }
        }
        let (w, m) = if finite && sums.is_ok() {
            (partial_w, m_n)
        } else if finite {
            (partial_w, f64::NAN)
        } else {
            (f64::INFINITY, f64::NAN)
        };
        writeln!(
            s,
            "{n},{},{},{},{},{},{}",
            fmt_f64(orbit.points[n]),
            d.sign,
            fmt_f64(d.logmag),
            fmt_f64(orbit.crit_dist[n]),
            fmt_f64(w),
            fmt_f64(m)
        )
        .unwrap();
    }
    if let Some(e) = orbit.escaped {
        eprintln!("warning: orbit left [0, 1] at step {e}");
    }
    debug_assert!(summability_partial(&orbit, 0).is_ok() || zero == Some(0));
    emit(out, &s)?;
    Ok(())
}

fn cmd_returns(a: &ReturnsArgs, out: Option<&Path>) -> Outcome {
    positive("--eps", a.eps)?;
    positive("--theta0", a.theta0)?;
    let fam = family(&a.family)?;
    let orbit = critical_orbit(&fam, a.t, a.crit, a.n)?;
    let (_, records) = analyze_returns(&fam, &orbit, a.eps, a.theta0)?;
    let mut s = String::from("j,S_j,nearest,d_j,log_P_j,p_j,p_tilde_j,essential,free\n");
    for r in &records {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.j,
            r.s.map_or("inf".to_string(), |v| v.to_string()),
            opt(r.nearest),
            r.d,
            fmt_f64(r.log_p),
            fmt_f64(r.p),
            fmt_f64(r.p_tilde),
            r.essential,
            r.free
        )
        .unwrap();
    }
    emit(out, &s)?;
    Ok(())
}

const ROW_HEADER: &str = "t,x_pass_n,y_pass_m,ce_rate,ce_verdict,pr_best_C,nv_nonzero,undetermined_flag";

fn row_fields(r: &VerdictRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        fmt_f64(r.t),
        r.x_pass_n,
        r.y_pass_m,
        fmt_f64(r.ce_rate),
        r.ce_verdict,
        fmt_f64(r.pr_best_c),
        r.nv_nonzero,
        r.undetermined
    )
}

fn cmd_classify(a: &ClassifyArgs, out: Option<&Path>) -> Outcome {
    positive("--eps", a.eps)?;
    positive("--C0", a.c0)?;
    check("--gamma", a.gamma, a.gamma > 0.0 && a.gamma < 1.0, "must lie in (0, 1)")?;
    let config = a.verdict.config()?;
    let fam = family(&a.family)?;
    for &t in &a.t {
        fam.check_parameter(t)?;
    }
    let rows: Vec<VerdictRow> = {
        use rayon::prelude::*;
        a.t.par_iter().map(|&t| evaluate_row(&fam, t, a.eps, &config)).collect()
    };
    let mut s = format!("{ROW_HEADER},x_fail_k,passes,flags\n");
    for r in &rows {
        writeln!(s, "{},{},{},{}", row_fields(r), opt(r.x_fail_k), r.passes(), r.flags.join(";").replace(',', " ")).unwrap();
    }
    emit(out, &s)?;
    if let Some(path) = &a.diagnostics {
        #[derive(Serialize)]
        struct Diag {
            t: f64,
            report: Option<crate::classify::TotalDepthReport>,
            error: Option<String>,
        }
        let diags: Vec<Diag> = a
            .t
            .iter()
            .map(|&t| match totaldepth_diagnostic(&fam, t, a.eps, a.c0, a.gamma, None, &config) {
                Ok(r) => Diag { t, report: Some(r), error: None },
                Err(e) => Diag { t, report: None, error: Some(e.to_string()) },
            })
            .collect();
        emit(Some(path), &json(&diags)?)?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs, seed: u64, out: Option<&Path>) -> Outcome {
    for &e in &a.eps {
        positive("--eps", e)?;
    }
    if a.grid < 2 {
        return Err(Failure::Usage(format!("--grid {}: must be at least 2", a.grid)));
    }
    let config = a.verdict.config()?;
    let fam = family(&a.family)?;
    let res = density_sweep(&fam, a.center, &a.eps, a.grid, seed, &config)?;

    let mut rows = format!("eps,{ROW_HEADER}\n");
    for w in &res.windows {
        for r in &w.rows {
            writeln!(rows, "{},{}", fmt_f64(w.eps), row_fields(r)).unwrap();
        }
    }
    let mut summary = String::from(
        "eps,lo,hi,one_sided,rows,fraction_pass,fraction_undetermined,lambda_hat,lambda_condition,exit_counts\n",
    );
    for w in &res.windows {
        let exits: Vec<String> = w.exit_counts.iter().map(|(n, c)| format!("{n}:{c}")).collect();
        writeln!(
            summary,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(w.eps),
            fmt_f64(w.lo),
            fmt_f64(w.hi),
            w.one_sided,
            w.rows.len(),
            fmt_f64(w.fraction_pass),
            fmt_f64(w.fraction_undetermined),
            w.lambda_hat.map(fmt_f64).unwrap_or_default(),
            opt(w.lambda_condition),
            exits.join(";")
        )
        .unwrap();
    }
    emit(out, &rows)?;
    match &a.summary {
        Some(p) => emit(Some(p), &summary)?,
        None => eprint!("{summary}"),
    }
    Ok(())
}

fn read_family(path: &Path) -> std::result::Result<BallFamily, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--in {}: {e}", path.display())))?;
    Ok(BallFamily::from_json(&text)?)
}

fn cmd_balls(cmd: &BallsCommand, seed: u64, out: Option<&Path>) -> Outcome {
    match cmd {
        BallsCommand::Verify { input, n, kappa } => {
            check("--kappa", *kappa, *kappa > 0.0 && *kappa < 1.0, "must lie in (0, 1)")?;
            let fam = read_family(input)?;
            let special = fam.is_special()?;
            if !special.special {
                let (i, j) = special.violation.unwrap_or((0, 0));
                return Err(Error::NotSpecial { i, j }.into());
            }
            let check = lemma_bound_check(&fam, *n, *kappa)?;
            emit(out, &json(&check)?)?;
        }
        BallsCommand::Random { count, height, scale } => {
            let fam = random_special_family(seed, *count, *height, *scale)?;
            let mut s = fam.to_json()?;
            s.push('\n');
            emit(out, &s)?;
        }
        BallsCommand::Deepset { input, n } => {
            let fam = read_family(input)?;
            let set = deep_set(&fam, *n);
            let mut s = String::from("lo,hi\n");
            for (lo, hi) in &set.intervals {
                writeln!(s, "{},{}", fmt_f64(*lo), fmt_f64(*hi)).unwrap();
            }
            emit(out, &s)?;
        }
    }
    Ok(())
}

fn cmd_boxes(a: &BoxesFindArgs, out: Option<&Path>) -> Outcome {
    positive("--eps", a.eps)?;
    check("--lambda", a.lambda, a.lambda > 1.0, "must exceed 1")?;
    positive("--theta", a.theta)?;
    positive("--max-radius", a.max_radius)?;
    if a.samples < 3 {
        return Err(Failure::Usage(format!("--samples {}: must be at least 3", a.samples)));
    }
    let fam = family(&a.family)?;
    let cfg = BoxSearch {
        m_max: a.m_max,
        n_cap: a.n_cap,
        eps: a.eps,
        lambda: a.lambda,
        theta: a.theta,
        grid: a.grid,
        samples: a.samples,
        max_radius: a.max_radius,
        ..BoxSearch::default()
    };
    let res = box_family(&fam, a.range.0, a.range.1, a.crit, &cfg)?;
    emit(out, &json(&res.boxes)?)?;
    eprintln!(
        "boxes: {}, rejected: {}, special: {}, height: {}",
        res.boxes.len(),
        res.rejected.len(),
        opt(res.special.map(|s| s.special)),
        opt(res.height)
    );
    Ok(())
}

fn cmd_constants(a: &ConstantsArgs, seed: u64, out: Option<&Path>) -> Outcome {
    let fam = family(&a.family)?;
    let ell = fam.ell_max().ok_or_else(|| Error::InvalidArgument("family has no critical points".into()))?;
    let config = RunConfig::new(a, ell)?;
    #[derive(Serialize)]
    struct Report {
        config: RunConfig,
        lemma_constant: f64,
        expansion: Option<crate::classify::ExpansionEstimate>,
    }
    let expansion = match a.estimate {
        Some(range) => Some(estimate_expansion_constants(&fam, range, a.eps, a.samples, seed, &VerdictConfig::default())?),
        None => None,
    };
    let report = Report {
        lemma_constant: crate::balls::lemma_constant(a.kappa),
        config,
        expansion,
    };
    emit(out, &json(&report)?)?;
    Ok(())
}
