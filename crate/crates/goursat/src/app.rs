//! Command dispatch.
//!
//! Exit status: 0 success, 1 input error, 2 not a Goursat bundle (or not
//! regular enough to decide), 3 first integrals not found, 4 certificate
//! failed.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use goursat_core::classify::{classify, GoursatVerdict};
use goursat_core::contact::{construct, Construction};
use goursat_core::control::prolong_control;
use goursat_core::expr::Expr;
use goursat_core::geometry::Distribution;
use goursat_core::linalg::generic_rank;
use goursat_core::sampler::Sampler;
use goursat_core::verify::{certify, feedback_check, static_feedback_inspect};
use goursat_core::Error;

use crate::problem::{parse_chart_lines, parse_expr, parse_hints, ChartSpec, Loaded, ProblemFile, System};
use crate::report::{CertificateReport, ChartReport, ConstructionReport, ErrorReport, Feedback, Kinematics, ProlongReport, RankCheck, Report, SystemEcho, Verdict};
use crate::InputError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_GOURSAT: i32 = 2;
pub const EXIT_NO_INTEGRALS: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "goursat", version, about = "Recognize Goursat bundles and build contact coordinates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Refined derived type and Goursat verdict.
    Analyze(Options),
    /// Full construction of contact coordinates, then certification.
    Contact(Options),
    /// Static feedback necessary condition for a control system.
    Feedback(Options),
    /// Certify a supplied chart (`chart:` section or `--chart`).
    Verify(Options),
    /// Print the expanded system as a problem file.
    Generate(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Contact(_) => "contact",
            Command::Feedback(_) => "feedback",
            Command::Verify(_) => "verify",
            Command::Generate(_) => "generate",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Analyze(o) | Command::Contact(o) | Command::Feedback(o) | Command::Verify(o) | Command::Generate(o) => o,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Problem file, `.gsf` text or JSON.
    pub file: PathBuf,
    /// Prolong a control: `<control>:<times>`. Repeatable.
    #[arg(long, value_parser = parse_prolong)]
    pub prolong: Vec<(String, usize)>,
    /// Seed for sampling; overrides the file's `seed =`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit the machine-readable report.
    #[arg(long)]
    pub json: bool,
    /// Extra first-integral hints (`hint <name> = <expr>` lines or JSON).
    #[arg(long)]
    pub hints: Option<PathBuf>,
    /// Sampling rounds when confirming ranks numerically.
    #[arg(long, default_value_t = 10)]
    pub max_attempts: usize,
    /// Chart to certify (verify only).
    #[arg(long)]
    pub chart: Option<PathBuf>,
}

fn parse_prolong(s: &str) -> Result<(String, usize), String> {
    let (c, t) = s.rsplit_once(':').ok_or("expected <control>:<times>")?;
    let t = t.parse::<usize>().map_err(|_| format!("bad count {t}"))?;
    if c.is_empty() || t == 0 {
        return Err("expected <control>:<times> with times >= 1".into());
    }
    Ok((c.to_string(), t))
}

/// A finished run. `generated` is set by `generate` only.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub generated: Option<ProblemFile>,
    /// Wall-clock time per phase; never part of the machine report.
    pub timings: Vec<(&'static str, Duration)>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn fail(report: &mut Report, kind: &str, message: String, code: i32) {
    report.error = Some(ErrorReport { kind: kind.into(), message });
    report.exit_code = code;
}

fn core_failure(report: &mut Report, e: Error) {
    let (kind, code) = match &e {
        Error::IntegralsNotFound(_) => ("integrals-not-found", EXIT_NO_INTEGRALS),
        Error::Singular(_) | Error::NotTotallyRegular { .. } | Error::DimensionMismatch { .. } => ("regularity", EXIT_NOT_GOURSAT),
        Error::Precondition(_) => ("precondition", EXIT_NOT_GOURSAT),
        Error::RankConfirmation { .. } => ("rank-confirmation", EXIT_INPUT),
        Error::InvalidInput(_) | Error::Parse { .. } => ("input", EXIT_INPUT),
    };
    fail(report, kind, e.to_string(), code);
}

/// Run one command end to end.
pub fn run(cmd: &Command) -> Outcome {
    let opts = cmd.options();
    let mut out = Outcome { report: Report::new(cmd.name(), opts.seed.unwrap_or(0)), generated: None, timings: Vec::new() };
    if let Err(e) = drive(cmd, &mut out) {
        fail(&mut out.report, "input", e.to_string(), EXIT_INPUT);
    }
    out
}

fn timed<T>(out: &mut Outcome, what: &'static str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let r = f();
    out.timings.push((what, t.elapsed()));
    r
}

fn drive(cmd: &Command, out: &mut Outcome) -> Result<(), InputError> {
    let opts = cmd.options();
    let mut problem = ProblemFile::from_str_any(&read(&opts.file)?)?;
    if let Some(h) = &opts.hints {
        problem.hints.extend(parse_hints(&read(h)?)?);
    }
    let seed = opts.seed.or(problem.seed).unwrap_or(0);
    problem.seed = Some(seed);
    out.report.seed = seed;
    out.report.input = Some(problem.clone());
    let mut loaded = problem.load(seed)?;
    for (control, times) in &opts.prolong {
        let Loaded::Control(s) = &loaded else {
            return Err(InputError::Invalid("--prolong needs a control system".into()));
        };
        let p = prolong_control(s, control, *times).map_err(InputError::Core)?;
        out.report.prolong.push(ProlongReport {
            control: control.clone(),
            times: *times,
            chain: p.chain.iter().map(|s| s.name().to_string()).collect(),
            renamed: p.renamed.clone(),
        });
        loaded = Loaded::Control(p.system);
    }
    let d = loaded.distribution();
    out.report.system = Some(SystemEcho::new(&d));
    if let Command::Generate(_) = cmd {
        out.generated = Some(expanded(&loaded, &problem));
        return Ok(());
    }
    let hints = problem.hints.iter().map(|h| parse_expr(&h.expr, d.chart())).collect::<Result<Vec<_>, _>>()?;
    if let Command::Verify(_) = cmd {
        let spec = match &opts.chart {
            Some(p) => read_chart(&read(p)?)?,
            None => problem.chart.clone().ok_or_else(|| InputError::Invalid("verify needs a `chart:` section or --chart".into()))?,
        };
        let chart = spec.to_chart(&d)?;
        let cert = timed(out, "certify", || certify(&d, &chart));
        out.report.chart = Some(ChartReport::new(&chart));
        out.report.certificate = Some(CertificateReport::from(&cert));
        if !cert.pass {
            out.report.exit_code = EXIT_CERTIFICATE;
        }
        return Ok(());
    }
    if let Command::Feedback(_) = cmd {
        if !matches!(loaded, Loaded::Control(_)) {
            return Err(InputError::Invalid("feedback needs a control system (`time:`/`states:`/`controls:`/`dynamics:`)".into()));
        }
    }
    let v = match timed(out, "classify", || classify(&d)) {
        Ok(v) => v,
        Err(e) => {
            core_failure(&mut out.report, e);
            return Ok(());
        }
    };
    record_verdict(out, &d, &v, opts.max_attempts);
    if out.report.exit_code != EXIT_OK {
        return Ok(());
    }
    let construction = match cmd {
        Command::Analyze(_) => None,
        _ if !v.is_goursat => None,
        _ => match timed(out, "construct", || construct(&d, &v, &hints)) {
            Ok(c) => Some(c),
            Err(e) => {
                core_failure(&mut out.report, e);
                None
            }
        },
    };
    let mut cert_pass = false;
    if let Some(c) = &construction {
        let cert = timed(out, "certify", || certify(&d, &c.chart));
        cert_pass = cert.pass;
        out.report.construction = Some(ConstructionReport::new(c));
        out.report.chart = Some(ChartReport::new(&c.chart));
        out.report.certificate = Some(CertificateReport::from(&cert));
        if !cert.pass {
            out.report.exit_code = EXIT_CERTIFICATE;
        }
    }
    if let (Command::Feedback(_), Loaded::Control(s)) = (cmd, &loaded) {
        feedback(out, &d, s, &v, construction.as_ref(), cert_pass);
    }
    if !v.is_goursat && out.report.exit_code == EXIT_OK {
        out.report.exit_code = EXIT_NOT_GOURSAT;
    }
    Ok(())
}

fn record_verdict(out: &mut Outcome, d: &Distribution, v: &GoursatVerdict, attempts: usize) {
    let r = &mut out.report;
    r.derived_type = Some(v.record().to_lists());
    r.kinematics = v.kinematics.as_ref().map(Kinematics::from);
    r.verdict = Some(Verdict::new(v));
    let mut sampler = Sampler::with_attempts(r.seed, attempts);
    for (i, level) in v.flag.levels.iter().enumerate() {
        match generic_rank(&level.matrix(), &mut sampler) {
            Ok(g) => r.rank_checks.push(RankCheck::new(i, d.chart(), &g)),
            Err(e) => {
                core_failure(r, e);
                return;
            }
        }
    }
}

fn feedback(out: &mut Outcome, d: &Distribution, s: &goursat_core::control::ControlSystem, v: &GoursatVerdict, c: Option<&Construction>, cert_pass: bool) {
    let report = feedback_check(d, s.time(), v, c);
    let inspect = c.filter(|_| cert_pass).map(|c| static_feedback_inspect(&c.chart, s.states(), s.controls(), s.time(), s.chart().params()));
    out.report.feedback = Some(Feedback::new(s.time().name(), v.is_goursat, report.as_ref(), inspect));
}

/// `chart:` text, a bare JSON chart, or a JSON report carrying a chart.
fn read_chart(text: &str) -> Result<ChartSpec, InputError> {
    let t = text.trim_start();
    if t.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(t).map_err(|e| InputError::Json(e.to_string()))?;
        if let Ok(r) = serde_json::from_value::<Report>(value.clone()) {
            return r.chart.map(|c| c.spec()).ok_or_else(|| InputError::Invalid("report has no chart".into()));
        }
        if let Ok(p) = serde_json::from_value::<ProblemFile>(value.clone()) {
            return p.chart.ok_or_else(|| InputError::Invalid("problem file has no chart".into()));
        }
        return serde_json::from_value(value).map_err(|e| InputError::Json(e.to_string()));
    }
    let body = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty() && *l != "chart:");
    parse_chart_lines(body)
}

/// The loaded system as an explicit problem file.
fn expanded(loaded: &Loaded, problem: &ProblemFile) -> ProblemFile {
    let chart = loaded.chart();
    let system = match loaded {
        Loaded::Distribution(d) => System::Distribution {
            coordinates: chart.coords().iter().map(|s| s.name().to_string()).collect(),
            fields: d.generators().iter().map(|g| g.components().iter().map(Expr::to_string).collect()).collect(),
        },
        Loaded::Control(s) => System::Control {
            time: s.time().name().to_string(),
            states: s.states().iter().map(|x| x.name().to_string()).collect(),
            controls: s.controls().iter().map(|x| x.name().to_string()).collect(),
            dynamics: s.dynamics().iter().map(Expr::to_string).collect(),
        },
    };
    ProblemFile {
        system,
        parameters: chart.params().iter().map(|s| s.name().to_string()).collect(),
        hints: problem.hints.clone(),
        seed: problem.seed,
        chart: problem.chart.clone(),
    }
}
