//! Command line front end.
//!
//! Exit codes: 0 when every expected check passes, 1 when one fails, 2 on
//! usage, parse or I/O errors. Every JSON report carries the version string
//! and the [`RunConfig`] that produced it.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::compensator::{self, Acceptance, CompensatorSpec};
use crate::conditions::{self, SuiteInputs};
use crate::decay::{self, Profile, RadialQuadrature};
use crate::error::{Error, Result};
use crate::exec;
use crate::model::Model;
use crate::props::{self, PropsConfig};
use crate::report::{self, ConditionEntry, ConditionName};
use crate::spectrum::{self, Classification, ClassifyConfig, SpectrumSweep};
use crate::sphere::SphereSampling;
use crate::svg::{self, Guide, PlotLabels, Series};
use crate::system::Envelope;

#[derive(Debug, Parser)]
#[command(name = "hyperdiss", version, about = "Dissipativity checks and decay certification for symmetric hyperbolic systems")]
pub struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "HYPERDISS_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomized property modes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the condition suite on a model.
    Check(CheckArgs),
    /// Build a Kalman-type compensator.
    BuildK(BuildKArgs),
    /// Sweep the spectral abscissa over frequencies.
    Spectrum(SpectrumArgs),
    /// Classify the dissipativity type (p, q).
    Classify(ClassifyArgs),
    /// Tune and certify a Lyapunov decay estimate.
    Certify(CertifyArgs),
    /// Measure L² decay of a radial initial profile.
    Decay(DecayArgs),
    /// Plot a decay curve on log-log axes.
    Plot(PlotArgs),
    /// Write a model as a model file.
    Export(ExportArgs),
    /// Run the randomized property suites.
    Props(PropsArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub s_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub s_max: f64,
    #[arg(long, default_value_t = 61)]
    pub s_points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    /// `builtin:<name>?k=v&...` or a model file.
    #[arg(long)]
    pub model: String,
    /// Directions sampled on the unit sphere (ignored for n = 1).
    #[arg(long)]
    pub omega_samples: Option<usize>,
    /// Relative positivity threshold.
    #[arg(long, default_value_t = report::POSITIVITY_RTOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BuildKArgs {
    #[arg(long)]
    pub model: String,
    /// Fixed μ in (0, 1); the default searches μ = 2⁻¹, 2⁻², ...
    #[arg(long, conflicts_with = "auto")]
    pub mu: Option<f64>,
    #[arg(long)]
    pub auto: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub target_margin: f64,
    #[arg(long)]
    pub omega_samples: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub model: String,
    /// Restrict to the constraint-invariant subspace.
    #[arg(long)]
    pub restricted: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub omega_samples: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(id = "source", required = true, multiple = false, args = ["sweep", "model"])]
pub struct ClassifyArgs {
    /// Sweep CSV written by `spectrum`.
    #[arg(long)]
    pub sweep: Option<PathBuf>,
    /// Sweep a model directly (restricted when it has a constraint).
    #[arg(long)]
    pub model: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub omega_samples: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub model: String,
    /// Defaults to the model's expected envelope.
    #[arg(long)]
    pub envelope: Option<Envelope>,
    #[arg(long, default_value_t = 1e-3)]
    pub s_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub s_max: f64,
    #[arg(long, default_value_t = 48)]
    pub s_points: usize,
    #[arg(long)]
    pub omega_samples: Option<usize>,
    /// Also fit the propagator norms directly.
    #[arg(long)]
    pub pointwise: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecayArgs {
    #[arg(long)]
    pub model: String,
    /// `gaussian:<width>`, `ring:<s0>,<s1>` or `powerlaw[:<sigma>]`.
    #[arg(long, default_value = "gaussian:1.0")]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    #[arg(long, default_value_t = 1e4)]
    pub t_max: f64,
    /// Allowed distance of the fitted slope from the predicted one.
    #[arg(long, default_value_t = 0.15)]
    pub slope_tol: f64,
    #[arg(long)]
    pub omega_samples: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    /// Decay CSV with columns t, norm, local_slope.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Guide slopes; defaults to the final local slope rounded to a quarter.
    #[arg(long = "guide", allow_negative_numbers = true)]
    pub guides: Vec<f64>,
    #[arg(long, default_value = "L2 decay")]
    pub title: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExportArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PropsArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub args: Value,
    /// Values filled in from defaults that depend on the model.
    pub resolved: BTreeMap<String, Value>,
}

impl RunConfig {
    fn new(command: &str, seed: u64, args: &impl Serialize) -> Self {
        RunConfig {
            command: command.into(),
            seed,
            args: serde_json::to_value(args).unwrap_or(Value::Null),
            resolved: BTreeMap::new(),
        }
    }

    fn resolve(&mut self, key: &str, v: impl Serialize) {
        self.resolved.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }
}

enum Outcome {
    Pass,
    Fail,
}

fn load_model(src: &str) -> Result<Model> {
    Model::from_source(src).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{src}: {msg}")),
        Error::Io(io) => Error::Parse(format!("{src}: {io}")),
        other => other,
    })
}

fn sampling(model: &Model, count: Option<usize>, cfg: &mut RunConfig) -> Result<SphereSampling> {
    let sph = match count {
        Some(c) => SphereSampling::new(model.sys.n(), c)?,
        None => SphereSampling::default_for(model.sys.n())?,
    };
    cfg.resolve("omega_samples", sph.len());
    cfg.resolve("sampling_scheme", sph.scheme());
    Ok(sph)
}

fn write_json(path: &Path, cfg: &RunConfig, body: Value) -> Result<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("version".into(), json!(crate::VERSION));
    doc.insert("config".into(), serde_json::to_value(cfg)?);
    if let Value::Object(m) = body {
        doc.extend(m);
    }
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &Value::Object(doc))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

#[derive(Serialize)]
struct ConditionJson<'a> {
    #[serde(flatten)]
    entry: &'a ConditionEntry,
    status: &'static str,
    expected: bool,
}

fn check(args: &CheckArgs, mut cfg: RunConfig) -> Result<Outcome> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("--tol must be positive, got {}", args.tol)));
    }
    let model = load_model(&args.model)?;
    let sph = sampling(&model, args.omega_samples, &mut cfg)?;
    let inputs = SuiteInputs {
        sys: &model.sys,
        constraint: model.constraint.as_ref(),
        s: model.s.as_ref(),
        k: model.k.as_ref(),
        s_tilde: model.s_tilde.as_ref(),
    };
    let (rep, alpha) = report::with_positivity_rtol(args.tol, || -> Result<_> {
        let rep = conditions::run_suite(inputs, &sph)?;
        let alpha = match &model.k {
            Some(k) => conditions::find_alpha(&model.sys, model.s.as_ref(), k, &sph, model.constraint.as_ref()).ok(),
            None => None,
        };
        Ok((rep, alpha))
    })?;

    let expected = &model.expected.conditions;
    let missing: Vec<ConditionName> = expected.iter().copied().filter(|c| rep.get(*c).is_none()).collect();
    let failed: Vec<ConditionName> = expected.iter().copied().filter(|c| rep.get(*c).is_some_and(|e| !e.passed)).collect();
    let conds: BTreeMap<ConditionName, ConditionJson<'_>> = rep
        .entries
        .iter()
        .map(|(n, e)| (*n, ConditionJson { entry: e, status: e.status(), expected: expected.contains(n) }))
        .collect();
    write_json(
        &args.out,
        &cfg,
        json!({
            "model": model.name,
            "conditions": conds,
            "alpha": alpha.map(|a| a.alpha),
            "alpha_certificate": alpha,
            "expected": expected,
            "expected_failed": failed,
            "expected_missing": missing,
        }),
    )?;

    println!("{}: {} directions", model.name, sph.len());
    for (n, e) in &rep.entries {
        let tag = if expected.contains(n) { "" } else { " (informational)" };
        println!("  {:<7} {:<25} margin {:>12.4e}{tag}", n.as_str(), e.status(), e.margin);
    }
    match alpha {
        Some(a) => println!("  alpha   {:.6e}", a.alpha),
        None => println!("  alpha   none"),
    }
    for c in &missing {
        println!("  expected condition {c} was not evaluated");
    }
    Ok(if failed.is_empty() && missing.is_empty() { Outcome::Pass } else { Outcome::Fail })
}

fn build_k(args: &BuildKArgs, mut cfg: RunConfig) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let sph = sampling(&model, args.omega_samples, &mut cfg)?;
    let acceptance = match &model.constraint {
        Some(cb) => Acceptance::Restricted(cb),
        None => Acceptance::Full,
    };
    let body = match args.mu {
        Some(mu) => {
            let spec = CompensatorSpec::kalman(mu, model.sys.m())?;
            let entry = match &model.constraint {
                Some(cb) => conditions::check_kstar(&model.sys, cb, &spec, &sph)?,
                None => conditions::check_k(&model.sys, &spec, &sph)?,
            };
            println!("mu = {mu:e}: {} {} margin {:.4e}", acceptance.condition(), entry.status(), entry.margin);
            let passed = entry.passed;
            write_json(&args.out, &cfg, json!({ "spec": spec, "check": { "condition": acceptance.condition(), "entry": entry } }))?;
            return Ok(if passed { Outcome::Pass } else { Outcome::Fail });
        }
        None => match compensator::tune_mu(&model.sys, &sph, args.target_margin, acceptance) {
            Ok(t) => {
                if let CompensatorSpec::Kalman(p) = &t.spec {
                    println!("mu = {:e}: {} margin {:.4e} (scale {:.4e})", p.mu, t.certified_by, t.margin, t.scale);
                }
                json!({ "spec": t.spec, "tuning": t })
            }
            Err(e @ (Error::SearchFailed(_) | Error::Precondition(_))) => {
                println!("no compensator: {e}");
                write_json(&args.out, &cfg, json!({ "spec": Value::Null, "error": e.to_string() }))?;
                return Ok(Outcome::Fail);
            }
            Err(e) => return Err(e),
        },
    };
    write_json(&args.out, &cfg, body)?;
    Ok(Outcome::Pass)
}

fn s_grid(g: &GridArgs) -> Result<Vec<f64>> {
    spectrum::log_grid(g.s_min, g.s_max, g.s_points)
}

fn spectrum_cmd(args: &SpectrumArgs, mut cfg: RunConfig) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let sph = sampling(&model, args.omega_samples, &mut cfg)?;
    let cb = match (args.restricted, &model.constraint) {
        (true, Some(cb)) => Some(cb),
        (true, None) => return Err(Error::InvalidParameter(format!("--restricted needs a constraint; {} has none", model.name))),
        (false, _) => None,
    };
    let sw = spectrum::sweep(&model.sys, &s_grid(&args.grid)?, &sph, cb)?;
    sw.write_csv(create(&args.out)?)?;
    let worst = sw.abscissa.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("{}: {} x {} samples, max Re lambda = {worst:.4e}", model.name, sw.s_grid.len(), sw.omegas.len());
    Ok(Outcome::Pass)
}

fn describe(c: &Classification) -> String {
    match c {
        Classification::Classified(t) => format!("type ({}, {}), c = {:.4e}", t.p, t.q, t.c),
        Classification::Unclassified { reason, .. } => format!("unclassified: {reason}"),
    }
}

fn classify_cmd(args: &ClassifyArgs, mut cfg: RunConfig) -> Result<Outcome> {
    let ccfg = ClassifyConfig::default();
    cfg.resolve("classify", ccfg);
    let (headline, unrestricted, expected) = match (&args.sweep, &args.model) {
        (Some(path), _) => {
            let f = File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let sw = SpectrumSweep::read_csv(BufReader::new(f))?;
            (spectrum::classify(&sw, &ccfg), None, None)
        }
        (None, Some(src)) => {
            let model = load_model(src)?;
            let sph = sampling(&model, args.omega_samples, &mut cfg)?;
            let grid = s_grid(&args.grid)?;
            let full = spectrum::classify(&spectrum::sweep(&model.sys, &grid, &sph, None)?, &ccfg);
            match &model.constraint {
                Some(cb) => {
                    let r = spectrum::classify(&spectrum::sweep(&model.sys, &grid, &sph, Some(cb))?, &ccfg);
                    (r, Some(full), model.expected.dissipativity)
                }
                None => (full, None, model.expected.dissipativity),
            }
        }
        (None, None) => return Err(Error::InvalidParameter("give --sweep or --model".into())),
    };
    let pq = headline.pq();
    println!("{}", describe(&headline));
    if let Some(u) = &unrestricted {
        println!("unrestricted: {}", describe(u));
    }
    let ok = match expected {
        Some(e) => pq == Some(e),
        None => pq.is_some(),
    };
    if let (Some(e), false) = (expected, ok) {
        println!("expected type ({}, {})", e.0, e.1);
    }
    write_json(
        &args.out,
        &cfg,
        json!({
            "p": pq.map(|x| x.0),
            "q": pq.map(|x| x.1),
            "restricted": unrestricted.is_some(),
            "classification": headline,
            "unrestricted": unrestricted,
            "expected": expected,
        }),
    )?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn compensator_for(model: &Model, sph: &SphereSampling) -> Result<CompensatorSpec> {
    if let Some(k) = &model.k {
        return Ok(k.clone());
    }
    let acceptance = match &model.constraint {
        Some(cb) => Acceptance::Restricted(cb),
        None => Acceptance::Full,
    };
    Ok(compensator::tune_mu(&model.sys, sph, 1e-6, acceptance)?.spec)
}

fn certify_cmd(args: &CertifyArgs, mut cfg: RunConfig) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let envelope = args
        .envelope
        .or(model.expected.envelope)
        .ok_or_else(|| Error::InvalidParameter(format!("{} has no expected envelope; pass --envelope", model.name)))?;
    cfg.resolve("envelope", envelope);
    let sph = sampling(&model, args.omega_samples, &mut cfg)?;
    let grid = spectrum::log_grid(args.s_min, args.s_max, args.s_points)?;
    let k = compensator_for(&model, &sph)?;
    cfg.resolve("compensator", &k);
    let cb = model.constraint.as_ref();
    let tuning = match decay::tune_lyapunov(&model.sys, model.s.as_ref(), &k, cb, envelope, &grid, &sph) {
        Ok(t) => t,
        Err(e @ Error::SearchFailed(_)) => {
            println!("not certified: {e}");
            write_json(&args.out, &cfg, json!({ "certified": false, "error": e.to_string() }))?;
            return Ok(Outcome::Fail);
        }
        Err(e) => return Err(e),
    };
    let cert = &tuning.certificate;
    println!(
        "{}: envelope {} certified {} with c = {:.4e}, C = {:.4e} (alpha1 {:e}, alpha2 {:e}, sign2 {:+})",
        model.name,
        envelope.as_str(),
        cert.certified,
        tuning.c,
        cert.constant,
        tuning.params.alpha1,
        tuning.params.alpha2,
        tuning.params.sign2
    );
    let pointwise = if args.pointwise {
        let fit = decay::pointwise_check(&model.sys, cb, &grid, &sph, envelope, &decay::default_pointwise_times())?;
        match (fit.c_fit, fit.constant) {
            (Some(c), Some(cc)) => println!("pointwise fit: c = {c:.4e}, C = {cc:.4e}"),
            _ => println!("pointwise fit failed at {} samples", fit.violations.len()),
        }
        Some(fit)
    } else {
        None
    };
    let ok = cert.certified && tuning.c > 0.0 && pointwise.as_ref().is_none_or(|f| f.fits());
    write_json(&args.out, &cfg, json!({ "certified": cert.certified, "c": tuning.c, "tuning": tuning, "pointwise": pointwise }))?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn decay_cmd(args: &DecayArgs, mut cfg: RunConfig) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let profile: Profile = args.profile.parse()?;
    let sph = sampling(&model, args.omega_samples, &mut cfg)?;
    let t_grid = decay::default_decay_times(args.t_max)?;
    let fit = decay::l2_decay_fit(&model.sys, model.constraint.as_ref(), profile, args.k, args.ell, &t_grid, &RadialQuadrature::default(), &sph, None)?;
    fit.write_csv(create(&args.out)?)?;
    print!("{}: {profile}, k = {}, ell = {}: slope {:.4} over t in [{:e}, {:e}]", model.name, args.k, args.ell, fit.fitted_slope, fit.window.0, fit.window.1);
    match fit.target_slope {
        Some(t) => println!(", predicted {t:.4}"),
        None => println!(),
    }
    let ok = fit.target_slope.is_none_or(|t| (fit.fitted_slope - t).abs() <= args.slope_tol);
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

/// Reads `t, norm, local_slope` rows.
fn read_decay_csv(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let f = File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut rd = csv::Reader::from_reader(BufReader::new(f));
    let header = rd.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["t", "norm", "local_slope"] {
        return Err(Error::Parse(format!("{}: expected columns t, norm, local_slope", path.display())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec[k].trim().parse().map_err(|_| Error::Parse(format!("{} row {}: bad number '{}'", path.display(), i + 2, &rec[k])))
        };
        rows.push((num(0)?, num(1)?, num(2)?));
    }
    Ok(rows)
}

fn plot_cmd(args: &PlotArgs, _cfg: RunConfig) -> Result<Outcome> {
    let rows = read_decay_csv(&args.input)?;
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (1.0 + r.0, r.1)).collect();
    let guides: Vec<Guide> = if args.guides.is_empty() {
        let last = rows.last().map_or(0.0, |r| r.2);
        vec![Guide::slope((last * 4.0).round() / 4.0)]
    } else {
        args.guides.iter().map(|&s| Guide::slope(s)).collect()
    };
    let series = [Series { label: "norm".into(), points }];
    let labels = PlotLabels { title: args.title.clone(), x: "1 + t".into(), y: "norm".into() };
    svg::write_svg(&args.out, &series, &guides, &labels)?;
    println!("wrote {} ({} points)", args.out.display(), rows.len());
    Ok(Outcome::Pass)
}

fn export_cmd(args: &ExportArgs, _cfg: RunConfig) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let mut w = create(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &model.to_file())?;
    writeln!(w)?;
    w.flush()?;
    println!("wrote {}", args.out.display());
    Ok(Outcome::Pass)
}

fn props_cmd(args: &PropsArgs, cfg: RunConfig) -> Result<Outcome> {
    let pc = PropsConfig { seed: cfg.seed, ..PropsConfig::default() };
    let out = props::run_all(&pc)?;
    for o in &out {
        println!(
            "{:<28} {} ({} trials, {} failures, worst {:.3e}, threshold {:.1e})",
            o.name,
            if o.passed { "pass" } else { "FAIL" },
            o.trials,
            o.failures,
            o.worst,
            o.threshold
        );
    }
    if let Some(path) = &args.out {
        write_json(path, &cfg, json!({ "props": pc, "outcomes": out }))?;
    }
    Ok(if out.iter().all(|o| o.passed) { Outcome::Pass } else { Outcome::Fail })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Check(a) => check(a, RunConfig::new("check", seed, a)),
        Command::BuildK(a) => build_k(a, RunConfig::new("build-k", seed, a)),
        Command::Spectrum(a) => spectrum_cmd(a, RunConfig::new("spectrum", seed, a)),
        Command::Classify(a) => classify_cmd(a, RunConfig::new("classify", seed, a)),
        Command::Certify(a) => certify_cmd(a, RunConfig::new("certify", seed, a)),
        Command::Decay(a) => decay_cmd(a, RunConfig::new("decay", seed, a)),
        Command::Plot(a) => plot_cmd(a, RunConfig::new("plot", seed, a)),
        Command::Export(a) => export_cmd(a, RunConfig::new("export", seed, a)),
        Command::Props(a) => props_cmd(a, RunConfig::new("props", seed, a)),
    }
}

/// Exit code for an error: 2 for bad input, 1 for failed computations.
pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) | Error::Dimension(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Plot(_) => 2,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> ExitCode {
    exec::init_threads(cli.threads);
    match dispatch(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

pub fn main() -> ExitCode {
    run(Cli::parse())
}
