//! Command-line front end. Every command reads a [`JobConfig`], prints a
//! text or JSON document on stdout and, given an output directory, writes
//! the same document plus its artifacts there. Nothing time- or
//! locale-dependent goes into any output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{check_el_with, check_feasible_with, gap_report, theorem1_bound, SuiteOptions};
use crate::config::{JobConfig, DEFAULT_FEASIBILITY_SAMPLES, DEFAULT_GRID, DEFAULT_SAMPLES, DEFAULT_SAMPLE_POINTS};
use crate::construct::{
    concave_construct, constructions_for, convex_diag, convex_plateau, linear_opt, ConstructionResult, Kind,
};
use crate::el::{ElExpr, OrthantFunction};
use crate::error::{Error, Result};
use crate::lp::{build_lp, solve_lp, LpStatus, RowKind};
use crate::point::Point;
use crate::surface::{Hyperplane, SSurface, Shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SUITE: i32 = 4;
pub const EXIT_SOLVER: i32 = 5;

/// Multiple of the intercept box used for suites and sample grids.
pub const BOX_FACTOR: f64 = 1.25;

#[derive(Parser, Debug)]
#[command(name = "elopt", version, about = "EL functions, optimal constructions and their bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Surface validation report.
    Validate,
    /// Normal-ratio lower bound and its witness.
    Bound,
    /// Build the constructions matching the surface's shape.
    Construct,
    /// EL property suite and feasibility check.
    Check,
    /// Grid LP lower bound over an m-sweep.
    Lp,
    /// Lower bounds, construction cost and gaps.
    Report,
    /// CSV grid of values and one-sided partials.
    Sample,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_name = "M[,M...]", value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSurface(_) | Error::ShapeMismatch(_) | Error::NoTPoint => EXIT_VALIDATION,
        Error::Verification(_) => EXIT_SUITE,
        Error::Solver(_) => EXIT_SOLVER,
        _ => EXIT_CONFIG,
    }
}

struct Job {
    cfg: JobConfig,
    seed: u64,
    samples: usize,
    grid: Vec<usize>,
    out: Option<PathBuf>,
}

struct Outcome {
    doc: Value,
    text: String,
    code: i32,
    /// Written to the output directory: (file name, contents).
    files: Vec<(String, String)>,
    /// Replaces the document on stdout.
    raw: Option<String>,
}

impl Outcome {
    fn new(doc: Value, text: String, code: i32) -> Self {
        Outcome {
            doc,
            text,
            code,
            files: Vec::new(),
            raw: None,
        }
    }
}

/// Parses `args` and runs the command, writing to `stdout` and `stderr`.
pub fn main_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    run(&cli, stdout, stderr)
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_inner(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn run_inner(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let path = cli
        .opts
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let cfg = JobConfig::load(path)?;
    let job = Job {
        seed: cli.opts.seed.or(cfg.seed).unwrap_or(0),
        samples: cli.opts.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES),
        grid: cli.opts.grid.clone().or(cfg.grid.clone()).unwrap_or(DEFAULT_GRID.to_vec()),
        out: cli.opts.out.clone().or(cfg.out.clone()),
        cfg,
    };
    if job.grid.is_empty() {
        return Err(Error::Config("empty --grid".into()));
    }
    let outcome = match cli.command {
        Command::Validate => validate(&job),
        Command::Bound => bound(&job)?,
        Command::Construct => construct(&job)?,
        Command::Check => check(&job)?,
        Command::Lp => lp(&job)?,
        Command::Report => report(&job)?,
        Command::Sample => sample(&job)?,
    };

    let doc = serde_json::to_string_pretty(&outcome.doc).expect("document serializes") + "\n";
    if let Some(dir) = &job.out {
        std::fs::create_dir_all(dir)?;
        let name = format!("{}.json", command_name(cli.command));
        std::fs::write(dir.join(name), &doc)?;
        for (name, contents) in &outcome.files {
            std::fs::write(dir.join(name), contents)?;
        }
    }
    let shown = match (&outcome.raw, cli.opts.format) {
        (Some(raw), _) => raw.as_str(),
        (None, Format::Json) => doc.as_str(),
        (None, Format::Text) => outcome.text.as_str(),
    };
    stdout.write_all(shown.as_bytes())?;
    Ok(outcome.code)
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Bound => "bound",
        Command::Construct => "construct",
        Command::Check => "check",
        Command::Lp => "lp",
        Command::Report => "report",
        Command::Sample => "sample",
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Linear => "linear",
        Kind::ConvexPlateau => "convex_plateau",
        Kind::ConvexDiag => "convex_diag",
        Kind::ConcaveStep => "concave_step",
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn require_valid(surface: &SSurface) -> Result<()> {
    let r = surface.validate();
    if r.valid {
        Ok(())
    } else {
        Err(Error::InvalidSurface(r.violations.join("; ")))
    }
}

fn validate(job: &Job) -> Outcome {
    let r = job.cfg.surface.validate();
    let mut text = format!("valid: {}\nshape: {:?}\n", r.valid, r.shape);
    if let (Some(lo), Some(hi)) = (r.slope_min, r.slope_max) {
        writeln!(text, "slope range: [{lo}, {hi}]").unwrap();
    }
    for v in &r.violations {
        writeln!(text, "violation: {v}").unwrap();
    }
    let code = if r.valid { EXIT_OK } else { EXIT_VALIDATION };
    Outcome::new(to_value(&r), text, code)
}

fn bound(job: &Job) -> Result<Outcome> {
    let w = theorem1_bound(&job.cfg.surface)?;
    let mut text = format!("thm1_bound: {}\n", w.value);
    writeln!(
        text,
        "witness: point {:?}, ratio grad[{}] / grad[{}]{}",
        w.point,
        w.j,
        w.i,
        if w.closure { " (sup over closure)" } else { "" }
    )
    .unwrap();
    Ok(Outcome::new(to_value(&w), text, EXIT_OK))
}

/// The constructions the job asks for: the configured one, or all that apply.
fn constructions(job: &Job) -> Result<Vec<ConstructionResult>> {
    let surface = &job.cfg.surface;
    let Some(kind) = job.cfg.construction else {
        return constructions_for(surface);
    };
    require_valid(surface)?;
    let r = match (kind, surface) {
        (Kind::Linear, SSurface::Hyperplane(h)) => linear_opt(h)?,
        (Kind::Linear, SSurface::Curve(c)) if c.shape() == Shape::Linear => {
            linear_opt(&Hyperplane::new(vec![c.b(), c.a()], c.a() * c.b())?)?
        }
        (Kind::ConvexPlateau, SSurface::Curve(c)) => convex_plateau(c)?,
        (Kind::ConvexDiag, SSurface::Curve(c)) => convex_diag(c)?,
        (Kind::ConcaveStep, SSurface::Curve(c)) => concave_construct(c)?,
        (k, _) => {
            return Err(Error::ShapeMismatch(format!(
                "{} construction does not apply to this surface",
                kind_name(k)
            )))
        }
    };
    Ok(vec![r])
}

/// Expressions to check or sample: the configured file, else constructions.
fn expressions(job: &Job) -> Result<Vec<(String, ElExpr)>> {
    if let Some(path) = &job.cfg.expr {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let expr: ElExpr = serde_json::from_str(&text).map_err(|e| Error::Config(format!("expr: {e}")))?;
        if expr.dim() != job.cfg.surface.dim() {
            return Err(Error::DimensionMismatch {
                expected: job.cfg.surface.dim(),
                got: expr.dim(),
            });
        }
        return Ok(vec![("expr".to_string(), expr)]);
    }
    Ok(constructions(job)?
        .into_iter()
        .map(|c| (kind_name(c.kind).to_string(), c.expr))
        .collect())
}

fn suite_box(surface: &SSurface) -> Result<Point> {
    Point::new(surface.intercept_box().iter().map(|v| BOX_FACTOR * v).collect())
}

fn construct(job: &Job) -> Result<Outcome> {
    let built = constructions(job)?;
    let t = match &job.cfg.surface {
        SSurface::Curve(c) => c.t_point(),
        SSurface::Hyperplane(_) => None,
    };
    let mut items = Vec::new();
    let mut files = Vec::new();
    let mut text = String::new();
    for c in &built {
        let name = kind_name(c.kind);
        let cost_total = c.expr.cost_total().ok();
        let at_t = t.map(|t| c.expr.value(&[t.t_x, t.t_y]));
        let file = format!("construction_{name}.json");
        files.push((
            file.clone(),
            serde_json::to_string_pretty(&c.expr).expect("expression serializes") + "\n",
        ));
        writeln!(
            text,
            "{name}: cost {} (closed form {}), cost_total {}, scale {}{}",
            c.expr.cost(),
            c.claimed_cost,
            cost_total.map_or("unbounded".to_string(), |v| v.to_string()),
            c.scale_k,
            at_t.map_or(String::new(), |v| format!(", value at T {v}")),
        )
        .unwrap();
        items.push(json!({
            "kind": c.kind,
            "cost": c.expr.cost(),
            "claimed_cost": c.claimed_cost,
            "cost_total": cost_total,
            "scale_k": c.scale_k,
            "value_at_t": at_t,
            "file": file,
            "expr": c.expr,
        }));
    }
    let mut o = Outcome::new(json!({ "t_point": t, "constructions": items }), text, EXIT_OK);
    o.files = files;
    Ok(o)
}

fn check(job: &Job) -> Result<Outcome> {
    let surface = &job.cfg.surface;
    require_valid(surface)?;
    let bbox = suite_box(surface)?;
    let opts = SuiteOptions {
        samples: job.samples,
        seed: job.seed,
        ..SuiteOptions::default()
    };
    let fsamples = job.cfg.feasibility_samples.unwrap_or(DEFAULT_FEASIBILITY_SAMPLES);
    let mut items = Vec::new();
    let mut text = String::new();
    let mut all_ok = true;
    for (name, expr) in expressions(job)? {
        let el = check_el_with(&expr, &bbox, &opts)?;
        let feas = check_feasible_with(
            &expr,
            surface,
            &SuiteOptions {
                samples: fsamples,
                ..opts.clone()
            },
        )?;
        all_ok &= el.passed && feas.feasible;
        writeln!(text, "{name}: el {}, feasible {} (min jump {})", pass(el.passed), pass(feas.feasible), feas.min_jump)
            .unwrap();
        for v in el.failures() {
            writeln!(text, "  {:?} fails: worst violation {:e}, witness {:?}", v.property, v.worst_violation, v.witness)
                .unwrap();
        }
        items.push(json!({ "name": name, "el": el, "feasibility": feas }));
    }
    let code = if all_ok { EXIT_OK } else { EXIT_SUITE };
    Ok(Outcome::new(json!({ "checks": items, "passed": all_ok }), text, code))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct LpRun {
    m: usize,
    status: LpStatus,
    value: f64,
    backend: crate::lp::Backend,
    iterations: usize,
    rows: usize,
    crossing_rows: usize,
    warnings: Vec<String>,
}

/// (file name, contents) written next to the command's document.
type Artifact = (String, String);

fn lp_sweep(job: &Job) -> Result<(Vec<LpRun>, Vec<Artifact>)> {
    let surface = &job.cfg.surface;
    let results: Vec<Result<(LpRun, Option<Artifact>)>> = job
        .grid
        .par_iter()
        .map(|&m| {
            let lp = build_lp(surface, m)?;
            let sol = solve_lp(&lp)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Solver(format!("m = {m}: status {:?}", sol.status)));
            }
            let dump = job.cfg.lp_dump.then(|| (format!("grid_m{m}.lp"), lp.to_lp_format()));
            Ok((
                LpRun {
                    m,
                    status: sol.status,
                    value: sol.value,
                    backend: sol.backend,
                    iterations: sol.iterations,
                    rows: lp.rows.len(),
                    crossing_rows: lp.count(RowKind::Crossing),
                    warnings: lp.warnings.clone(),
                },
                dump,
            ))
        })
        .collect();
    let mut runs = Vec::new();
    let mut files = Vec::new();
    for r in results {
        let (run, dump) = r?;
        runs.push(run);
        files.extend(dump);
    }
    Ok((runs, files))
}

fn lp(job: &Job) -> Result<Outcome> {
    let (runs, files) = lp_sweep(job)?;
    let mut text = String::new();
    for r in &runs {
        writeln!(text, "m = {}: lp bound {} ({:?}, {} crossing rows)", r.m, r.value, r.backend, r.crossing_rows).unwrap();
        for w in &r.warnings {
            writeln!(text, "  warning: {w}").unwrap();
        }
    }
    let mut o = Outcome::new(json!({ "runs": runs }), text, EXIT_OK);
    o.files = files;
    Ok(o)
}

fn report(job: &Job) -> Result<Outcome> {
    let surface = &job.cfg.surface;
    let mut rep = gap_report(surface, None)?;
    let mut runs = Vec::new();
    let mut files = Vec::new();
    if surface.dim() == 2 {
        (runs, files) = lp_sweep(job)?;
        // every grid value is a valid lower bound; keep the best
        if let Some(best) = runs.iter().max_by(|p, q| p.value.total_cmp(&q.value)) {
            rep.lp_m = Some(best.m);
            rep.lp_backend = Some(best.backend);
            rep.lp_bound = Some(best.value);
            rep.gap_lp = Some(rep.thm1_bound - best.value);
        }
    }
    let mut text = format!("thm1_bound: {} (sup over closure: {})\n", rep.thm1_bound, rep.witness.closure);
    if let (Some(k), Some(c)) = (rep.construction_kind, rep.construction_cost) {
        writeln!(text, "construction: {} cost {}", kind_name(k), c).unwrap();
    }
    if let Some(g) = rep.gap_construction {
        writeln!(text, "gap construction - thm1: {g}").unwrap();
    }
    for r in &runs {
        writeln!(text, "lp m = {}: {}", r.m, r.value).unwrap();
    }
    if let Some(g) = rep.gap_lp {
        writeln!(text, "gap thm1 - best lp: {g}").unwrap();
    }
    let mut o = Outcome::new(json!({ "report": rep, "lp_runs": runs }), text, EXIT_OK);
    o.files = files;
    Ok(o)
}

/// `x,y,f,fx_left,fx_right,fy_left,fy_right` on an `n x n` grid over the
/// enlarged intercept box; an undefined left partial is an empty field.
pub fn sample_csv(expr: &ElExpr, bbox: &[f64], n: usize) -> String {
    let mut s = String::from("x,y,f,fx_left,fx_right,fy_left,fy_right\n");
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for i in 0..n {
        for j in 0..n {
            let x = bbox[0] * i as f64 / (n - 1) as f64;
            let y = bbox[1] * j as f64 / (n - 1) as f64;
            let g = expr.one_sided(&[x, y]);
            writeln!(
                s,
                "{x},{y},{},{},{},{},{}",
                expr.value(&[x, y]),
                opt(g.left[0]),
                g.right[0],
                opt(g.left[1]),
                g.right[1]
            )
            .unwrap();
        }
    }
    s
}

fn sample(job: &Job) -> Result<Outcome> {
    let surface = &job.cfg.surface;
    if surface.dim() != 2 {
        return Err(Error::Config("sample needs a planar surface".into()));
    }
    require_valid(surface)?;
    let bbox = suite_box(surface)?;
    let n = job.cfg.sample_points.unwrap_or(DEFAULT_SAMPLE_POINTS);
    let exprs = expressions(job)?;
    let mut files = Vec::new();
    let mut text = String::new();
    for (name, expr) in &exprs {
        let file = format!("samples_{name}.csv");
        writeln!(text, "{name}: {} points -> {file}", n * n).unwrap();
        files.push((file, sample_csv(expr, &bbox, n)));
    }
    let names: Vec<&str> = files.iter().map(|f| f.0.as_str()).collect();
    let doc = json!({ "points_per_axis": n, "box": bbox.coords(), "files": names });
    let mut o = Outcome::new(doc, text, EXIT_OK);
    if job.out.is_none() {
        // without an output directory the first CSV goes to stdout
        o.raw = files.first().map(|f| f.1.clone());
    }
    o.files = files;
    Ok(o)
}

/// Path helper for tests and examples.
pub fn output_file(dir: &Path, command: Command) -> PathBuf {
    dir.join(format!("{}.json", command_name(command)))
}
