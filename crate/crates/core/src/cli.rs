//! Command-line front end.
//!
//! Inputs are `gallery:NAME`, a curvature JSON document, a quiver JSON
//! document, or a CSV polyline with columns `x,y` or `t,x,y`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::congruence::{self, Tolerances};
use crate::curvature::CurvatureFunction;
use crate::curve::{bbox_diag, norm, PlaneCurve, Vec2};
use crate::error::{Error, Result};
use crate::format::fmt9;
use crate::gallery::{self, GalleryItem};
use crate::quiver::{build_quiver_with, QuiverOptions, SignatureQuiver};
use crate::reconstruction::{closure_info, reconstruct};
use crate::signature::{self, Signature};
use crate::svg::Plot;
use crate::synthesis::{synthesize_batch, synthesize_curve};
use crate::verify;
use crate::words::{self, Word};

#[derive(Parser, Debug)]
#[command(name = "sigquiver", version, about = "Euclidean signatures, signature quivers and curve synthesis")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    /// Write output to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct TolArgs {
    /// Signature samples per period.
    #[arg(long, global = true, default_value_t = signature::DEFAULT_SAMPLES)]
    samples: usize,
    /// Clustering radius for self-intersections, relative to the signature diagonal.
    #[arg(long, global = true, default_value_t = signature::CLUSTER_REL)]
    cluster_tol: f64,
    /// Hausdorff tolerance for signature equality, relative to the diagonal.
    #[arg(long, global = true, default_value_t = congruence::SIGNATURE_REL)]
    hausdorff_tol: f64,
    /// Shift residual tolerance, relative to max |κ|.
    #[arg(long, global = true, default_value_t = congruence::RESIDUAL_REL)]
    residual_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reconstruct a curve from its curvature.
    Curve {
        input: String,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        out: PlotFormat,
    },
    /// Signature trace (s, κ, κ̇).
    Signature {
        input: String,
        #[arg(long, value_enum, default_value_t = PlotFormat::Csv)]
        out: PlotFormat,
    },
    /// Signature quiver.
    Quiver {
        input: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        out: GraphFormat,
        /// Relabel edges by (from, to, ω) instead of traversal order.
        #[arg(long)]
        canonical: bool,
    },
    /// Word algebra over a quiver.
    Words {
        #[command(subcommand)]
        cmd: WordsCommand,
    },
    /// Synthesize curves from quiver words.
    Synth {
        quiver: String,
        #[arg(long, conflicts_with = "batch", required_unless_present = "batch")]
        word: Option<String>,
        /// File with one word per line.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<i64>,
        #[arg(long, value_enum, default_value_t = SynthFormat::Csv)]
        out: SynthFormat,
    },
    /// Decide congruence under rotations and translations (exit 0 yes, 1 no).
    Congruent {
        a: String,
        b: String,
        /// Compare against the reversed traversal of B.
        #[arg(long)]
        reversed: bool,
    },
    /// Symmetry and signature indices with per-edge multiplicities and weights.
    Indices { input: String },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum WordsCommand {
    /// Closed paths with prescribed edge multiplicities, one per rotation class.
    Enumerate {
        quiver: String,
        /// `a=1,b=2,...` or `all=1`.
        #[arg(long)]
        mult: String,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = 100_000)]
        max: usize,
    },
    /// Least rotation of a closed word.
    Canonical { word: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PlotFormat {
    Csv,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SynthFormat {
    Csv,
    Svg,
    Json,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            if let Err(e) = emit(cli.output.as_deref(), &text) {
                eprintln!("error: {e}");
                return 2;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    use std::io::Write as _;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

enum Input {
    Curvature(CurvatureFunction),
    Curve(PlaneCurve),
    Quiver(Box<SignatureQuiver>),
}

fn load(spec: &str) -> Result<Input> {
    if let Some(name) = spec.strip_prefix("gallery:") {
        return Ok(match gallery::lookup(name)? {
            GalleryItem::Curvature(f) => Input::Curvature(f),
            GalleryItem::Curve(c) => Input::Curve(c),
        });
    }
    let text = std::fs::read_to_string(spec)?;
    if spec.to_ascii_lowercase().ends_with(".csv") {
        return read_polyline(&text).map(Input::Curve);
    }
    let v: serde_json::Value = serde_json::from_str(&text)?;
    if v.get("edges").is_some() {
        Ok(Input::Quiver(Box::new(SignatureQuiver::from_json(&text)?)))
    } else {
        Ok(Input::Curvature(CurvatureFunction::from_json(&text)?))
    }
}

/// `x,y` or `t,x,y` rows; a non-numeric first line is a header. The polyline
/// is closed when its last point repeats the first.
fn read_polyline(text: &str) -> Result<PlaneCurve> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(r) if r.len() == 2 || r.len() == 3 => rows.push(r),
            Err(_) if rows.is_empty() && i == 0 => continue,
            _ => return Err(Error::Csv(format!("line {}: expected x,y or t,x,y", i + 1))),
        }
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Csv("inconsistent or empty polyline".into()));
    }
    let pts: Vec<Vec2> = rows.iter().map(|r| [r[r.len() - 2], r[r.len() - 1]]).collect();
    let t: Vec<f64> = if rows[0].len() == 3 {
        rows.iter().map(|r| r[0]).collect()
    } else {
        let mut acc = 0.0;
        let mut t = vec![0.0];
        for w in pts.windows(2) {
            acc += norm([w[1][0] - w[0][0], w[1][1] - w[0][1]]);
            t.push(acc);
        }
        t
    };
    let n = pts.len();
    let gap = norm([pts[n - 1][0] - pts[0][0], pts[n - 1][1] - pts[0][1]]);
    let closed = n > 1 && gap <= 1e-12 * bbox_diag(&pts).max(1e-300);
    PlaneCurve::from_polyline(&t, &pts, closed)
}

impl Input {
    fn curvature(&self) -> Result<CurvatureFunction> {
        match self {
            Input::Curvature(f) => Ok(f.clone()),
            Input::Quiver(q) => Ok(q.kappa().clone()),
            Input::Curve(c) => congruence::sampled_curvature(c, congruence::SHIFT_GRID),
        }
    }

    fn curve(&self) -> Result<PlaneCurve> {
        match self {
            Input::Curve(c) => Ok(c.clone()),
            other => Ok(reconstruct(&other.curvature()?)?.0),
        }
    }

    fn signature(&self, samples: usize) -> Result<Signature> {
        match self {
            Input::Curve(c) => signature::signature_of_curve(c),
            other => signature::signature_of(&other.curvature()?, samples),
        }
    }

    fn quiver(self, opts: QuiverOptions) -> Result<SignatureQuiver> {
        match self {
            Input::Quiver(q) => Ok(*q),
            other => build_quiver_with(&other.exact_curvature()?, opts),
        }
    }

    /// Quivers need `κ̇` far below finite-difference noise.
    fn exact_curvature(&self) -> Result<CurvatureFunction> {
        match self {
            Input::Curve(_) => Err(Error::InvalidSpec(
                "polyline input supports curve, signature and congruent only; quivers need a curvature document".into(),
            )),
            other => other.curvature(),
        }
    }
}

fn warn_all(warnings: &[String]) {
    const SHOWN: usize = 8;
    for w in warnings.iter().take(SHOWN) {
        eprintln!("warning: {w}");
    }
    if warnings.len() > SHOWN {
        eprintln!("warning: {} more", warnings.len() - SHOWN);
    }
}

fn quiver_options(t: &TolArgs) -> QuiverOptions {
    QuiverOptions { samples: t.samples, cluster_rel: t.cluster_tol, ..QuiverOptions::default() }
}

fn check_tolerances(t: &TolArgs) -> Result<()> {
    for (name, v) in [("cluster-tol", t.cluster_tol), ("hausdorff-tol", t.hausdorff_tol), ("residual-tol", t.residual_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidSpec(format!("--{name} must be positive")));
        }
    }
    if t.samples < 16 {
        return Err(Error::InvalidSpec("--samples must be at least 16".into()));
    }
    Ok(())
}

fn curve_csv(c: &PlaneCurve) -> String {
    let mut out = String::from("s,x,y\n");
    for (s, smp) in c.cumulative_length().iter().zip(c.samples()) {
        // coordinates round-trip exactly: curvature is read back through second differences
        let _ = writeln!(out, "{},{:?},{:?}", fmt9(*s), smp.p[0], smp.p[1]);
    }
    out
}

fn curve_svg(title: &str, c: &PlaneCurve) -> String {
    Plot::new(title, true).polyline(c.decimated_points(8192), c.is_closed(), "#1f4e9c").render()
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let t = &cli.tol;
    check_tolerances(t)?;
    match &cli.command {
        Command::Curve { input, out } => {
            let c = load(input)?.curve()?;
            if !c.is_closed() {
                eprintln!("warning: curve does not close (relative gap {})", fmt9(c.closure_gap()));
            }
            Ok((
                match out {
                    PlotFormat::Csv => curve_csv(&c),
                    PlotFormat::Svg => curve_svg(input, &c),
                },
                0,
            ))
        }
        Command::Signature { input, out } => {
            let sig = load(input)?.signature(t.samples)?;
            if sig.degenerate {
                eprintln!("warning: vertices of the curve accumulate below the sampling resolution");
            }
            let text = match out {
                PlotFormat::Csv => signature::to_csv(&sig),
                PlotFormat::Svg => {
                    let report = signature::self_intersections_with(&sig, t.cluster_tol);
                    warn_all(&report.warnings);
                    Plot::new(input, false)
                        .polyline(sig.points(), sig.periodic, "#9c1f1f")
                        .marks(report.vertices.iter().map(|v| v.location).collect())
                        .render()
                }
            };
            Ok((text, 0))
        }
        Command::Quiver { input, out, canonical } => {
            let mut q = load(input)?.quiver(quiver_options(t))?;
            if *canonical {
                q.canonical_relabel();
            }
            warn_all(&q.warnings);
            Ok((
                match out {
                    GraphFormat::Dot => q.to_dot(),
                    GraphFormat::Json => q.to_json() + "\n",
                },
                0,
            ))
        }
        Command::Words { cmd } => words_command(cmd, t),
        Command::Synth { quiver, word, batch, xi, out } => {
            let q = load(quiver)?.quiver(quiver_options(t))?;
            if let Some(path) = batch {
                if *out != SynthFormat::Csv {
                    return Err(Error::InvalidSpec("batch synthesis writes csv only".into()));
                }
                let text = std::fs::read_to_string(path)?;
                let ws = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(Word::parse)
                    .collect::<Result<Vec<_>>>()?;
                return Ok((synthesize_batch(&q, &ws, *xi), 0));
            }
            let w = Word::parse(word.as_deref().unwrap_or_default())?;
            let r = synthesize_curve(&q, &w, *xi)?;
            if !r.closure.holds {
                eprintln!("warning: weights sum to {} instead of 2π·{}", fmt9(r.closure.sum), r.closure.xi);
            }
            if !r.closed {
                eprintln!("warning: synthesized curve does not close (relative gap {})", fmt9(r.closure_gap));
            }
            Ok((
                match out {
                    SynthFormat::Csv => curve_csv(&r.curve),
                    SynthFormat::Svg => curve_svg(&r.word, &r.curve),
                    SynthFormat::Json => serde_json::to_string_pretty(&r)? + "\n",
                },
                0,
            ))
        }
        Command::Congruent { a, b, reversed } => {
            let (ia, ib) = (load(a)?, load(b)?);
            let tols = Tolerances { residual_rel: t.residual_tol, signature_rel: t.hausdorff_tol };
            let r = match (&ia, &ib) {
                (Input::Curve(_), _) | (_, Input::Curve(_)) => {
                    let c2 = ib.curve()?;
                    let c2 = if *reversed { c2.reversed() } else { c2 };
                    congruence::are_congruent_with(&ia.curve()?, &c2, tols)?
                }
                _ => {
                    let f2 = ib.curvature()?;
                    let f2 = if *reversed { f2.reversed() } else { f2 };
                    congruence::find_shift_with(&ia.curvature()?, &f2, tols)
                }
            };
            let code = if r.congruent { 0 } else { 1 };
            Ok((serde_json::to_string_pretty(&r)? + "\n", code))
        }
        Command::Indices { input } => indices(load(input)?, t),
        Command::Verify { seed, only } => {
            let reports = match only {
                Some(id) if (1..=verify::TITLES.len()).contains(id) => vec![verify::run(*id, *seed)],
                Some(id) => return Err(Error::InvalidSpec(format!("no criterion {id}"))),
                None => verify::run_all(*seed),
            };
            let mut out = String::new();
            for r in &reports {
                out.push_str(&r.summary());
                out.push('\n');
            }
            let ok = reports.iter().all(|r| r.passed);
            Ok((out, if ok { 0 } else { 1 }))
        }
    }
}

fn words_command(cmd: &WordsCommand, t: &TolArgs) -> Result<(String, i32)> {
    match cmd {
        WordsCommand::Enumerate { quiver, mult, count_only, max } => {
            let q = load(quiver)?.quiver(quiver_options(t))?;
            let mult = words::parse_multiplicities(mult, &q.labels())?;
            let graph = q.graph();
            if *count_only {
                return Ok((format!("{}\n", words::count_words(&graph, &mult)?), 0));
            }
            let e = words::enumerate_words(&graph, &mult, *max)?;
            if e.truncated {
                eprintln!("warning: stopped after {} words", e.words.len());
            }
            let mut out = String::new();
            for w in &e.words {
                out.push_str(&w.to_string());
                out.push('\n');
            }
            Ok((out, 0))
        }
        WordsCommand::Canonical { word } => {
            let w = words::canonical(&Word::parse(word)?)?;
            Ok((format!("{w}\n"), 0))
        }
    }
}

fn indices(input: Input, t: &TolArgs) -> Result<(String, i32)> {
    let f = input.exact_curvature()?;
    let info = closure_info(&f);
    let mut out = String::new();
    let m = match (info.closed, info.m) {
        (true, Some(_)) => congruence::symmetry_index(&f)?,
        _ => {
            eprintln!("warning: curve does not close; reporting one period");
            1
        }
    };
    let _ = writeln!(out, "m={m}");
    match build_quiver_with(&f, quiver_options(t)) {
        Ok(q) => {
            let _ = writeln!(out, "sig-index={}", q.sig_index());
            for e in &q.edges {
                let _ = writeln!(out, "edge {} q{}->q{} mu={} omega={}", e.label, e.from + 1, e.to + 1, e.mu, fmt9(e.omega));
            }
        }
        // every point of a simple signature is covered once per period
        Err(Error::SimpleSignature) => {
            let _ = writeln!(out, "sig-index={m}");
        }
        Err(e) => return Err(e),
    }
    Ok((out, 0))
}
