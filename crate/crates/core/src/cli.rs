//! The `nilscroll` command line: `construct`, `verify` and `examples`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::construct::{example_gallery, perturbed_circle, Example};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::io::{Branch, ConstructionRequest, RequestParams, RulingChoice, ScalarSpec};
use crate::mesh::{Mesh, MeshFormat};
use crate::tolerances::Tolerances;
use crate::verify::{junit, verify_example, verify_minimal, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// Default samples per grid axis.
const DEFAULT_N: usize = 41;

#[derive(Debug, Parser)]
#[command(name = "nilscroll", version, about = "Minimal null scrolls in Lorentzian Nil3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a scroll, write its mesh and a verification report.
    Construct(Box<ConstructArgs>),
    /// Verify gallery examples or a construction request; exit 0 iff every check passes.
    Verify(VerifyArgs),
    /// Write meshes of the closed-form gallery surfaces.
    Examples(ExamplesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Sample grid `s0:s1:ns,t0:t1:nt`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Where to write the JSON report (default: stdout for `verify`, next to `--out` for
    /// `construct`).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Tolerance override `name=value`; may be repeated.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Also write a JUnit XML summary.
    #[arg(long)]
    pub junit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Read the whole construction from a JSON request instead of flags.
    #[arg(long, conflicts_with_all = ["branch", "ruling", "b", "alpha", "k1", "ar_s", "p", "q", "x_span", "y_span", "c", "scale", "span", "step"])]
    pub request: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
    /// `circle`, `hyperbola`, `parabola`, `constant` or `csv:<path>` (columns `s,B1,B2,B3`).
    #[arg(long)]
    pub ruling: Option<RulingChoice>,
    /// Free function of the beta = 1/2 branch: a constant, `csv:<path>` or a named function.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<ScalarSpec>,
    /// Nowhere-vanishing scale of the beta = 0 and tangent branches.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<ScalarSpec>,
    /// Curvature function of the curvature branch (`csv:<path>` with columns `s,k1`).
    #[arg(long, allow_hyphen_values = true)]
    pub k1: Option<ScalarSpec>,
    /// `S(x)` of the ar-data branch.
    #[arg(long = "S", allow_hyphen_values = true)]
    pub ar_s: Option<ScalarSpec>,
    /// `p(x)` of the ar-data chart.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<ScalarSpec>,
    /// `q(y)` of the ar-data chart.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<ScalarSpec>,
    /// Interval `x0:x1` of the ar-data branch.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub x_span: Option<(f64, f64)>,
    /// Interval `y0:y1` on which the ar-data chart is checked.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub y_span: Option<(f64, f64)>,
    /// Null direction `c1,c2,c3` of the constant ruling.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub c: Option<[f64; 3]>,
    /// Scale of the constant ruling.
    #[arg(long, allow_hyphen_values = true)]
    pub scale: Option<ScalarSpec>,
    /// Parameter interval `s0:s1` of the base curve.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub span: Option<(f64, f64)>,
    /// Integration step.
    #[arg(long)]
    pub step: Option<f64>,
    /// Mesh output path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "obj")]
    pub format: MeshFormat,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Gallery names (`circle`, `parabola:0`, ...), `gallery` for all of them, or
    /// `perturbed-circle[:rate]`.
    pub targets: Vec<String>,
    /// A construction request to verify.
    #[arg(long)]
    pub request: Option<PathBuf>,
    /// Samples per axis on the default grids.
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    /// A gallery name or `all` for the five figure surfaces.
    pub name: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "obj")]
    pub format: MeshFormat,
    /// Samples per axis.
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
}

fn parse_interval(text: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = text.split_once(':').ok_or("expected a:b")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    Ok((a, b))
}

fn parse_triple(text: &str) -> std::result::Result<[f64; 3], String> {
    let v: Vec<f64> = text.split(',').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| e.to_string())?;
    <[f64; 3]>::try_from(v).map_err(|_| "expected c1,c2,c3".to_string())
}

impl ConstructArgs {
    pub fn to_request(&self) -> Result<ConstructionRequest> {
        if let Some(path) = &self.request {
            return ConstructionRequest::from_file(path);
        }
        let branch = self.branch.ok_or_else(|| Error::Invalid("--branch or --request is required".into()))?;
        let r = ConstructionRequest {
            branch,
            ruling_spec: self.ruling.clone(),
            params: RequestParams {
                alpha: self.alpha.clone(),
                b: self.b.clone(),
                k1: self.k1.clone(),
                s: self.ar_s.clone(),
                p: self.p.clone(),
                q: self.q.clone(),
                x_span: self.x_span,
                y_span: self.y_span,
                c: self.c,
                scale: self.scale.clone(),
            },
            span: self.span,
            step: self.step,
        };
        r.validate()?;
        Ok(r)
    }
}

fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for o in overrides {
        tol.apply(o)?;
    }
    Ok(tol)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Writes the JSON report (to stdout when no path is given and `stdout_free`) and the
/// optional JUnit file, prints one status line per report and returns the overall verdict.
fn emit_reports(reports: &[VerificationReport], args: &ReportArgs, stdout_free: bool) -> Result<bool> {
    let json = if reports.len() == 1 { serde_json::to_string_pretty(&reports[0])? } else { serde_json::to_string_pretty(reports)? };
    if args.report.is_some() || stdout_free {
        write_text(args.report.as_deref(), &(json + "\n"))?;
    }
    if let Some(p) = &args.junit {
        write_text(Some(p), &junit(reports))?;
    }
    let ok = reports.iter().all(VerificationReport::passed);
    for r in reports {
        let failed: Vec<&str> = r.pass.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()).collect();
        if failed.is_empty() {
            eprintln!("{}: pass", r.name);
        } else {
            eprintln!("{}: FAIL ({})", r.name, failed.join(", "));
        }
    }
    Ok(ok)
}

pub fn cmd_construct(args: &ConstructArgs) -> Result<bool> {
    let tol = tolerances(&args.report.tol)?;
    let request = args.to_request()?;
    let built = request.build(tol.get("velocity_check"))?;
    let grid = args.report.grid.unwrap_or_else(|| request.default_grid(DEFAULT_N));
    let (a, b) = built.span;
    if grid.s0 < a || grid.s1 > b {
        return Err(Error::Invalid(format!("grid s range [{}, {}] leaves the span [{a}, {b}]", grid.s0, grid.s1)));
    }
    let scroll = &built.scroll;
    let mesh = Mesh::sample(|s, t| Ok(scroll.eval(s, t)), &grid)?;
    let name = request.branch.name().to_string();
    match &args.out {
        Some(p) => {
            let mut w = create(p)?;
            mesh.write(args.format, &name, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            mesh.write(args.format, &name, &mut out)?;
        }
    }
    let mut report = verify_minimal(scroll, &name, &grid, &tol);
    if let Some(frame) = &built.frame {
        report.check_max("gram_drift", &[frame.gram_drift], tol.get("gram_drift"));
    }
    let report_args = ReportArgs {
        report: args.report.report.clone().or_else(|| args.out.as_ref().map(|o| o.with_extension("report.json"))),
        ..args.report.clone()
    };
    emit_reports(&[report], &report_args, false)
}

/// Expands `gallery` and parses the other target names.
fn expand_targets(targets: &[String]) -> Result<Vec<Target>> {
    let mut out = Vec::new();
    for t in targets {
        let lower = t.trim().to_ascii_lowercase().replace('_', "-");
        if lower == "gallery" || lower == "all" {
            out.extend(gallery().into_iter().map(Target::Example));
        } else if let Some(rest) = lower.strip_prefix("perturbed-circle") {
            let w = match rest.strip_prefix(':') {
                Some(x) => x.parse().map_err(|_| Error::UnknownName(t.clone()))?,
                None if rest.is_empty() => 1.01,
                None => return Err(Error::UnknownName(t.clone())),
            };
            out.push(Target::Perturbed(w));
        } else {
            out.push(Target::Example(Example::parse(t)?));
        }
    }
    Ok(out)
}

enum Target {
    Example(Example),
    Perturbed(f64),
}

/// Every gallery surface: the five figures plus the tangent surface and the planar parabola.
pub fn gallery() -> Vec<Example> {
    let mut v = Example::figures();
    v.push(Example::Parabola { b: 0.0 });
    v.push(Example::Tangent);
    v
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let tol = tolerances(&args.report.tol)?;
    if args.targets.is_empty() && args.request.is_none() {
        return Err(Error::Invalid("nothing to verify: give gallery names or --request".into()));
    }
    if args.n < 3 {
        return Err(Error::Invalid("--n must be at least 3".into()));
    }
    let mut reports = Vec::new();
    for target in expand_targets(&args.targets)? {
        reports.push(match target {
            Target::Example(ex) => verify_example(ex, &args.report.grid.unwrap_or_else(|| ex.working_grid(args.n)), &tol)?,
            Target::Perturbed(w) => {
                let grid = args.report.grid.unwrap_or_else(|| Example::Circle.working_grid(args.n));
                verify_minimal(&perturbed_circle(w), &format!("perturbed-circle:{w}"), &grid, &tol)
            }
        });
    }
    if let Some(path) = &args.request {
        let request = ConstructionRequest::from_file(path)?;
        let built = request.build(tol.get("velocity_check"))?;
        let grid = args.report.grid.unwrap_or_else(|| request.default_grid(args.n));
        let name = path.file_stem().map_or("request".into(), |s| s.to_string_lossy().into_owned());
        let mut r = verify_minimal(&built.scroll, &name, &grid, &tol);
        if let Some(frame) = &built.frame {
            r.check_max("gram_drift", &[frame.gram_drift], tol.get("gram_drift"));
        }
        reports.push(r);
    }
    emit_reports(&reports, &args.report, true)
}

pub fn cmd_examples(args: &ExamplesArgs) -> Result<bool> {
    let list = if args.name.eq_ignore_ascii_case("all") { Example::figures() } else { vec![Example::parse(&args.name)?] };
    if args.n < 2 {
        return Err(Error::Invalid("--n must be at least 2".into()));
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io(format!("{}: {e}", args.out_dir.display())))?;
    let ext = match args.format {
        MeshFormat::Obj => "obj",
        MeshFormat::Csv => "csv",
    };
    for ex in list {
        let entry = example_gallery(ex);
        let mesh = Mesh::sample(|s, t| Ok((entry.surface)(s, t)), &ex.working_grid(args.n))?;
        let stem = ex.name().replace(':', "-");
        let path = args.out_dir.join(format!("{stem}.{ext}"));
        let mut w = create(&path)?;
        mesh.write(args.format, &stem, &mut w)?;
        w.flush()?;
        eprintln!("wrote {}", path.display());
    }
    Ok(true)
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_degenerate() {
        EXIT_DEGENERATE
    } else {
        EXIT_INVALID
    }
}

/// Runs the CLI on `args` and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Examples(a) => cmd_examples(a),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
