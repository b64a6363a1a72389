//! Sampled-curve CSV input, scalar function specs and construction requests.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::{
    construct_beta_half, construct_beta_zero, construct_from_ar_data, construct_from_curvature, construct_tangent, Built,
    ConstructionParams, RulingSpec,
};
use crate::curve::{constant, Analytic, CubicSpline, ScalarCurve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::minkowski::MinkVector;
use crate::nil3_core::{FrameVector, Nil3Point};
use crate::nullcurve::FrameSettings;

/// Columns of a sampled curve, keyed by the header.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub s: Vec<f64>,
    /// `columns[k][i]` is the `k`-th value column at `s[i]`.
    pub columns: Vec<Vec<f64>>,
}

/// Reads a CSV whose header must equal `header` (the first column is the parameter `s`,
/// strictly increasing). Lines starting with `#` are skipped. An empty `header` accepts
/// any header whose first column is `s`.
pub fn read_samples<R: Read>(reader: R, header: &[&str]) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let ok = if header.is_empty() { got.first().map(String::as_str) == Some("s") && got.len() >= 2 } else { got == header };
    if !ok {
        return Err(Error::Invalid(format!("expected CSV header {:?}, got {:?}", header.join(","), got.join(","))));
    }
    let mut out = Samples { s: Vec::new(), columns: vec![Vec::new(); got.len() - 1] };
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != got.len() {
            return Err(Error::Invalid(format!("row {} has {} fields, expected {}", line + 1, rec.len(), got.len())));
        }
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Invalid(format!("row {}: {field:?} is not a finite number", line + 1)))?;
            if k == 0 {
                out.s.push(v);
            } else {
                out.columns[k - 1].push(v);
            }
        }
    }
    if out.s.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("the s column must be strictly increasing".into()));
    }
    Ok(out)
}

pub fn read_samples_file(path: &Path, header: &[&str]) -> Result<Samples> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_samples(file, header).map_err(|e| match e {
        Error::Invalid(m) => Error::Invalid(format!("{}: {m}", path.display())),
        other => other,
    })
}

impl Samples {
    fn triples(&self) -> Vec<[f64; 3]> {
        (0..self.s.len()).map(|i| [self.columns[0][i], self.columns[1][i], self.columns[2][i]]).collect()
    }
}

/// A Nil3 curve sampled as `s,x1,x2,x3`.
pub fn read_point_curve(path: &Path) -> Result<(Vec<f64>, Vec<Nil3Point>)> {
    let d = read_samples_file(path, &["s", "x1", "x2", "x3"])?;
    let pts = d.triples().into_iter().map(Nil3Point::from_array).collect();
    Ok((d.s, pts))
}

/// A ruling sampled as `s,B1,B2,B3`, interpolated by a not-a-knot spline.
pub fn read_ruling(path: &Path) -> Result<RulingSpec> {
    let d = read_samples_file(path, &["s", "B1", "B2", "B3"])?;
    let values: Vec<FrameVector> = d.triples().into_iter().map(FrameVector::from_array).collect();
    RulingSpec::sampled(d.s, &values)
}

/// A Minkowski velocity sampled as `s,v_t,v_x,v_y`.
pub fn read_mink_velocity(path: &Path) -> Result<(Vec<f64>, Vec<MinkVector>)> {
    let d = read_samples_file(path, &["s", "v_t", "v_x", "v_y"])?;
    let v = d.triples().into_iter().map(MinkVector::from_array).collect();
    Ok((d.s, v))
}

/// A scalar function sampled as `s,<name>` (for example `s,k1`).
pub fn read_scalar(path: &Path) -> Result<CubicSpline> {
    let d = read_samples_file(path, &[])?;
    if d.columns.len() != 1 {
        return Err(Error::Invalid(format!("{}: expected two columns", path.display())));
    }
    CubicSpline::not_a_knot(d.s, d.columns.into_iter().next().expect("one column"))
}

/// A scalar function of one variable given on the command line or in a request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ScalarSpec {
    /// `c`
    Const(f64),
    /// `a x + b`
    Linear(f64, f64),
    /// `c / x`
    Reciprocal(f64),
    /// `a sin(w x)`
    Sin(f64, f64),
    /// `a tanh(w x)`
    Tanh(f64, f64),
    /// Not-a-knot spline through a two-column CSV.
    Csv(PathBuf),
}

impl ScalarSpec {
    pub fn curve(&self) -> Result<ScalarCurve> {
        Ok(match *self {
            ScalarSpec::Const(c) => constant(c),
            ScalarSpec::Linear(a, b) => Analytic::new(move |x| a * x + b).with_d1(move |_| a).with_d2(|_| 0.0).shared(),
            ScalarSpec::Reciprocal(c) => {
                Analytic::new(move |x: f64| c / x).with_d1(move |x: f64| -c / (x * x)).with_d2(move |x: f64| 2.0 * c / (x * x * x)).shared()
            }
            ScalarSpec::Sin(a, w) => Analytic::new(move |x: f64| a * (w * x).sin())
                .with_d1(move |x: f64| a * w * (w * x).cos())
                .with_d2(move |x: f64| -a * w * w * (w * x).sin())
                .shared(),
            ScalarSpec::Tanh(a, w) => Analytic::new(move |x: f64| a * (w * x).tanh())
                .with_d1(move |x: f64| a * w / (w * x).cosh().powi(2))
                .with_d2(move |x: f64| {
                    let th = (w * x).tanh();
                    -2.0 * a * w * w * th * (1.0 - th * th)
                })
                .shared(),
            ScalarSpec::Csv(ref path) => Arc::new(read_scalar(path)?),
        })
    }
}

impl FromStr for ScalarSpec {
    type Err = Error;

    /// Parses `c`, `const:c`, `linear:a,b`, `reciprocal:c`, `sin:a,w`, `tanh:a,w`,
    /// `csv:path` or a bare path ending in `.csv`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Invalid(format!("bad function spec {text:?}"));
        if let Ok(c) = text.parse::<f64>() {
            return if c.is_finite() { Ok(ScalarSpec::Const(c)) } else { Err(bad()) };
        }
        if text.ends_with(".csv") && !text.contains(':') {
            return Ok(ScalarSpec::Csv(PathBuf::from(text)));
        }
        let (kind, args) = text.split_once(':').ok_or_else(bad)?;
        if kind == "csv" {
            return Ok(ScalarSpec::Csv(PathBuf::from(args)));
        }
        let nums: Vec<f64> =
            args.split(',').map(|a| a.trim().parse::<f64>().ok().filter(|v| v.is_finite())).collect::<Option<_>>().ok_or_else(bad)?;
        match (kind, nums.as_slice()) {
            ("const", [c]) => Ok(ScalarSpec::Const(*c)),
            ("linear", [a, b]) => Ok(ScalarSpec::Linear(*a, *b)),
            ("reciprocal", [c]) => Ok(ScalarSpec::Reciprocal(*c)),
            ("sin", [a, w]) => Ok(ScalarSpec::Sin(*a, *w)),
            ("tanh", [a, w]) => Ok(ScalarSpec::Tanh(*a, *w)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ScalarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarSpec::Const(c) => write!(f, "{c}"),
            ScalarSpec::Linear(a, b) => write!(f, "linear:{a},{b}"),
            ScalarSpec::Reciprocal(c) => write!(f, "reciprocal:{c}"),
            ScalarSpec::Sin(a, w) => write!(f, "sin:{a},{w}"),
            ScalarSpec::Tanh(a, w) => write!(f, "tanh:{a},{w}"),
            ScalarSpec::Csv(p) => write!(f, "csv:{}", p.display()),
        }
    }
}

impl TryFrom<String> for ScalarSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ScalarSpec> for String {
    fn from(s: ScalarSpec) -> String {
        s.to_string()
    }
}

/// The five construction routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    BetaZero,
    BetaHalf,
    Tangent,
    Curvature,
    ArData,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::BetaZero => "beta-zero",
            Branch::BetaHalf => "beta-half",
            Branch::Tangent => "tangent",
            Branch::Curvature => "curvature",
            Branch::ArData => "ar-data",
        }
    }
}

/// `circle`, `hyperbola`, `parabola`, `constant` or `csv:<path>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RulingChoice {
    Circle,
    Hyperbola,
    Parabola,
    Constant,
    Csv(PathBuf),
}

impl FromStr for RulingChoice {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "circle" => Ok(RulingChoice::Circle),
            "hyperbola" => Ok(RulingChoice::Hyperbola),
            "parabola" => Ok(RulingChoice::Parabola),
            "constant" => Ok(RulingChoice::Constant),
            t => match t.strip_prefix("csv:") {
                Some(p) if !p.is_empty() => Ok(RulingChoice::Csv(PathBuf::from(p))),
                _ => Err(Error::Invalid(format!("unknown ruling {t:?}"))),
            },
        }
    }
}

impl fmt::Display for RulingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RulingChoice::Circle => write!(f, "circle"),
            RulingChoice::Hyperbola => write!(f, "hyperbola"),
            RulingChoice::Parabola => write!(f, "parabola"),
            RulingChoice::Constant => write!(f, "constant"),
            RulingChoice::Csv(p) => write!(f, "csv:{}", p.display()),
        }
    }
}

impl TryFrom<String> for RulingChoice {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RulingChoice> for String {
    fn from(r: RulingChoice) -> String {
        r.to_string()
    }
}

/// Free functions and constants of a request; which ones apply depends on the branch.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<ScalarSpec>,
    /// `S(x)` of the AR-data branch.
    #[serde(default, rename = "S", skip_serializing_if = "Option::is_none")]
    pub s: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ScalarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ScalarSpec>,
    /// Interval of `x` for the AR-data branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_span: Option<(f64, f64)>,
    /// Interval of `y` on which the AR-data chart is checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_span: Option<(f64, f64)>,
    /// Null direction of the constant ruling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[f64; 3]>,
    /// Scale of the constant ruling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScalarSpec>,
}

/// A construction request, as read from JSON or assembled from CLI flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionRequest {
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruling_spec: Option<RulingChoice>,
    #[serde(default)]
    pub params: RequestParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

const DEFAULT_SPAN: (f64, f64) = (-2.0, 2.0);
const DEFAULT_STEP: f64 = 1e-3;

impl ConstructionRequest {
    pub fn from_json(text: &str) -> Result<Self> {
        let r: ConstructionRequest = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.span.unwrap_or(DEFAULT_SPAN);
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Invalid(format!("span ({a}, {b}) must be a finite increasing interval")));
        }
        let step = self.step.unwrap_or(DEFAULT_STEP);
        if !(step > 0.0 && step <= 0.1 * (b - a)) {
            return Err(Error::Invalid(format!("step {step} must be positive and well below the span length")));
        }
        let p = &self.params;
        let ruling = self.ruling_spec.as_ref();
        let unused = |name: &str, present: bool| {
            if present {
                Err(Error::Invalid(format!("parameter {name} does not apply to branch {:?}", self.branch)))
            } else {
                Ok(())
            }
        };
        match self.branch {
            Branch::BetaZero => {
                if !matches!(ruling, None | Some(RulingChoice::Constant)) {
                    return Err(Error::Invalid("branch beta-zero needs the constant ruling".into()));
                }
                unused("b", p.b.is_some())?;
            }
            Branch::BetaHalf => {
                if matches!(ruling, Some(RulingChoice::Constant)) {
                    return Err(Error::Invalid("the constant ruling has beta = 0; use branch beta-zero".into()));
                }
                unused("alpha", p.alpha.is_some())?;
            }
            Branch::Tangent => unused("b", p.b.is_some())?,
            Branch::Curvature | Branch::ArData => {
                if ruling.is_some() {
                    return Err(Error::Invalid(format!("branch {:?} takes no ruling", self.branch)));
                }
            }
        }
        if self.branch != Branch::Curvature {
            unused("k1", p.k1.is_some())?;
        }
        if self.branch != Branch::ArData {
            unused(
                "S, p, q, x_span or y_span",
                p.s.is_some() || p.p.is_some() || p.q.is_some() || p.x_span.is_some() || p.y_span.is_some(),
            )?;
        }
        if self.branch != Branch::BetaZero {
            unused("c or scale", p.c.is_some() || p.scale.is_some())?;
        }
        for (name, span) in [("x_span", p.x_span), ("y_span", p.y_span)] {
            if let Some((a, b)) = span {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::Invalid(format!("{name} must be a finite increasing interval")));
                }
            }
        }
        Ok(())
    }

    /// Runs the constructor selected by the request.
    pub fn build(&self, velocity_tolerance: f64) -> Result<Built> {
        self.validate()?;
        let p = &self.params;
        let span = self.span.unwrap_or(DEFAULT_SPAN);
        let settings = FrameSettings { origin: 0.0f64.clamp(span.0, span.1), span, step: self.step.unwrap_or(DEFAULT_STEP) };
        let curve = |s: &Option<ScalarSpec>, default: f64| s.as_ref().map_or(Ok(constant(default)), ScalarSpec::curve);
        let params = ConstructionParams { alpha: curve(&p.alpha, 1.0)?, b: curve(&p.b, 0.0)?, settings, velocity_tolerance };
        let ruling = |default: RulingChoice| -> Result<RulingSpec> {
            Ok(match self.ruling_spec.clone().unwrap_or(default) {
                RulingChoice::Circle => RulingSpec::Circle,
                RulingChoice::Hyperbola => RulingSpec::Hyperbola,
                RulingChoice::Parabola => RulingSpec::Parabola,
                RulingChoice::Csv(path) => read_ruling(&path)?,
                RulingChoice::Constant => unreachable!("rejected by validate"),
            })
        };
        match self.branch {
            Branch::BetaZero => {
                let t = std::f64::consts::FRAC_PI_3;
                let c = p.c.map(FrameVector::from_array).unwrap_or(FrameVector::new(1.0, t.cos(), t.sin()));
                let scale = p.scale.clone().unwrap_or(ScalarSpec::Linear(1.0, 0.0)).curve()?;
                construct_beta_zero(c, scale, &params)
            }
            Branch::BetaHalf => construct_beta_half(&ruling(RulingChoice::Circle)?.ruling(), &params),
            Branch::Tangent => construct_tangent(&ruling(RulingChoice::Hyperbola)?.ruling(), &params),
            Branch::Curvature => construct_from_curvature(curve(&p.k1, 0.0)?, &params),
            Branch::ArData => {
                let s = curve(&p.s, 0.0)?;
                let pf = p.p.clone().unwrap_or(ScalarSpec::Linear(0.125, 0.0)).curve()?;
                let qf = p.q.clone().unwrap_or(ScalarSpec::Reciprocal(1.0)).curve()?;
                construct_from_ar_data(s, pf, qf, p.x_span.unwrap_or((-1.0, 1.0)), p.y_span.unwrap_or((0.5, 2.0)), &params)
            }
        }
    }

    /// A grid inside the construction span on which the named examples are regular.
    pub fn default_grid(&self, n: usize) -> Grid {
        let (a, b) = self.span.unwrap_or(DEFAULT_SPAN);
        let clip = |(s0, s1): (f64, f64)| {
            let (lo, hi) = (s0.max(a), s1.min(b));
            if lo < hi {
                (lo, hi)
            } else {
                (a + 0.25 * (b - a), b - 0.25 * (b - a))
            }
        };
        let (s, t) = match (self.branch, self.ruling_spec.as_ref()) {
            (Branch::BetaZero, _) => ((0.2, 1.2), (-1.0, 1.0)),
            (Branch::BetaHalf, Some(RulingChoice::Hyperbola)) => ((-1.0, 1.0), (1.0, 2.5)),
            (Branch::BetaHalf, Some(RulingChoice::Parabola)) => ((-1.5, -0.5), (-2.0, -0.5)),
            (Branch::Tangent, _) => ((-1.0, 1.0), (0.05, 2.0)),
            _ => ((-1.0, 1.0), (-1.0, 1.0)),
        };
        Grid::new(clip(s), n, t, n)
    }
}
