//! Finite-difference verification: mean curvature, planarity, correspondence and reports.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{aligned_deviation, construct_example, example_gallery, Example};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::minkowski::MinkNullFrame;
use crate::nil3_core::{connection, coord_to_frame, cross, metric, FrameVector, Nil3Point};
use crate::nullcurve::FrameSettings;
use crate::scroll::{liouville_residual, NullChart, NullScroll};
use crate::tolerances::Tolerances;

/// Thread pool for grid sweeps; `NILSCROLL_THREADS` caps its size.
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("NILSCROLL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
    })
}

/// Frame components of the first partials and covariant second partials of a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub point: Nil3Point,
    pub fs: FrameVector,
    pub ft: FrameVector,
    pub nabla_ss: FrameVector,
    pub nabla_st: FrameVector,
    pub nabla_tt: FrameVector,
}

/// Central differences with step `h1` for first and `h2` for second derivatives, pushed to
/// the left-invariant frame and combined with the connection table.
pub fn fd_jet<F>(map: F, s: f64, t: f64, h1: f64, h2: f64) -> Result<Jet>
where
    F: Fn(f64, f64) -> Result<Nil3Point>,
{
    let f = |a: f64, b: f64| map(a, b).map(Nil3Point::to_array);
    let p = f(s, t)?;
    let diff = |x: [f64; 3], y: [f64; 3], k: f64| [0, 1, 2].map(|i| (x[i] - y[i]) * k);
    let cs = diff(f(s + h1, t)?, f(s - h1, t)?, 0.5 / h1);
    let ct = diff(f(s, t + h1)?, f(s, t - h1)?, 0.5 / h1);
    let second = |a: [f64; 3], b: [f64; 3]| [0, 1, 2].map(|i| (a[i] - 2.0 * p[i] + b[i]) / (h2 * h2));
    let css = second(f(s + h2, t)?, f(s - h2, t)?);
    let ctt = second(f(s, t + h2)?, f(s, t - h2)?);
    let (pp, pm, mp, mm) = (f(s + h2, t + h2)?, f(s + h2, t - h2)?, f(s - h2, t + h2)?, f(s - h2, t - h2)?);
    let cst = [0, 1, 2].map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h2 * h2));

    let point = Nil3Point::from_array(p);
    let fs = coord_to_frame(point, cs);
    let ft = coord_to_frame(point, ct);
    // derivative along direction i of the frame components of f_j
    let dframe = |ci: [f64; 3], cj: [f64; 3], cij: [f64; 3]| {
        FrameVector::new(cij[0], cij[1], cij[2] - 0.5 * (ci[0] * cj[1] + p[0] * cij[1] - ci[1] * cj[0] - p[1] * cij[0]))
    };
    Ok(Jet {
        point,
        fs,
        ft,
        nabla_ss: dframe(cs, cs, css) + connection(fs, fs),
        nabla_st: dframe(cs, ct, cst) + connection(fs, ft),
        nabla_tt: dframe(ct, ct, ctt) + connection(ft, ft),
    })
}

/// First fundamental form and mean curvature from a jet, with `N = -(f_s x f_t)/|f_s x f_t|`.
pub fn jet_mean_curvature(j: &Jet) -> Result<(f64, f64, f64)> {
    let g11 = metric(j.fs, j.fs);
    let g12 = metric(j.fs, j.ft);
    let g22 = metric(j.ft, j.ft);
    let det = g11 * g22 - g12 * g12;
    let n = cross(j.fs, j.ft);
    let nn = metric(n, n);
    if !(det < 0.0) || !(nn > 0.0) {
        return Err(Error::DegeneratePoint(g12));
    }
    let normal = n * (-1.0 / nn.sqrt());
    let (h11, h12, h22) = (metric(j.nabla_ss, normal), metric(j.nabla_st, normal), metric(j.nabla_tt, normal));
    let h = 0.5 * (g11 * h22 - 2.0 * g12 * h12 + g22 * h11) / det;
    Ok((h, g12, g11))
}

/// Mean curvature of an arbitrary map into Nil3 from finite differences only.
///
/// The normal is `-(f_s x f_t)/|f_s x f_t|`; a null scroll's closed form uses
/// `-(f_s x f_t)/g12`, so the two agree after multiplying by `sgn g12`.
pub fn fd_mean_curvature<F>(map: F, s: f64, t: f64, h1: f64, h2: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<Nil3Point>,
{
    let j = fd_jet(map, s, t, h1, h2)?;
    jet_mean_curvature(&j).map(|(h, _, _)| h)
}

/// Something that can be swept over a grid.
pub trait Surface: Sync {
    fn point(&self, s: f64, t: f64) -> Result<Nil3Point>;

    /// Closed-form mean curvature and `g12`, when the surface has them.
    fn closed_form(&self, _s: f64, _t: f64) -> Option<Result<(f64, f64)>> {
        None
    }
}

impl Surface for NullScroll {
    fn point(&self, s: f64, t: f64) -> Result<Nil3Point> {
        Ok(self.eval(s, t))
    }

    fn closed_form(&self, s: f64, t: f64) -> Option<Result<(f64, f64)>> {
        Some(self.fundamental_data(s, t).map(|d| (d.mean_curvature, d.g12)))
    }
}

/// Adapts a closure to [`Surface`].
pub struct MapSurface<F>(pub F);

impl<F> Surface for MapSurface<F>
where
    F: Fn(f64, f64) -> Result<Nil3Point> + Sync,
{
    fn point(&self, s: f64, t: f64) -> Result<Nil3Point> {
        (self.0)(s, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub max: f64,
    pub mean: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Stat {
        if values.is_empty() {
            return Stat { max: f64::NAN, mean: f64::NAN };
        }
        let max = values.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) });
        Stat { max, mean: values.iter().sum::<f64>() / values.len() as f64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub name: String,
    pub grid: Grid,
    pub mask_fraction: f64,
    pub residuals: BTreeMap<String, Stat>,
    pub pass: BTreeMap<String, bool>,
}

impl VerificationReport {
    pub fn new(name: &str, grid: Grid) -> Self {
        VerificationReport { name: name.to_string(), grid, mask_fraction: 0.0, residuals: BTreeMap::new(), pass: BTreeMap::new() }
    }

    pub fn passed(&self) -> bool {
        !self.pass.is_empty() && self.pass.values().all(|&p| p)
    }

    /// Records `values` under `residual` and a pass flag `max <= limit`.
    pub fn check_max(&mut self, residual: &str, values: &[f64], limit: f64) {
        let st = Stat::of(values);
        let ok = !values.is_empty() && self.mask_fraction < 1.0 && st.max <= limit;
        self.residuals.insert(residual.to_string(), st);
        self.pass.insert(residual.to_string(), ok);
    }

    /// Records `values` with a pass flag requiring `max >= floor` (negative controls).
    pub fn check_floor(&mut self, residual: &str, values: &[f64], floor: f64) {
        let st = Stat::of(values);
        let ok = !values.is_empty() && self.mask_fraction < 1.0 && st.max >= floor;
        self.residuals.insert(residual.to_string(), st);
        self.pass.insert(residual.to_string(), ok);
    }
}

/// Per-point output of a minimality sweep.
#[derive(Debug, Clone, Copy)]
struct MinimalSample {
    fd: f64,
    closed: Option<f64>,
}

fn sweep_mean_curvature<S: Surface + ?Sized>(f: &S, grid: &Grid, tol: &Tolerances) -> Vec<Option<MinimalSample>> {
    let (h1, h2) = (tol.get("fd_step_first"), tol.get("fd_step_second"));
    let mask = tol.get("degeneracy_mask");
    pool().install(|| {
        grid.points()
            .into_par_iter()
            .map(|(s, t)| {
                let closed = match f.closed_form(s, t) {
                    Some(Ok((h, g12))) if g12.abs() >= mask => Some((h, g12)),
                    Some(_) => return None,
                    None => None,
                };
                let j = fd_jet(|a, b| f.point(a, b), s, t, h1, h2).ok()?;
                let (h, g12, _) = jet_mean_curvature(&j).ok()?;
                if g12.abs() < mask {
                    return None;
                }
                let sign = g12.signum();
                Some(MinimalSample { fd: h * sign, closed: closed.map(|c| c.0) })
            })
            .collect()
    })
}

/// Sweeps FD and (when available) closed-form mean curvature over `grid`.
///
/// Points with `|g12|` below the `degeneracy_mask` tolerance are masked. A grid that is
/// entirely masked fails every check.
pub fn verify_minimal<S: Surface + ?Sized>(f: &S, name: &str, grid: &Grid, tol: &Tolerances) -> VerificationReport {
    let samples = sweep_mean_curvature(f, grid, tol);
    let mut report = VerificationReport::new(name, *grid);
    let kept: Vec<MinimalSample> = samples.iter().flatten().copied().collect();
    report.mask_fraction = 1.0 - kept.len() as f64 / samples.len().max(1) as f64;
    let fd: Vec<f64> = kept.iter().map(|m| m.fd.abs()).collect();
    report.check_max("fd_mean_curvature", &fd, tol.get("fd_mean_curvature"));
    let closed: Vec<f64> = kept.iter().filter_map(|m| m.closed.map(f64::abs)).collect();
    if !closed.is_empty() || report.mask_fraction == 1.0 {
        report.check_max("closed_mean_curvature", &closed, tol.get("closed_mean_curvature"));
        let agree: Vec<f64> = kept.iter().filter_map(|m| m.closed.map(|c| (c - m.fd).abs())).collect();
        report.check_max("closed_vs_fd", &agree, tol.get("fd_mean_curvature"));
    }
    report
}

/// Same sweep as [`verify_minimal`] but expecting the surface to be far from minimal.
pub fn verify_not_minimal<S: Surface + ?Sized>(f: &S, name: &str, grid: &Grid, tol: &Tolerances) -> VerificationReport {
    let samples = sweep_mean_curvature(f, grid, tol);
    let mut report = VerificationReport::new(name, *grid);
    let kept: Vec<MinimalSample> = samples.iter().flatten().copied().collect();
    report.mask_fraction = 1.0 - kept.len() as f64 / samples.len().max(1) as f64;
    let fd: Vec<f64> = kept.iter().map(|m| m.fd.abs()).collect();
    report.check_floor("fd_mean_curvature", &fd, tol.get("non_minimal_floor"));
    report
}

/// Largest distance from the least-squares plane through `points` (coordinates as R^3).
pub fn verify_planarity(points: &[Nil3Point]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: points.len() });
    }
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for (ci, x) in c.iter_mut().zip(p.to_array()) {
            *ci += x / n;
        }
    }
    let m = DMatrix::from_fn(points.len(), 3, |i, j| points[i].to_array()[j] - c[j]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Invalid("SVD failed".into()))?;
    let k = (0..3).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).expect("three singular values");
    let normal = [vt[(k, 0)], vt[(k, 1)], vt[(k, 2)]];
    Ok((0..points.len()).map(|i| (m[(i, 0)] * normal[0] + m[(i, 1)] * normal[1] + m[(i, 2)] * normal[2]).abs()).fold(0.0, f64::max))
}

/// Composite Simpson integral of `f` over `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// The lifted point predicted from Minkowski frame data:
/// `(gamma1 + t B1, gamma2 + t B2, gamma3~ - t B3 + t (gamma1 B2 - gamma2 B1)/2)` with
/// `gamma3~ = gamma3 + int_0^s (gamma1 A2 - gamma2 A1)/2`.
pub fn lifted_point(frame: &MinkNullFrame, s: f64, t: f64) -> Nil3Point {
    let g = frame.gamma.value(s);
    let b = frame.b.value(s);
    let panels = ((s.abs() / 1e-3).ceil() as usize).max(2);
    let corr = simpson(
        |x| {
            let (g, a) = (frame.gamma.value(x), frame.a.value(x));
            0.5 * (g.t * a.x - g.x * a.t)
        },
        0.0,
        s,
        panels,
    );
    Nil3Point::new(g.t + t * b.t, g.x + t * b.x, g.y + corr - t * b.y + 0.5 * t * (g.t * b.x - g.x * b.t))
}

/// Compares a Nil3 scroll against the lift of a Minkowski B-scroll, componentwise.
pub fn verify_correspondence(frame: &MinkNullFrame, nil: &NullScroll, grid: &Grid, tol: &Tolerances) -> VerificationReport {
    let errs: Vec<[f64; 3]> = pool().install(|| {
        grid.points()
            .into_par_iter()
            .map(|(s, t)| {
                let want = lifted_point(frame, s, t);
                let got = nil.eval(s, t);
                [(want.x1 - got.x1).abs(), (want.x2 - got.x2).abs(), (want.x3 - got.x3).abs()]
            })
            .collect()
    });
    let mut report = VerificationReport::new("correspondence", *grid);
    let limit = tol.get("correspondence");
    for (i, name) in ["f1", "f2", "f3"].iter().enumerate() {
        let v: Vec<f64> = errs.iter().map(|e| e[i]).collect();
        report.check_max(name, &v, limit);
    }
    report
}

/// Builds a gallery example through its constructor and checks minimality on `grid`
/// (usually [`Example::working_grid`]) together with the deviation from the closed form.
pub fn verify_example(example: Example, grid: &Grid, tol: &Tolerances) -> Result<VerificationReport> {
    let grid = *grid;
    let built = construct_example(example, FrameSettings::default())?;
    let entry = example_gallery(example);
    let mut report = verify_minimal(&built.scroll, &example.name(), &grid, tol);
    let s_ref = 0.0f64.clamp(grid.s0, grid.s1);
    let dev = aligned_deviation(|s, t| built.scroll.eval(s, t), |s, t| (entry.surface)(s, t), &grid, s_ref);
    report.check_max("gallery", &[dev], tol.get("gallery"));
    if let Some(frame) = &built.frame {
        report.check_max("gram_drift", &[frame.gram_drift], tol.get("gram_drift"));
    }
    Ok(report)
}

/// Grid summary for a constructed scroll.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridReport {
    pub grid: Grid,
    /// Row-major (s outer) flags; `true` marks a masked (degenerate) point.
    pub mask: Vec<bool>,
    #[serde(rename = "maxH")]
    pub max_h: f64,
    #[serde(rename = "meanH")]
    pub mean_h: f64,
    pub max_gram_drift: Option<f64>,
    pub max_liouville: Option<f64>,
    /// `+1` or `-1` when the support-function sign is constant over the kept points, `0` if mixed.
    pub epsilon_sign: f64,
}

pub fn grid_report(
    f: &NullScroll,
    grid: &Grid,
    tol: &Tolerances,
    gram_drift: Option<f64>,
    chart: Option<(&NullChart, &Grid)>,
) -> GridReport {
    let samples = sweep_mean_curvature(f, grid, tol);
    let mask: Vec<bool> = samples.iter().map(Option::is_none).collect();
    let fd: Vec<f64> = samples.iter().flatten().map(|m| m.fd.abs()).collect();
    let st = Stat::of(&fd);
    let mut eps = 0.0;
    let mut first = true;
    for ((s, t), m) in grid.points().into_iter().zip(&mask) {
        if *m {
            continue;
        }
        let (fs, ft) = f.scroll_partials(s, t);
        let e = metric(cross(fs, ft), crate::nil3_core::E3).signum();
        if first {
            eps = e;
            first = false;
        } else if e != eps {
            eps = 0.0;
        }
    }
    let max_liouville = chart
        .map(|(c, g)| g.points().into_iter().filter_map(|(x, y)| liouville_residual(c, x, y, 1e-3).ok()).map(f64::abs).fold(0.0, f64::max));
    GridReport { grid: *grid, mask, max_h: st.max, mean_h: st.mean, max_gram_drift: gram_drift, max_liouville, epsilon_sign: eps }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// JUnit-style XML with one test case per pass flag.
pub fn junit(reports: &[VerificationReport]) -> String {
    let cases: usize = reports.iter().map(|r| r.pass.len()).sum();
    let failures: usize = reports.iter().map(|r| r.pass.values().filter(|p| !**p).count()).sum();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out += &format!("<testsuites tests=\"{cases}\" failures=\"{failures}\">\n");
    for r in reports {
        let f = r.pass.values().filter(|p| !**p).count();
        out += &format!("  <testsuite name=\"{}\" tests=\"{}\" failures=\"{f}\">\n", xml_escape(&r.name), r.pass.len());
        for (k, ok) in &r.pass {
            let st = r.residuals.get(k);
            out += &format!("    <testcase classname=\"{}\" name=\"{}\"", xml_escape(&r.name), xml_escape(k));
            if *ok {
                out += "/>\n";
            } else {
                let msg = match st {
                    Some(s) => format!("max {:e}, mean {:e}, mask fraction {}", s.max, s.mean, r.mask_fraction),
                    None => "no data".to_string(),
                };
                out += &format!(">\n      <failure message=\"{}\"/>\n    </testcase>\n", xml_escape(&msg));
            }
        }
        out += "  </testsuite>\n";
    }
    out += "</testsuites>\n";
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planarity_of_plane_and_non_plane() {
        let plane: Vec<Nil3Point> = (0..25)
            .map(|i| {
                let (a, b) = ((i % 5) as f64, (i / 5) as f64);
                Nil3Point::new(a, b, 0.3 * a - 0.7 * b + 1.0)
            })
            .collect();
        assert!(verify_planarity(&plane).unwrap() < 1e-12);
        let mut bent = plane.clone();
        bent[12].x3 += 0.1;
        assert!(verify_planarity(&bent).unwrap() > 1e-2);
        assert!(matches!(verify_planarity(&plane[..3]), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        assert!((simpson(|x| x * x * x - x, -1.0, 2.0, 10) - 2.25).abs() < 1e-13);
    }

    #[test]
    fn vacuous_grid_fails() {
        let flat = MapSurface(|s: f64, _t: f64| Ok(Nil3Point::new(s, s, 0.0)));
        let grid = Grid::new((0.0, 1.0), 3, (0.0, 1.0), 3);
        let r = verify_minimal(&flat, "degenerate", &grid, &Tolerances::default());
        assert_eq!(r.mask_fraction, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn junit_marks_failures() {
        let mut r = VerificationReport::new("x", Grid::new((0.0, 1.0), 2, (0.0, 1.0), 2));
        r.check_max("a", &[1.0], 2.0);
        r.check_max("b", &[3.0], 2.0);
        let xml = junit(&[r]);
        assert!(xml.contains("failures=\"1\""));
        assert!(xml.contains("<failure"));
    }
}
