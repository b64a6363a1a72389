//! The dictionary between Nil3 and Minkowski space: lifting B-scrolls, derivative
//! triples, reintegration of a surface from its derivative, and the SO(2,1) gauge.

use std::sync::Arc;

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::curve::{fd_d1, Curve, FrameCurve, Hermite};
use crate::error::{Error, Result};
use crate::minkowski::{is_special_lorentz, MinkNullFrame, MinkVector};
use crate::nil3_core::{connection, frame_to_coord, metric, FrameVector, Nil3Point, E3};
use crate::nullcurve::{reconstruct_curve, sample_points, Flip3, FrameSettings, Ruling};
use crate::paracomplex::ParaComplex;
use crate::scroll::{chart_normal, chart_partials, phi_triple, NullChart, NullScroll};
use crate::verify::{pool, Jet};

/// Step of the fourth-order differences taken on derivative triples.
const TRIPLE_STEP: f64 = 1e-3;

/// Frame components of a Minkowski curve, `(t, x, y) -> (v1, v2, v3)`.
struct AsFrame(Arc<Hermite<MinkVector>>);

impl Curve<FrameVector> for AsFrame {
    fn value(&self, s: f64) -> FrameVector {
        FrameVector::from_array(self.0.value(s).to_array())
    }
    fn d1(&self, s: f64) -> FrameVector {
        FrameVector::from_array(self.0.d1(s).to_array())
    }
    fn d2(&self, s: f64) -> FrameVector {
        FrameVector::from_array(self.0.d2(s).to_array())
    }
}

/// Lifts the B-scroll of a Minkowski null frame with `k2 = 1/2` to a Nil3 scroll.
///
/// The lifted curve is `(gamma1, gamma2, gamma3 + int_0^s (gamma1 A2 - gamma2 A1)/2)`, whose
/// left-translated velocity has the same components as `A`; the ruling is `B` with its
/// third component negated.
pub fn bscroll_to_nil(frame: &MinkNullFrame, step: f64) -> Result<NullScroll> {
    let span = frame.domain();
    for s in sample_points(span, 101) {
        let d = frame.gram_defect_at(s);
        if !(d <= 1e-8) {
            return Err(Error::BadFrame(format!("Gram defect {d:e} at s = {s}")));
        }
        let k2 = frame.k2.value(s);
        if (k2 - 0.5).abs() > 1e-12 {
            return Err(Error::BadFrame(format!("k2 = {k2} at s = {s}; the lift needs k2 = 1/2")));
        }
    }
    if !(span.0 <= 0.0 && 0.0 <= span.1) || frame.gamma.value(0.0).to_array().iter().any(|x| x.abs() > 1e-14) {
        return Err(Error::BadFrame("the base curve must pass through the origin at s = 0".into()));
    }
    let velocity: FrameCurve = Arc::new(AsFrame(frame.a.clone()));
    let base = reconstruct_curve(velocity, FrameSettings::new(span, step))?;
    let ruling = Ruling::new(Arc::new(Flip3(Arc::new(AsFrame(frame.b.clone())))));
    Ok(NullScroll::new(base, ruling).with_k1(frame.k1.clone()))
}

type TripleFn = dyn Fn(f64, f64) -> Result<[ParaComplex; 3]> + Send + Sync;

/// `f_z = sum phi^j E_j` in null coordinates `z = l x + lbar y`.
#[derive(Clone)]
pub struct DerivativeTriple {
    phi: Arc<TripleFn>,
}

impl DerivativeTriple {
    pub fn new(phi: impl Fn(f64, f64) -> Result<[ParaComplex; 3]> + Send + Sync + 'static) -> Self {
        DerivativeTriple { phi: Arc::new(phi) }
    }

    pub fn at(&self, x: f64, y: f64) -> Result<[ParaComplex; 3]> {
        (self.phi)(x, y)
    }

    /// Frame components of `f_x` and `f_y`: the two null parts of the triple.
    pub fn frame_partials(&self, x: f64, y: f64) -> Result<(FrameVector, FrameVector)> {
        Ok(split(self.at(x, y)?))
    }

    /// First partials and covariant second partials, with fourth-order differences of the
    /// triple for the second derivatives.
    pub fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        let (fx, fy) = self.frame_partials(x, y)?;
        let (dx, dy) = self.derivatives(x, y)?;
        Ok(Jet {
            point: Nil3Point::IDENTITY,
            fs: fx,
            ft: fy,
            nabla_ss: dx.0 + connection(fx, fx),
            nabla_st: dx.1 + connection(fx, fy),
            nabla_tt: dy.1 + connection(fy, fy),
        })
    }

    /// `(d/dx (F_x, F_y), d/dy (F_x, F_y))`.
    #[allow(clippy::type_complexity)]
    fn derivatives(&self, x: f64, y: f64) -> Result<((FrameVector, FrameVector), (FrameVector, FrameVector))> {
        let h = TRIPLE_STEP;
        let along = |dir: (f64, f64)| -> Result<(FrameVector, FrameVector)> {
            let mut v = [(FrameVector::ZERO, FrameVector::ZERO); 4];
            for (k, m) in [-2.0, -1.0, 1.0, 2.0].iter().enumerate() {
                v[k] = self.frame_partials(x + m * h * dir.0, y + m * h * dir.1)?;
            }
            let d = |a: FrameVector, b: FrameVector, c: FrameVector, e: FrameVector| (a - e + (c - b) * 8.0) * (1.0 / (12.0 * h));
            Ok((d(v[0].0, v[1].0, v[2].0, v[3].0), d(v[0].1, v[1].1, v[2].1, v[3].1)))
        };
        Ok((along((1.0, 0.0))?, along((0.0, 1.0))?))
    }
}

fn split(phi: [ParaComplex; 3]) -> (FrameVector, FrameVector) {
    let n = phi.map(|p| p.null_parts());
    (FrameVector::new(n[0].0, n[1].0, n[2].0), FrameVector::new(n[0].1, n[1].1, n[2].1))
}

/// Exact triple of a scroll in a null chart, from its closed-form partials.
pub fn scroll_triple(f: &NullScroll, chart: &NullChart) -> DerivativeTriple {
    let (f, chart) = (f.clone(), chart.clone());
    DerivativeTriple::new(move |x, y| {
        let c = chart.at(x, y)?;
        let (fx, fy) = chart_partials(&f, &c);
        Ok(phi_triple(fx, fy))
    })
}

/// Triple of an arbitrary map `(x, y) -> Nil3` by fourth-order central differences.
pub fn derivative_of<F>(map: F) -> DerivativeTriple
where
    F: Fn(f64, f64) -> Result<Nil3Point> + Send + Sync + 'static,
{
    DerivativeTriple::new(move |x, y| {
        let p = map(x, y)?;
        for probe in [(x - 2e-3, y), (x + 2e-3, y), (x, y - 2e-3), (x, y + 2e-3)] {
            map(probe.0, probe.1)?;
        }
        let cx = fd_d1(|a| map(a, y).expect("checked"), x, TRIPLE_STEP).to_array();
        let cy = fd_d1(|b| map(x, b).expect("checked"), y, TRIPLE_STEP).to_array();
        let fx = crate::nil3_core::coord_to_frame(p, cx);
        let fy = crate::nil3_core::coord_to_frame(p, cy);
        Ok(phi_triple(fx, fy))
    })
}

/// The Minkowski derivative `(phi1, phi2, i' phi3)`.
pub fn to_mink(phi: [ParaComplex; 3]) -> [ParaComplex; 3] {
    [phi[0], phi[1], ParaComplex::I * phi[2]]
}

/// Inverse of [`to_mink`].
pub fn from_mink(psi: [ParaComplex; 3]) -> [ParaComplex; 3] {
    [psi[0], psi[1], ParaComplex::I * psi[2]]
}

/// Curl of the Maurer-Cartan form at `(x, y)`:
/// `(dF1_x/dy - dF1_y/dx, dF2_x/dy - dF2_y/dx, dF3_x/dy - dF3_y/dx + F2_x F1_y - F1_x F2_y)`.
///
/// The third entry is, up to a factor `-1/2`, the `i'` part of
/// `2 d(conj phi3) + phi1 conj phi2 - phi2 conj phi1`.
pub fn closedness_residual(d: &DerivativeTriple, x: f64, y: f64) -> Result<[f64; 3]> {
    let (fx, fy) = d.frame_partials(x, y)?;
    let ((_, dfy_dx), (dfx_dy, _)) = d.derivatives(x, y)?;
    let c = dfx_dy - dfy_dx;
    Ok([c.v1, c.v2, c.v3 + fx.v2 * fy.v1 - fx.v1 * fy.v2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Step control for path integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Steps {
    /// Largest step length.
    MaxLength(f64),
    /// The same number of steps on every segment, so the discretization error varies
    /// smoothly with the endpoint (needed when the result is differentiated numerically).
    Count(usize),
}

/// RK4 along one coordinate axis of `f' = frame_to_coord(f, F)`, returning the values at
/// `stops` (any order) starting from `start` at coordinate `from`.
fn walk(d: &DerivativeTriple, axis: Axis, fixed: f64, from: f64, start: Nil3Point, stops: &[f64], steps: Steps) -> Result<Vec<Nil3Point>> {
    let rhs = |u: f64, p: Nil3Point| -> Result<[f64; 3]> {
        let (x, y) = match axis {
            Axis::X => (u, fixed),
            Axis::Y => (fixed, u),
        };
        let (fx, fy) = d.frame_partials(x, y)?;
        Ok(frame_to_coord(p, if axis == Axis::X { fx } else { fy }))
    };
    let advance = |p: Nil3Point, a: f64, b: f64| -> Result<Nil3Point> {
        let n = match steps {
            Steps::MaxLength(step) => ((b - a).abs() / step).ceil().max(1.0) as usize,
            Steps::Count(n) => n.max(1),
        };
        let h = (b - a) / n as f64;
        let mut p = p;
        for k in 0..n {
            let u = a + k as f64 * h;
            let add = |p: Nil3Point, k: [f64; 3], c: f64| Nil3Point::new(p.x1 + c * k[0], p.x2 + c * k[1], p.x3 + c * k[2]);
            let k1 = rhs(u, p)?;
            let k2 = rhs(u + 0.5 * h, add(p, k1, 0.5 * h))?;
            let k3 = rhs(u + 0.5 * h, add(p, k2, 0.5 * h))?;
            let k4 = rhs(u + h, add(p, k3, h))?;
            p = Nil3Point::new(
                p.x1 + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                p.x2 + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
                p.x3 + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
            );
        }
        Ok(p)
    };
    let mut out = vec![start; stops.len()];
    let mut order: Vec<usize> = (0..stops.len()).collect();
    order.sort_by(|&i, &j| stops[i].total_cmp(&stops[j]));
    let (below, above): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| stops[i] < from);
    for seq in [above, below.into_iter().rev().collect()] {
        let (mut u, mut p) = (from, start);
        for i in seq {
            p = advance(p, u, stops[i])?;
            u = stops[i];
            out[i] = p;
        }
    }
    Ok(out)
}

/// Values of a reintegrated surface on a tensor grid, with the gap between the two
/// staircase paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Reintegration {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `values[i][j]` at `(xs[i], ys[j])`, along the x-first path.
    pub values: Vec<Vec<Nil3Point>>,
    /// Largest difference between the x-first and y-first paths.
    pub path_gap: f64,
    /// Largest closedness residual over the grid.
    pub closedness: f64,
}

/// Settings for [`integrate_from_derivative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSettings {
    pub step: f64,
    /// Largest closedness residual accepted before integrating.
    pub closed_tol: f64,
    /// Largest disagreement accepted between the two paths.
    pub path_tol: f64,
}

impl Default for PathSettings {
    fn default() -> Self {
        PathSettings { step: 5e-3, closed_tol: 1e-8, path_tol: 1e-7 }
    }
}

/// Integrates `f^{-1} df = F_x dx + F_y dy` from `start` at `base` over the grid
/// `xs x ys`, along axis-first and y-first staircase paths.
pub fn integrate_from_derivative(
    d: &DerivativeTriple,
    base: (f64, f64),
    start: Nil3Point,
    xs: &[f64],
    ys: &[f64],
    settings: PathSettings,
) -> Result<Reintegration> {
    let closedness = pool()
        .install(|| {
            xs.par_iter()
                .map(|&x| {
                    ys.iter().try_fold(0.0f64, |m, &y| {
                        let r = closedness_residual(d, x, y)?;
                        Ok(r.iter().fold(m, |m, v| m.max(v.abs())))
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })?
        .into_iter()
        .fold(0.0, f64::max);
    if !(closedness <= settings.closed_tol) {
        return Err(Error::NotClosed(closedness));
    }
    let step = Steps::MaxLength(settings.step);
    let row = walk(d, Axis::X, base.1, base.0, start, xs, step)?;
    let x_first: Vec<Vec<Nil3Point>> = pool()
        .install(|| xs.par_iter().zip(row.par_iter()).map(|(&x, &p)| walk(d, Axis::Y, x, base.1, p, ys, step)).collect::<Result<_>>())?;
    let col = walk(d, Axis::Y, base.0, base.1, start, ys, step)?;
    let y_first: Vec<Vec<Nil3Point>> = pool()
        .install(|| ys.par_iter().zip(col.par_iter()).map(|(&y, &p)| walk(d, Axis::X, y, base.0, p, xs, step)).collect::<Result<_>>())?;
    let mut gap: f64 = 0.0;
    for (i, r) in x_first.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            gap = gap.max(p.max_abs_diff(y_first[j][i]));
        }
    }
    if !(gap <= settings.path_tol) {
        return Err(Error::NotClosed(gap));
    }
    Ok(Reintegration { xs: xs.to_vec(), ys: ys.to_vec(), values: x_first, path_gap: gap, closedness })
}

/// A surface known through its derivative triple, evaluated pointwise along the x-first
/// staircase path from `base`.
#[derive(Clone)]
pub struct IntegratedSurface {
    pub triple: DerivativeTriple,
    pub base: (f64, f64),
    pub start: Nil3Point,
    /// RK4 steps on each leg of the path.
    pub steps: usize,
}

impl IntegratedSurface {
    pub fn point(&self, x: f64, y: f64) -> Result<Nil3Point> {
        let n = Steps::Count(self.steps);
        let p = walk(&self.triple, Axis::X, self.base.1, self.base.0, self.start, &[x], n)?[0];
        Ok(walk(&self.triple, Axis::Y, x, self.base.1, p, &[y], n)?[0])
    }

    /// `-e^{u/2} g(N, E3)` with `e^u = 2 g(f_x, f_y)`.
    pub fn support(&self, x: f64, y: f64) -> Result<f64> {
        let (fx, fy) = self.triple.frame_partials(x, y)?;
        let (u, n) = chart_normal(fx, fy)?;
        Ok(-(0.5 * u).exp() * metric(n, E3))
    }

    /// Mean curvature from fourth-order differences of the triple; left invariance makes
    /// the position along the path irrelevant.
    pub fn mean_curvature(&self, x: f64, y: f64) -> Result<f64> {
        let (h, g12, _) = crate::verify::jet_mean_curvature(&self.triple.jet(x, y)?)?;
        Ok(h * g12.signum())
    }

    /// Definitional Abresch-Rosenberg coefficient from the triple.
    pub fn abresch_rosenberg(&self, x: f64, y: f64) -> Result<ParaComplex> {
        crate::scroll::ar_from_jet(&self.triple.jet(x, y)?)
    }
}

impl crate::verify::Surface for IntegratedSurface {
    fn point(&self, x: f64, y: f64) -> Result<Nil3Point> {
        IntegratedSurface::point(self, x, y)
    }
}

/// Applies `F0` to the Minkowski derivative: `(psi1, psi2, i' psi3) = (phi1, phi2, i' phi3) F0`.
pub fn gauge_triple(d: &DerivativeTriple, f0: &Matrix3<f64>) -> Result<DerivativeTriple> {
    if !is_special_lorentz(f0) {
        return Err(Error::NotLorentz);
    }
    let (d, m) = (d.clone(), *f0);
    Ok(DerivativeTriple::new(move |x, y| {
        let v = to_mink(d.at(x, y)?);
        let mut w = [ParaComplex::ZERO; 3];
        for (k, wk) in w.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *wk = *wk + *vj * m[(j, k)];
            }
        }
        Ok(from_mink(w))
    }))
}

/// Gauge-transforms a scroll given in a null chart and returns the reintegrated surface,
/// based at `base` and starting at the scroll's own value there.
pub fn gauge_transform(f: &NullScroll, chart: &NullChart, f0: &Matrix3<f64>, base: (f64, f64)) -> Result<IntegratedSurface> {
    let triple = gauge_triple(&scroll_triple(f, chart), f0)?;
    let (s, t) = chart.to_st(base.0, base.1)?;
    Ok(IntegratedSurface { triple, base, start: f.eval(s, t), steps: 400 })
}

/// Parses a row-major 3x3 matrix from a JSON array of nine numbers and checks that it
/// lies in SO(2,1).
pub fn parse_so21(json: &str) -> Result<Matrix3<f64>> {
    let v: Vec<f64> = serde_json::from_str(json)?;
    if v.len() != 9 {
        return Err(Error::Invalid(format!("expected 9 numbers, got {}", v.len())));
    }
    let m = Matrix3::from_row_slice(&v);
    if !is_special_lorentz(&m) {
        return Err(Error::NotLorentz);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{constant, Analytic, ScalarCurve};
    use crate::grid::Grid;
    use crate::minkowski::{boost, bscroll_eval, integrate_mink_frame, rotation, standard_frame};
    use crate::scroll::{abresch_rosenberg, support_function};
    use crate::tolerances::Tolerances;
    use crate::verify::{verify_correspondence, verify_minimal};

    fn chart() -> NullChart {
        NullChart::new(
            Analytic::new(|x| x / 8.0).with_d1(|_| 0.125).with_d2(|_| 0.0).shared(),
            Analytic::new(|y: f64| 1.0 / y).with_d1(|y: f64| -1.0 / (y * y)).with_d2(|y: f64| 2.0 / (y * y * y)).shared(),
        )
    }

    fn sin_k1() -> ScalarCurve {
        Analytic::new(|s: f64| s.sin()).with_d1(|s: f64| s.cos()).shared()
    }

    fn lift(k1: ScalarCurve) -> (MinkNullFrame, NullScroll) {
        let fr = integrate_mink_frame(k1, constant(0.5), standard_frame(), (-2.0, 2.0), 1e-3).unwrap();
        let nil = bscroll_to_nil(&fr, 1e-3).unwrap();
        (fr, nil)
    }

    const PTS: [(f64, f64); 3] = [(0.3, 0.7), (-0.5, 1.5), (0.2, 1.2)];

    #[test]
    fn lift_matches_component_formulas_and_is_minimal() {
        let tol = Tolerances::default();
        for k1 in [constant(0.0), sin_k1()] {
            let (fr, nil) = lift(k1);
            let grid = Grid::new((-1.5, 1.5), 21, (-1.0, 1.0), 21);
            let r = verify_correspondence(&fr, &nil, &grid, &tol);
            assert!(r.passed(), "{r:?}");
            assert!(r.residuals["f3"].max < 1e-12);
            let m = verify_minimal(&nil, "lift", &grid, &tol);
            assert!(m.passed(), "{m:?}");
        }
    }

    #[test]
    fn lift_rejects_bad_frames() {
        let fr = integrate_mink_frame(constant(0.0), constant(0.3), standard_frame(), (-1.0, 1.0), 1e-3).unwrap();
        assert!(matches!(bscroll_to_nil(&fr, 1e-3), Err(Error::BadFrame(_))));
        let fr = integrate_mink_frame(constant(0.0), constant(0.5), standard_frame(), (0.5, 1.0), 1e-3);
        if let Ok(fr) = fr {
            assert!(matches!(bscroll_to_nil(&fr, 1e-3), Err(Error::BadFrame(_))));
        }
    }

    #[test]
    fn mismatched_frame_fails_correspondence() {
        let (_, nil) = lift(sin_k1());
        let (other, _) = lift(constant(0.0));
        let r = verify_correspondence(&other, &nil, &Grid::new((-1.0, 1.0), 11, (-1.0, 1.0), 11), &Tolerances::default());
        assert!(!r.passed());
    }

    #[test]
    fn minkowski_derivative_round_trips() {
        let c = chart();
        for k1 in [constant(0.0), sin_k1()] {
            let (fr, nil) = lift(k1);
            let map = {
                let (nil, c) = (nil.clone(), c.clone());
                move |x: f64, y: f64| c.to_st(x, y).map(|(s, t)| nil.eval(s, t))
            };
            let fd = derivative_of(map);
            let exact = scroll_triple(&nil, &c);
            for (x, y) in PTS {
                let phi = to_mink(fd.at(x, y).unwrap());
                let psi = |a: f64, b: f64| {
                    let (s, t) = c.to_st(a, b).unwrap();
                    bscroll_eval(&fr, s, t)
                };
                let h = 1e-5;
                let px = (psi(x + h, y) - psi(x - h, y)) * (0.5 / h);
                let py = (psi(x, y + h) - psi(x, y - h)) * (0.5 / h);
                let (px, py) = (px.to_array(), py.to_array());
                for j in 0..3 {
                    let want = ParaComplex::L * px[j] + ParaComplex::LBAR * py[j];
                    assert!(phi[j].max_abs_diff(want) < 1e-6);
                    assert!(fd.at(x, y).unwrap()[j].max_abs_diff(exact.at(x, y).unwrap()[j]) < 1e-9);
                }
                let back = from_mink(phi);
                for (b, d) in back.iter().zip(fd.at(x, y).unwrap()) {
                    assert!(b.max_abs_diff(d) < 1e-15);
                }
            }
        }
    }

    #[test]
    fn scroll_triples_are_closed() {
        let c = chart();
        let (_, nil) = lift(sin_k1());
        let d = scroll_triple(&nil, &c);
        for (x, y) in PTS {
            let r = closedness_residual(&d, x, y).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-8), "{r:?}");
        }
        let twisted = DerivativeTriple::new(move |x, y| {
            let mut p = d.at(x, y)?;
            p[2] = p[2] + ParaComplex::L * (0.1 * y);
            Ok(p)
        });
        let r = closedness_residual(&twisted, 0.3, 0.8).unwrap();
        assert!((r[2] - 0.1).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn reintegration_recovers_the_scroll() {
        let c = chart();
        let (_, nil) = lift(sin_k1());
        let xs: Vec<f64> = (0..11).map(|i| -0.5 + 0.1 * i as f64).collect();
        let ys: Vec<f64> = (0..11).map(|i| 0.7 + 0.1 * i as f64).collect();
        let (s0, t0) = c.to_st(0.0, 1.0).unwrap();
        let re =
            integrate_from_derivative(&scroll_triple(&nil, &c), (0.0, 1.0), nil.eval(s0, t0), &xs, &ys, PathSettings::default()).unwrap();
        assert!(re.path_gap < 1e-7);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let (s, t) = c.to_st(x, y).unwrap();
                assert!(re.values[i][j].max_abs_diff(nil.eval(s, t)) < 1e-6);
            }
        }
    }

    #[test]
    fn zero_derivative_gives_a_constant() {
        let d = DerivativeTriple::new(|_, _| Ok([ParaComplex::ZERO; 3]));
        let p = Nil3Point::new(1.0, -2.0, 0.5);
        let re = integrate_from_derivative(&d, (0.0, 0.0), p, &[-1.0, 0.0, 2.0], &[-0.5, 1.0], PathSettings::default()).unwrap();
        assert!(re.values.iter().flatten().all(|q| *q == p));
    }

    #[test]
    fn open_triples_are_rejected() {
        let d = DerivativeTriple::new(|_, y| Ok([ParaComplex::ZERO, ParaComplex::ZERO, ParaComplex::L * y]));
        let r = integrate_from_derivative(&d, (0.0, 0.0), Nil3Point::IDENTITY, &[0.5], &[0.5], PathSettings::default());
        assert!(matches!(r, Err(Error::NotClosed(_))));
    }

    #[test]
    fn identity_gauge_is_a_left_translate() {
        let c = chart();
        let (_, nil) = lift(sin_k1());
        let g = gauge_transform(&nil, &c, &Matrix3::identity(), (0.0, 1.0)).unwrap();
        for (x, y) in PTS {
            let (s, t) = c.to_st(x, y).unwrap();
            assert!(g.point(x, y).unwrap().max_abs_diff(nil.eval(s, t)) < 1e-9);
        }
    }

    #[test]
    fn gauge_preserves_support_and_ar_data() {
        let c = chart();
        let tol = Tolerances::default();
        for k1 in [constant(0.0), sin_k1()] {
            let (_, nil) = lift(k1);
            for f0 in [boost(1, 0.3), boost(2, 0.3), rotation(0.3) * boost(1, -0.2)] {
                let g = gauge_transform(&nil, &c, &f0, (0.0, 1.0)).unwrap();
                for (x, y) in PTS {
                    let h0 = support_function(&nil, &c, x, y).unwrap().closed;
                    let q0 = abresch_rosenberg(&nil, &c, x, y).unwrap().closed;
                    assert!((g.support(x, y).unwrap().abs() - h0.abs()).abs() < 1e-5);
                    let q = g.abresch_rosenberg(x, y).unwrap();
                    assert!(q.max_abs_diff(q0) < 1e-6);
                    assert!((q * q.conj()).max_abs_diff(ParaComplex::ZERO) < 1e-9);
                    assert!(closedness_residual(&g.triple, x, y).unwrap().iter().all(|v| v.abs() < 1e-8));
                    assert!(g.mean_curvature(x, y).unwrap().abs() < 1e-6);
                }
                let r = verify_minimal(&g, "gauged", &Grid::new((-0.5, 0.5), 9, (0.7, 1.5), 9), &tol);
                assert!(r.passed() && r.mask_fraction < 0.5, "{r:?}");
            }
        }
    }

    #[test]
    fn gauge_rejects_non_lorentz() {
        let c = chart();
        let (_, nil) = lift(constant(0.0));
        let m = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0));
        assert!(matches!(gauge_transform(&nil, &c, &m, (0.0, 1.0)), Err(Error::NotLorentz)));
    }

    #[test]
    fn parses_so21_matrices() {
        let b = boost(1, 0.4);
        let text = serde_json::to_string(&b.transpose().iter().copied().collect::<Vec<f64>>()).unwrap();
        assert!((parse_so21(&text).unwrap() - b).abs().max() < 1e-15);
        assert!(matches!(parse_so21("[1,0,0,0,1,0,0,0,-1]"), Err(Error::NotLorentz)));
        assert!(matches!(parse_so21("[1,0,0]"), Err(Error::Invalid(_))));
        assert!(parse_so21("nope").is_err());
    }
}
