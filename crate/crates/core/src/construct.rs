//! Constructors of minimal null scrolls and the closed-form example gallery.

use std::sync::Arc;

use crate::curve::{constant, Analytic, Curve, FrameCurve, FrameSpline, ScalarCurve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nil3_core::{coord_to_frame, group_inv, group_mul, metric, FrameVector, Nil3Point};
use crate::nullcurve::{
    compute_beta, integrate_frame_system, normalize_ruling, reconstruct_curve, sample_points, standard_frame, times, BetaClass,
    FrameSettings, NullCurve, NullFrame, Ruling,
};
use crate::scroll::{NullChart, NullScroll};

/// Number of sample points used for precondition checks along the span.
const CHECK_SAMPLES: usize = 201;

/// Light-cone valued rulings.
#[derive(Clone)]
pub enum RulingSpec {
    /// `B~ = (1, cos s, sin s)/2`.
    Circle,
    /// `B~ = (cosh s, sinh s, -1)/2`.
    Hyperbola,
    /// `B~ = (s^2/8 + 1/2, s/2, s^2/8 - 1/2)`.
    Parabola,
    /// `B~ = scale(s) c` with `c` a fixed null vector.
    ConstantDirection { c: FrameVector, scale: ScalarCurve },
    /// A ruling interpolated from samples.
    Sampled(FrameCurve),
}

impl RulingSpec {
    pub fn ruling(&self) -> Ruling {
        match self {
            RulingSpec::Circle => circle_ruling(1.0),
            RulingSpec::Hyperbola => hyperbola_ruling(1.0),
            RulingSpec::Parabola => Ruling::new(
                Analytic::new(|s: f64| FrameVector::new(s * s / 8.0 + 0.5, 0.5 * s, s * s / 8.0 - 0.5))
                    .with_d1(|s: f64| FrameVector::new(0.25 * s, 0.5, 0.25 * s))
                    .with_d2(|_| FrameVector::new(0.25, 0.0, 0.25))
                    .shared(),
            ),
            RulingSpec::ConstantDirection { c, scale } => {
                let c = *c;
                Ruling::new(times(
                    scale.clone(),
                    Analytic::new(move |_| c).with_d1(|_| FrameVector::ZERO).with_d2(|_| FrameVector::ZERO).shared(),
                ))
            }
            RulingSpec::Sampled(curve) => Ruling::new(curve.clone()),
        }
    }

    /// A not-a-knot spline through `(s_i, B~_i)`.
    pub fn sampled(knots: Vec<f64>, values: &[FrameVector]) -> Result<Self> {
        Ok(RulingSpec::Sampled(Arc::new(FrameSpline::not_a_knot(knots, values)?)))
    }
}

/// `B~ = (1, cos(w s), sin(w s))/2`; `w = 1` is the circle ruling.
pub fn circle_ruling(w: f64) -> Ruling {
    Ruling::new(
        Analytic::new(move |s: f64| FrameVector::new(0.5, 0.5 * (w * s).cos(), 0.5 * (w * s).sin()))
            .with_d1(move |s: f64| FrameVector::new(0.0, -0.5 * w * (w * s).sin(), 0.5 * w * (w * s).cos()))
            .with_d2(move |s: f64| FrameVector::new(0.0, -0.5 * w * w * (w * s).cos(), -0.5 * w * w * (w * s).sin()))
            .shared(),
    )
}

/// `B~ = c (cosh s, sinh s, -1)/2`.
pub fn hyperbola_ruling(c: f64) -> Ruling {
    let h = 0.5 * c;
    Ruling::new(
        Analytic::new(move |s: f64| FrameVector::new(h * s.cosh(), h * s.sinh(), -h))
            .with_d1(move |s: f64| FrameVector::new(h * s.sinh(), h * s.cosh(), 0.0))
            .with_d2(move |s: f64| FrameVector::new(h * s.cosh(), h * s.sinh(), 0.0))
            .shared(),
    )
}

/// The free functions of the constructions together with the integration settings.
#[derive(Clone)]
pub struct ConstructionParams {
    /// Nowhere-vanishing scale for the `beta = 0` and tangent branches.
    pub alpha: ScalarCurve,
    /// Free function of the `beta = 1/2` branch.
    pub b: ScalarCurve,
    pub settings: FrameSettings,
    /// Bound on `|g(A,A)|` and `|g(A,B) - 1|` checked by the `beta = 1/2` branch.
    pub velocity_tolerance: f64,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams { alpha: constant(1.0), b: constant(0.0), settings: FrameSettings::default(), velocity_tolerance: 1e-9 }
    }
}

/// A constructed scroll with whatever auxiliary data its branch produced.
#[derive(Clone)]
pub struct Built {
    pub scroll: NullScroll,
    pub frame: Option<NullFrame>,
    pub chart: Option<NullChart>,
    pub span: (f64, f64),
}

impl Built {
    fn plain(scroll: NullScroll, span: (f64, f64)) -> Self {
        Built { scroll, frame: None, chart: None, span }
    }
}

fn check_alpha(alpha: &dyn Curve<f64>, span: (f64, f64)) -> Result<()> {
    for s in sample_points(span, CHECK_SAMPLES) {
        let a = alpha.value(s);
        if a == 0.0 || a.is_nan() {
            return Err(Error::AlphaVanishes(s));
        }
    }
    Ok(())
}

/// The `beta = 0` branch: `B~ = scale(s) c`, `A = alpha(s) scale(s) (c1, c2, -c3)`, so
/// `gamma` is an affine null line.
pub fn construct_beta_zero(c: FrameVector, scale: ScalarCurve, params: &ConstructionParams) -> Result<Built> {
    let span = params.settings.span;
    let g = metric(c, c);
    if g.abs() > 1e-9 * c.euclid_norm_sq().max(1.0) {
        return Err(Error::NotNull(g));
    }
    if c.v3 == 0.0 {
        return Err(Error::ZeroC3);
    }
    check_alpha(&*params.alpha, span)?;
    let (alpha, sc) = (params.alpha.clone(), scale.clone());
    let product = move |x: f64| alpha.value(x) * sc.value(x);
    // alpha * scale may have a removable singularity; use the symmetric limit there
    let m = Analytic::new(move |s| {
        let v = product(s);
        if v.is_finite() {
            v
        } else {
            0.5 * (product(s + 1e-6) + product(s - 1e-6))
        }
    })
    .shared();
    let dir = c.flip3();
    let velocity = times(m, Analytic::new(move |_| dir).with_d1(|_| FrameVector::ZERO).with_d2(|_| FrameVector::ZERO).shared());
    let base = reconstruct_curve(velocity, params.settings)?;
    let ruling = RulingSpec::ConstantDirection { c, scale }.ruling();
    Ok(Built::plain(NullScroll::new(base, ruling), span))
}

/// `A = -4 (2 g(B'',B'') B + B'') - 2 b (B' + (b/4) B)` with `B` the induced ruling.
fn beta_half_velocity(ruling: &Ruling, b: &dyn Curve<f64>, s: f64) -> FrameVector {
    let bb = ruling.value(s).flip3();
    let db = ruling.d1(s).flip3();
    let ddb = ruling.d2(s).flip3();
    let bs = b.value(s);
    (bb * (2.0 * metric(ddb, ddb)) + ddb) * -4.0 - (db + bb * (0.25 * bs)) * (2.0 * bs)
}

/// The `beta = 1/2` branch. The ruling is normalized first; a ruling with `beta = 0`
/// is rejected.
pub fn construct_beta_half(ruling: &Ruling, params: &ConstructionParams) -> Result<Built> {
    let span = params.settings.span;
    let (ruling, class) = normalize_ruling(ruling, span, CHECK_SAMPLES)?;
    if class == BetaClass::Zero {
        return Err(Error::BetaNotHalf(0.0));
    }
    let (r, b) = (ruling.clone(), params.b.clone());
    let velocity = Analytic::new(move |s| beta_half_velocity(&r, &*b, s)).shared();
    for s in sample_points(span, CHECK_SAMPLES) {
        let a = velocity.value(s);
        let null = metric(a, a);
        let pairing = metric(a, ruling.induced(s)) - 1.0;
        let tol = params.velocity_tolerance;
        if !(null.abs() <= tol && pairing.abs() <= tol) {
            return Err(Error::Construction(format!("velocity check failed at s = {s}: g(A,A) = {null:e}, g(A,B) - 1 = {pairing:e}")));
        }
    }
    let base = reconstruct_curve(velocity, params.settings)?;
    Ok(Built::plain(NullScroll::new(base, ruling), span))
}

/// Tangent surfaces: `A = alpha B~`, which requires `beta != 0` and `B3 != 0`.
/// The surface is `gamma + (t/alpha) gamma'` in coordinates and is degenerate at `t = 0`.
pub fn construct_tangent(ruling: &Ruling, params: &ConstructionParams) -> Result<Built> {
    let span = params.settings.span;
    check_alpha(&*params.alpha, span)?;
    for s in sample_points(span, CHECK_SAMPLES) {
        let beta = compute_beta(ruling, s)?.beta;
        if beta.abs() <= 1e-9 {
            return Err(Error::BetaZero(s));
        }
        if ruling.value(s).v3.abs() <= 1e-12 {
            return Err(Error::ZeroB3(s));
        }
    }
    let velocity = times(params.alpha.clone(), ruling.btilde.clone());
    let base = reconstruct_curve(velocity, params.settings)?;
    Ok(Built::plain(NullScroll::new(base, ruling.clone()), span))
}

/// Scroll from the frame with curvatures `(k1, 1/2)` started at the standard frame;
/// the ruling is `B` with its third component negated.
pub fn construct_from_curvature(k1: ScalarCurve, params: &ConstructionParams) -> Result<Built> {
    let frame = integrate_frame_system(k1.clone(), constant(0.5), standard_frame(), params.settings)?;
    let base = reconstruct_curve(frame.a.clone(), params.settings)?;
    let scroll = NullScroll::new(base, frame.ruling()).with_k1(k1);
    Ok(Built { scroll, frame: Some(frame), chart: None, span: params.settings.span })
}

/// Solves `p(x) = target` on `[x0, x1]` by bisection; `p` must be monotone there.
fn invert_monotone(p: &dyn Curve<f64>, (x0, x1): (f64, f64), target: f64) -> f64 {
    let (mut lo, mut hi) = (x0, x1);
    let increasing = p.value(x1) > p.value(x0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (p.value(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Builds the scroll whose Abresch-Rosenberg coefficient is `l S(x)` in the chart
/// `s = 8 p(x)`, `t = 1/(p(x) + q(y))`, via `k1(s) = S(x)/(16 p_x^2)`.
///
/// `x_span` is the interval of `x` on which `p` is monotone; the frame is integrated over
/// its image with step `params.settings.step`. The chart conditions `p + q != 0` and
/// `p_x q_y < 0` are checked on `x_span x y_span`.
pub fn construct_from_ar_data(
    s_fn: ScalarCurve,
    p: ScalarCurve,
    q: ScalarCurve,
    x_span: (f64, f64),
    y_span: (f64, f64),
    params: &ConstructionParams,
) -> Result<Built> {
    for x in sample_points(x_span, CHECK_SAMPLES) {
        let px = p.d1(x);
        if !(px.abs() > 1e-12) || px.signum() != p.d1(x_span.0).signum() {
            return Err(Error::ChartInvalid(format!("p_x = {px:e} at x = {x}; p must be strictly monotone")));
        }
    }
    let chart = NullChart::new(p.clone(), q);
    for x in sample_points(x_span, 41) {
        for y in sample_points(y_span, 41) {
            chart.at(x, y)?;
        }
    }
    let (a, b) = (8.0 * p.value(x_span.0), 8.0 * p.value(x_span.1));
    let span = (a.min(b), a.max(b));
    let pp = p.clone();
    let k1 = Analytic::new(move |s: f64| {
        let x = invert_monotone(&*pp, x_span, s / 8.0);
        let px = pp.d1(x);
        s_fn.value(x) / (16.0 * px * px)
    })
    .shared();
    let settings = FrameSettings { origin: 0.0f64.clamp(span.0, span.1), span, step: params.settings.step };
    let mut built = construct_from_curvature(k1, &ConstructionParams { settings, ..params.clone() })?;
    built.chart = Some(chart);
    Ok(built)
}

/// Closed-form surfaces used as oracles for the constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Example {
    Circle,
    Hyperbola,
    Parabola { b: f64 },
    VerticalPlane { theta: f64 },
    HorizontalUmbrella,
    Tangent,
}

impl Example {
    /// The five surfaces written by `examples all`.
    pub fn figures() -> Vec<Example> {
        vec![
            Example::HorizontalUmbrella,
            Example::VerticalPlane { theta: std::f64::consts::FRAC_PI_3 },
            Example::Circle,
            Example::Hyperbola,
            Example::Parabola { b: 1.0 },
        ]
    }

    /// Parses `circle`, `hyperbola`, `parabola[:b]`, `vertical-plane[:theta]`,
    /// `horizontal-umbrella` or `tangent`; underscores and dashes are interchangeable.
    pub fn parse(text: &str) -> Result<Example> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let arg = arg.map(|a| a.trim().parse::<f64>().map_err(|_| Error::UnknownName(text.to_string()))).transpose()?;
        let name = name.trim().to_ascii_lowercase().replace('_', "-");
        let ex = match (name.as_str(), arg) {
            ("circle", None) => Example::Circle,
            ("hyperbola", None) => Example::Hyperbola,
            ("parabola", b) => Example::Parabola { b: b.unwrap_or(1.0) },
            ("vertical-plane", t) => Example::VerticalPlane { theta: t.unwrap_or(std::f64::consts::FRAC_PI_3) },
            ("horizontal-umbrella" | "umbrella", None) => Example::HorizontalUmbrella,
            ("tangent", None) => Example::Tangent,
            _ => return Err(Error::UnknownName(text.to_string())),
        };
        Ok(ex)
    }

    pub fn name(&self) -> String {
        match self {
            Example::Circle => "circle".into(),
            Example::Hyperbola => "hyperbola".into(),
            Example::Parabola { b } => format!("parabola:{b}"),
            Example::VerticalPlane { theta } => format!("vertical-plane:{theta}"),
            Example::HorizontalUmbrella => "horizontal-umbrella".into(),
            Example::Tangent => "tangent".into(),
        }
    }

    /// Grid on which the surface is regular (`|g12|` stays away from zero).
    pub fn working_grid(&self, n: usize) -> Grid {
        match self {
            Example::Circle | Example::HorizontalUmbrella => Grid::new((-1.0, 1.0), n, (-1.0, 1.0), n),
            Example::Hyperbola => Grid::new((-1.0, 1.0), n, (1.0, 2.5), n),
            Example::Parabola { .. } => Grid::new((-1.5, -0.5), n, (-2.0, -0.5), n),
            Example::VerticalPlane { .. } => Grid::new((0.2, 1.2), n, (-1.0, 1.0), n),
            Example::Tangent => Grid::new((-1.0, 1.0), n, (TANGENT_T.0, TANGENT_T.1), n),
        }
    }
}

/// Ruling scale and `t` range of the tangent example.
const TANGENT_SCALE: f64 = 2.0;
const TANGENT_T: (f64, f64) = (0.5, 2.0);

type Surface = Arc<dyn Fn(f64, f64) -> Nil3Point + Send + Sync>;

/// A gallery surface: the printed closed form and the same scroll assembled from
/// closed-form `gamma`, `A` and `B~`.
#[derive(Clone)]
pub struct GalleryEntry {
    pub example: Example,
    pub scroll: NullScroll,
    pub surface: Surface,
}

type PointFn = Arc<dyn Fn(f64) -> Nil3Point + Send + Sync>;

/// A null curve from closed-form coordinates and their first two derivatives.
pub fn coordinate_curve(
    g: impl Fn(f64) -> Nil3Point + Send + Sync + 'static,
    dg: impl Fn(f64) -> Nil3Point + Send + Sync + 'static,
    ddg: impl Fn(f64) -> Nil3Point + Send + Sync + 'static,
) -> NullCurve {
    let (g, dg, ddg): (PointFn, PointFn, PointFn) = (Arc::new(g), Arc::new(dg), Arc::new(ddg));
    let point = {
        let (g, dg, ddg) = (g.clone(), dg.clone(), ddg.clone());
        Analytic::new(move |s| g(s)).with_d1(move |s| dg(s)).with_d2(move |s| ddg(s)).shared()
    };
    let velocity = {
        let (g1, dg1) = (g.clone(), dg.clone());
        Analytic::new(move |s| coord_to_frame(g1(s), dg1(s).to_array()))
            .with_d1(move |s| {
                let (p, dd) = (g(s), ddg(s));
                FrameVector::new(dd.x1, dd.x2, dd.x3 - 0.5 * (p.x1 * dd.x2 - p.x2 * dd.x1))
            })
            .shared()
    };
    NullCurve { point, velocity }
}

fn poly(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * s + k)
}

fn poly_d(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &k)| i as f64 * k).collect()
}

fn parabola_gamma(b: f64) -> [Vec<f64>; 3] {
    let b2 = b * b;
    let b3 = b2 * b;
    let b4 = b2 * b2;
    [
        vec![0.0, -(b2 / 4.0 + 1.0), -b / 4.0, -b2 / 48.0],
        vec![0.0, -b, -b2 / 8.0],
        vec![0.0, 1.0 - b2 / 4.0, b / 4.0, b4 / 192.0, -b3 / 192.0, -b4 / 3840.0],
    ]
}

pub fn example_gallery(example: Example) -> GalleryEntry {
    match example {
        Example::Circle => GalleryEntry {
            example,
            scroll: NullScroll::new(
                coordinate_curve(
                    |s: f64| Nil3Point::new(-s, s.sin(), -0.5 * s * s.sin()),
                    |s: f64| Nil3Point::new(-1.0, s.cos(), -0.5 * s.sin() - 0.5 * s * s.cos()),
                    |s: f64| Nil3Point::new(0.0, -s.sin(), -s.cos() + 0.5 * s * s.sin()),
                ),
                circle_ruling(1.0),
            )
            .with_k1(constant(1.0)),
            surface: Arc::new(|s: f64, t: f64| {
                Nil3Point::new(-s + 0.5 * t, s.sin() + 0.5 * t * s.cos(), -0.5 * s * s.sin() + 0.25 * t * s.sin() - 0.25 * t * s * s.cos())
            }),
        },
        Example::Hyperbola => GalleryEntry {
            example,
            scroll: NullScroll::new(
                coordinate_curve(
                    |s: f64| Nil3Point::new(-s.sinh(), 1.0 - s.cosh(), 0.5 * s + 0.5 * s.sinh()),
                    |s: f64| Nil3Point::new(-s.cosh(), -s.sinh(), 0.5 + 0.5 * s.cosh()),
                    |s: f64| Nil3Point::new(-s.sinh(), -s.cosh(), 0.5 * s.sinh()),
                ),
                hyperbola_ruling(1.0),
            )
            .with_k1(constant(-1.0)),
            surface: Arc::new(|s: f64, t: f64| {
                Nil3Point::new(
                    -s.sinh() + 0.5 * t * s.cosh(),
                    1.0 - s.cosh() + 0.5 * t * s.sinh(),
                    0.5 * s + 0.5 * s.sinh() - 0.25 * t - 0.25 * t * s.cosh(),
                )
            }),
        },
        Example::Parabola { b } => {
            let c = parabola_gamma(b);
            let d = c.clone().map(|p| poly_d(&p));
            let dd = d.clone().map(|p| poly_d(&p));
            let ev = |c: [Vec<f64>; 3]| move |s: f64| Nil3Point::new(poly(&c[0], s), poly(&c[1], s), poly(&c[2], s));
            let mut scroll = NullScroll::new(coordinate_curve(ev(c.clone()), ev(d), ev(dd)), RulingSpec::Parabola.ruling());
            if b == 0.0 {
                scroll = scroll.with_k1(constant(0.0));
            }
            let g = ev(c);
            let b2 = b * b;
            GalleryEntry {
                example,
                scroll,
                surface: Arc::new(move |s: f64, t: f64| {
                    let p = g(s);
                    let s2 = s * s;
                    Nil3Point::new(
                        p.x1 + t * (s2 / 8.0 + 0.5),
                        p.x2 + 0.5 * s * t,
                        p.x3 + t * (b2 / 384.0 * s2 * s2 - (0.125 + b2 / 32.0) * s2 + 0.25 * b * s - 0.5),
                    )
                }),
            }
        }
        Example::VerticalPlane { theta } => {
            let (c, sn) = (theta.cos(), theta.sin());
            GalleryEntry {
                example,
                scroll: NullScroll::new(
                    coordinate_curve(
                        move |s| Nil3Point::new(s, s * c, -s * sn),
                        move |_| Nil3Point::new(1.0, c, -sn),
                        |_| Nil3Point::new(0.0, 0.0, 0.0),
                    ),
                    Ruling::new(
                        Analytic::new(move |s| FrameVector::new(s, s * c, s * sn))
                            .with_d1(move |_| FrameVector::new(1.0, c, sn))
                            .with_d2(|_| FrameVector::ZERO)
                            .shared(),
                    ),
                ),
                surface: Arc::new(move |s: f64, t: f64| {
                    Nil3Point::new((1.0 + t) * s, (1.0 + t) * s * c, (1.0 + t) * s * sn - 2.0 * s * sn)
                }),
            }
        }
        Example::HorizontalUmbrella => {
            let [a0, b0, c0] = standard_frame();
            let bt = move |s: f64| (b0 + c0 * (0.5 * s) - a0 * (s * s / 8.0)).flip3();
            GalleryEntry {
                example,
                scroll: NullScroll::new(
                    coordinate_curve(
                        move |s| Nil3Point::new(s * a0.v1, s * a0.v2, s * a0.v3),
                        move |_| Nil3Point::new(a0.v1, a0.v2, a0.v3),
                        |_| Nil3Point::new(0.0, 0.0, 0.0),
                    ),
                    Ruling::new(
                        Analytic::new(bt)
                            .with_d1(move |s| (c0 * 0.5 - a0 * (0.25 * s)).flip3())
                            .with_d2(move |_| (a0 * -0.25).flip3())
                            .shared(),
                    ),
                )
                .with_k1(constant(0.0)),
                surface: Arc::new(move |s: f64, t: f64| {
                    let m = s - s * s * t / 8.0;
                    Nil3Point::new(
                        m * a0.v1 + t * b0.v1 + 0.5 * s * t * c0.v1,
                        m * a0.v2 + t * b0.v2 + 0.5 * s * t * c0.v2,
                        m * a0.v3 - t * b0.v3,
                    )
                }),
            }
        }
        Example::Tangent => {
            let h = 0.5 * TANGENT_SCALE;
            let k = h * h / 2.0;
            let g = move |s: f64| Nil3Point::new(h * s.sinh(), h * (s.cosh() - 1.0), -(h + k) * s + k * s.sinh());
            let dg = move |s: f64| Nil3Point::new(h * s.cosh(), h * s.sinh(), -(h + k) + k * s.cosh());
            GalleryEntry {
                example,
                scroll: NullScroll::new(
                    coordinate_curve(g, dg, move |s: f64| Nil3Point::new(h * s.sinh(), h * s.cosh(), k * s.sinh())),
                    hyperbola_ruling(TANGENT_SCALE),
                ),
                surface: Arc::new(move |s: f64, t: f64| {
                    let (p, v) = (g(s), dg(s));
                    Nil3Point::new(p.x1 + t * v.x1, p.x2 + t * v.x2, p.x3 + t * v.x3)
                }),
            }
        }
    }
}

/// Builds an example through its constructor branch rather than its closed form.
pub fn construct_example(example: Example, settings: FrameSettings) -> Result<Built> {
    let params = ConstructionParams { settings, ..Default::default() };
    match example {
        Example::Circle => construct_beta_half(&RulingSpec::Circle.ruling(), &params),
        Example::Hyperbola => construct_beta_half(&RulingSpec::Hyperbola.ruling(), &params),
        Example::Parabola { b } => construct_beta_half(&RulingSpec::Parabola.ruling(), &ConstructionParams { b: constant(b), ..params }),
        Example::VerticalPlane { theta } => {
            let c = FrameVector::new(1.0, theta.cos(), theta.sin());
            let scale = Analytic::new(|s| s).with_d1(|_| 1.0).with_d2(|_| 0.0).shared();
            let alpha = Analytic::new(|s: f64| 1.0 / s).shared();
            construct_beta_zero(c, scale, &ConstructionParams { alpha, ..params })
        }
        Example::HorizontalUmbrella => construct_from_curvature(constant(0.0), &params),
        Example::Tangent => construct_tangent(&hyperbola_ruling(TANGENT_SCALE), &params),
    }
}

/// Largest coordinate deviation between `f` and the oracle `g` on `grid`, after left
/// translating `f` so both agree at `(s_ref, 0)`.
pub fn aligned_deviation(f: impl Fn(f64, f64) -> Nil3Point, g: impl Fn(f64, f64) -> Nil3Point, grid: &Grid, s_ref: f64) -> f64 {
    let shift = group_mul(g(s_ref, 0.0), group_inv(f(s_ref, 0.0)));
    grid.points().into_iter().map(|(s, t)| group_mul(shift, f(s, t)).max_abs_diff(g(s, t))).fold(0.0, f64::max)
}

/// The circle scroll with its ruling rotating at rate `w` while the base curve stays
/// fixed; `w != 1` breaks minimality.
pub fn perturbed_circle(w: f64) -> NullScroll {
    let base = example_gallery(Example::Circle).scroll.base;
    NullScroll::new(base, circle_ruling(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullcurve::extract_curvatures;
    use crate::paracomplex::ParaComplex;
    use crate::scroll::{abresch_rosenberg, minimality_class, support_function, MinimalityClass};
    use crate::verify::verify_planarity;

    fn all_examples() -> Vec<Example> {
        vec![
            Example::Circle,
            Example::Hyperbola,
            Example::Parabola { b: 0.0 },
            Example::Parabola { b: 1.0 },
            Example::VerticalPlane { theta: std::f64::consts::FRAC_PI_3 },
            Example::HorizontalUmbrella,
            Example::Tangent,
        ]
    }

    #[test]
    fn constructors_reproduce_gallery() {
        for ex in all_examples() {
            let entry = example_gallery(ex);
            let grid = ex.working_grid(41);
            let built = construct_example(ex, FrameSettings::default()).unwrap();
            let s_ref = 0.0f64.clamp(grid.s0, grid.s1);
            let dev = aligned_deviation(|s, t| built.scroll.eval(s, t), |s, t| (entry.surface)(s, t), &grid, s_ref);
            assert!(dev <= 1e-9, "{}: {dev:e}", ex.name());
            let own = aligned_deviation(|s, t| entry.scroll.eval(s, t), |s, t| (entry.surface)(s, t), &grid, s_ref);
            assert!(own <= 1e-12, "{}: {own:e}", ex.name());
            assert_ne!(minimality_class(&built.scroll, (grid.s0, grid.s1), 41), MinimalityClass::NotMinimal);
            for (s, t) in grid.points() {
                let h = built.scroll.fundamental_data(s, t).unwrap().mean_curvature;
                assert!(h.abs() <= 1e-8, "{}: H = {h:e}", ex.name());
            }
        }
    }

    #[test]
    fn vertical_plane_at_right_angle() {
        let e = example_gallery(Example::VerticalPlane { theta: std::f64::consts::FRAC_PI_2 });
        for &(s, t) in &[(0.4, 0.3), (1.0, -0.7)] {
            let p = (e.surface)(s, t);
            assert!(p.max_abs_diff(Nil3Point::new((1.0 + t) * s, 0.0, (1.0 + t) * s - 2.0 * s)) < 1e-15);
        }
    }

    #[test]
    fn planarity() {
        let pts = |ex: Example| {
            let e = example_gallery(ex);
            ex.working_grid(21).points().into_iter().map(|(s, t)| (e.surface)(s, t)).collect::<Vec<_>>()
        };
        assert!(verify_planarity(&pts(Example::HorizontalUmbrella)).unwrap() <= 1e-8);
        assert!(verify_planarity(&pts(Example::Parabola { b: 0.0 })).unwrap() <= 1e-8);
        assert!(verify_planarity(&pts(Example::Circle)).unwrap() > 1e-3);
        let built = construct_from_curvature(constant(0.0), &Default::default()).unwrap();
        let grid = Grid::new((-2.0, 2.0), 21, (-2.0, 2.0), 21);
        let p: Vec<_> = grid.points().into_iter().map(|(s, t)| built.scroll.eval(s, t)).collect();
        assert!(verify_planarity(&p).unwrap() <= 1e-8);
    }

    #[test]
    fn b_zero_frame_curvatures() {
        for spec in [RulingSpec::Circle, RulingSpec::Hyperbola, RulingSpec::Parabola] {
            let built = construct_beta_half(&spec.ruling(), &ConstructionParams::default()).unwrap();
            let scroll = built.scroll.clone();
            let r = scroll.ruling.clone();
            let b: FrameCurve = Arc::new(crate::nullcurve::Flip3(r.btilde.clone()));
            let (r1, r2) = (r.clone(), r.clone());
            let c = Analytic::new(move |s| r1.d1(s).flip3() * 2.0).with_d1(move |s| r2.d2(s).flip3() * 2.0).shared();
            let frame = NullFrame::from_curves(scroll.base.velocity.clone(), b, c, (-1.5, 1.5), 31).unwrap();
            let k = extract_curvatures(&frame);
            for &s in &[-1.0, 0.2, 1.3] {
                let (k0, k1, k2) = k(s);
                let bpp = r.d2(s).flip3();
                assert!(k0.abs() < 1e-6);
                assert!((k1 - 4.0 * metric(bpp, bpp)).abs() < 1e-6);
                assert!((k2 - 0.5).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn curvature_round_trip() {
        let k1 = Analytic::new(|s: f64| s.sin()).with_d1(|s: f64| s.cos()).shared();
        let built = construct_from_curvature(k1, &Default::default()).unwrap();
        let frame = built.frame.unwrap();
        assert!(frame.gram_drift <= 1e-8);
        for &s in &[-1.7, -0.2, 0.6, 1.9] {
            let (_, k1, k2) = frame.curvatures_at(s);
            assert!((k1 - s.sin()).abs() < 1e-6 && (k2 - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn ar_data_loop_closes() {
        let s_fn = Analytic::new(|x: f64| x.sin()).with_d1(|x: f64| x.cos()).shared();
        let p = Analytic::new(|x| x / 8.0).with_d1(|_| 0.125).with_d2(|_| 0.0).shared();
        let q = Analytic::new(|y: f64| 1.0 / y).with_d1(|y: f64| -1.0 / (y * y)).with_d2(|y: f64| 2.0 / (y * y * y)).shared();
        let built = construct_from_ar_data(s_fn, p.clone(), q.clone(), (-1.0, 1.0), (0.5, 2.0), &Default::default()).unwrap();
        let chart = built.chart.as_ref().unwrap();
        for &(x, y) in &[(-0.8, 0.7), (0.1, 1.3), (0.9, 2.0)] {
            let q = abresch_rosenberg(&built.scroll, chart, x, y).unwrap();
            let target = ParaComplex::L * x.sin();
            assert!(q.closed.max_abs_diff(target) <= 1e-6, "{:?}", q.closed);
            assert!(q.from_curvature.unwrap().max_abs_diff(target) <= 1e-6);
            assert!(q.definitional.max_abs_diff(target) <= 1e-6, "{:?}", q.definitional);
            let h = support_function(&built.scroll, chart, x, y).unwrap();
            assert!((h.definitional.abs() - 4.0 * (0.5 * h.w).exp()).abs() <= 1e-5);
        }
        let zero = construct_from_ar_data(constant(0.0), p.clone(), q.clone(), (-1.0, 1.0), (0.5, 2.0), &Default::default()).unwrap();
        let grid = Grid::new((-0.125, 0.125), 9, (-1.0, 1.0), 9);
        let pts: Vec<_> = grid.points().into_iter().map(|(s, t)| zero.scroll.eval(s, t)).collect();
        assert!(verify_planarity(&pts).unwrap() <= 1e-8);
        let invalid = |p: ScalarCurve, q: ScalarCurve, y_span| {
            matches!(construct_from_ar_data(constant(1.0), p, q, (0.0, 1.0), y_span, &Default::default()), Err(Error::ChartInvalid(_)))
        };
        assert!(invalid(constant(0.0), q.clone(), (0.5, 2.0)));
        assert!(invalid(p.clone(), constant(1.0), (0.5, 2.0)));
        assert!(invalid(p.clone(), Analytic::new(|y: f64| y).with_d1(|_| 1.0).shared(), (0.5, 2.0)));
        assert!(invalid(p, q, (-1.0, 1.0)));
    }

    #[test]
    fn sampled_and_rescaled_rulings() {
        let knots: Vec<f64> = (0..=200).map(|i| -2.0 + 0.02 * i as f64).collect();
        let circle = RulingSpec::Circle.ruling();
        let values: Vec<FrameVector> = knots.iter().map(|&s| circle.value(s)).collect();
        let spec = RulingSpec::sampled(knots, &values).unwrap();
        assert!(matches!(construct_beta_half(&spec.ruling(), &ConstructionParams::default()), Err(Error::Construction(_))));
        // spline second derivatives are accurate to about 1e-4, so the velocity check is relaxed
        let loose = ConstructionParams { velocity_tolerance: 1e-3, settings: FrameSettings::new((-1.5, 1.5), 1e-3), ..Default::default() };
        let built = construct_beta_half(&spec.ruling(), &loose).unwrap();
        let g = example_gallery(Example::Circle);
        let grid = Grid::new((-1.0, 1.0), 11, (-1.0, 1.0), 11);
        assert!(aligned_deviation(|s, t| built.scroll.eval(s, t), |s, t| (g.surface)(s, t), &grid, 0.0) < 1e-4);

        let doubled = circle.scaled(constant(2.0));
        let built = construct_beta_half(&doubled, &ConstructionParams::default()).unwrap();
        assert!(aligned_deviation(|s, t| built.scroll.eval(s, t), |s, t| (g.surface)(s, t), &grid, 0.0) < 1e-9);
    }

    #[test]
    fn precondition_errors() {
        let p = ConstructionParams::default();
        let c = FrameVector::new(1.0, 1.0, 0.0);
        assert!(matches!(construct_beta_zero(c, constant(1.0), &p), Err(Error::ZeroC3)));
        let c = FrameVector::new(1.0, 0.0, 1.0);
        let vanishing = ConstructionParams { alpha: Analytic::new(|s| s).shared(), ..p.clone() };
        assert!(matches!(construct_beta_zero(c, constant(1.0), &vanishing), Err(Error::AlphaVanishes(_))));
        let line = RulingSpec::ConstantDirection { c, scale: constant(1.0) }.ruling();
        assert!(matches!(construct_beta_half(&line, &p), Err(Error::BetaNotHalf(_))));
        assert!(matches!(construct_tangent(&line, &p), Err(Error::BetaZero(_))));
        let flat = Ruling::new(
            Analytic::new(|s: f64| FrameVector::new(1.0, s.cos(), s.sin()))
                .with_d1(|s: f64| FrameVector::new(0.0, -s.sin(), s.cos()))
                .shared(),
        );
        assert!(matches!(construct_tangent(&flat, &p), Err(Error::ZeroB3(_))));
        assert!(matches!(Example::parse("sphere"), Err(Error::UnknownName(_))));
        assert_eq!(Example::parse("vertical_plane:0.5").unwrap(), Example::VerticalPlane { theta: 0.5 });
        assert_eq!(Example::parse("Horizontal-Umbrella").unwrap(), Example::HorizontalUmbrella);
    }

    #[test]
    fn tangent_surface_is_minimal_near_the_edge() {
        let f = construct_example(Example::Tangent, FrameSettings::default()).unwrap().scroll;
        for (s, t) in Grid::new((-1.0, 1.0), 41, (0.1, 1.0), 41).points() {
            let d = f.fundamental_data(s, t).unwrap();
            assert!(d.mean_curvature.abs() <= 1e-6, "H = {:e} at ({s}, {t})", d.mean_curvature);
            // g12 shrinks like t^2 here, so the FD oracle is only conditioned away from the mask
            if d.g12.abs() >= 5e-2 {
                let fd = crate::verify::fd_mean_curvature(|a, b| Ok(f.eval(a, b)), s, t, 1e-5, 1e-3).unwrap();
                assert!(fd.abs() <= 1e-6, "FD H = {fd:e} at ({s}, {t})");
            }
        }
    }

    #[test]
    fn beta_zero_degeneracy_matches_scale() {
        // g12 = -2 alpha scale^2 (c3)^2 along the family B~ = scale c, A = alpha scale (c1, c2, -c3)
        let c = FrameVector::new(1.0, 0.6, 0.8);
        let scale = Analytic::new(|s: f64| s.exp()).with_d1(|s: f64| s.exp()).with_d2(|s: f64| s.exp()).shared();
        let alpha = Analytic::new(|s: f64| 0.5 + 0.1 * s).shared();
        let built = construct_beta_zero(c, scale, &ConstructionParams { alpha, ..Default::default() }).unwrap();
        for &(s, t) in &[(0.3, 0.2), (-1.0, 1.5)] {
            let d = built.scroll.fundamental_data(s, t).unwrap();
            let expected = -2.0 * (0.5 + 0.1 * s) * (2.0 * s).exp() * 0.64;
            assert!((d.g12 - expected).abs() < 1e-9, "{} vs {expected}", d.g12);
            assert!(d.mean_curvature.abs() < 1e-8);
        }
    }
}
