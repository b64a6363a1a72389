//! Null frames along null curves in Nil3, curve reconstruction and the beta invariant.

use std::sync::Arc;

use crate::curve::{fd_d1, fd_d2, Analytic, Curve, FrameCurve, Hermite, ScalarCurve};
use crate::error::{Error, Result};
use crate::nil3_core::{cross, metric, FrameVector, Nil3Point};
use crate::ode::{self, BaseCurve as OdeBase, FrameRows};

/// Sampled or closed-form null curve with its left-translated velocity `A`.
#[derive(Clone)]
pub struct NullCurve {
    pub point: Arc<dyn Curve<Nil3Point>>,
    pub velocity: FrameCurve,
}

impl NullCurve {
    pub fn at(&self, s: f64) -> Nil3Point {
        self.point.value(s)
    }
}

/// Null frame `(A, B, C)`: `g(A,B) = g(C,C) = 1`, every other pairing zero.
#[derive(Clone)]
pub struct NullFrame {
    pub a: FrameCurve,
    pub b: FrameCurve,
    pub c: FrameCurve,
    /// Curvatures the frame was integrated from, when known.
    pub k1: Option<ScalarCurve>,
    pub k2: Option<ScalarCurve>,
    pub span: (f64, f64),
    pub gram_drift: f64,
}

/// Initial frame rows `A0, B0, C0`.
pub type InitialFrame = [FrameVector; 3];

/// The standard initial frame with `C0 = A0 x B0`, the orientation under which
/// `k2 = 1/2` produces minimal scrolls.
pub fn standard_frame() -> InitialFrame {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [FrameVector::new(-r, r, 0.0), FrameVector::new(r, r, 0.0), FrameVector::new(0.0, 0.0, -1.0)]
}

/// The opposite orientation `C0 = -A0 x B0`. Kept for comparison; with it `k2 = 1/2`
/// yields `beta = -1/2` and non-minimal scrolls.
pub fn reversed_frame() -> InitialFrame {
    let [a, b, c] = standard_frame();
    [a, b, -c]
}

/// Largest deviation from the null-frame Gram relations.
pub fn gram_defect(a: FrameVector, b: FrameVector, c: FrameVector) -> f64 {
    ode::gram_defect(&[a.to_array(), b.to_array(), c.to_array()])
}

fn frame_hermite(sol: &ode::FrameSolution, j: usize) -> Result<Hermite<FrameVector>> {
    Hermite::new(
        sol.knots.clone(),
        sol.rows.iter().map(|r| FrameVector::from_array(r[j])).collect(),
        sol.d1.iter().map(|r| FrameVector::from_array(r[j])).collect(),
        sol.d2.iter().map(|r| FrameVector::from_array(r[j])).collect(),
    )
}

/// Integration settings for the frame system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSettings {
    pub origin: f64,
    pub span: (f64, f64),
    pub step: f64,
}

impl FrameSettings {
    pub fn new(span: (f64, f64), step: f64) -> Self {
        FrameSettings { origin: 0.0, span, step }
    }
}

impl Default for FrameSettings {
    fn default() -> Self {
        FrameSettings::new((-2.0, 2.0), 1e-3)
    }
}

/// RK4 solution of `A' = k1 C, B' = k2 C, C' = -k2 A - k1 B` from `init` at `settings.origin`.
pub fn integrate_frame_system(k1: ScalarCurve, k2: ScalarCurve, init: InitialFrame, settings: FrameSettings) -> Result<NullFrame> {
    let rows: FrameRows = init.map(FrameVector::to_array);
    let sol = ode::integrate_frame(&*k1, &*k2, rows, settings.origin, settings.span, settings.step, OdeBase::None)?;
    Ok(NullFrame {
        a: Arc::new(frame_hermite(&sol, 0)?),
        b: Arc::new(frame_hermite(&sol, 1)?),
        c: Arc::new(frame_hermite(&sol, 2)?),
        k1: Some(k1),
        k2: Some(k2),
        span: settings.span,
        gram_drift: sol.max_gram_drift(),
    })
}

impl NullFrame {
    /// Wraps user-supplied frame curves after checking the Gram relations and `k0 = 0`
    /// on `samples` points across `span`.
    pub fn from_curves(a: FrameCurve, b: FrameCurve, c: FrameCurve, span: (f64, f64), samples: usize) -> Result<Self> {
        let mut drift: f64 = 0.0;
        let mut frame = NullFrame { a, b, c, k1: None, k2: None, span, gram_drift: 0.0 };
        for s in sample_points(span, samples) {
            let d = gram_defect(frame.a.value(s), frame.b.value(s), frame.c.value(s));
            if !(d <= 1e-8) {
                return Err(Error::BadFrame(format!("Gram defect {d:e} at s = {s}")));
            }
            drift = drift.max(d);
            let (k0, _, _) = frame.curvatures_at(s);
            if !(k0.abs() <= 1e-6) {
                return Err(Error::NonDistinguishedParameter(k0));
            }
        }
        frame.gram_drift = drift;
        Ok(frame)
    }

    pub fn rows_at(&self, s: f64) -> [FrameVector; 3] {
        [self.a.value(s), self.b.value(s), self.c.value(s)]
    }

    pub fn gram_defect_at(&self, s: f64) -> f64 {
        let [a, b, c] = self.rows_at(s);
        gram_defect(a, b, c)
    }

    /// `(k0, k1, k2) = (g(A',B), g(A',C), g(B',C))` from central differences.
    pub fn curvatures_at(&self, s: f64) -> (f64, f64, f64) {
        let h = 1e-3;
        let da = fd_d1(|x| self.a.value(x), s, h);
        let db = fd_d1(|x| self.b.value(x), s, h);
        let (b, c) = (self.b.value(s), self.c.value(s));
        (metric(da, b), metric(da, c), metric(db, c))
    }

    /// The orthonormal basis `((B-A)/sqrt2, (B+A)/sqrt2, C)` at `s`.
    pub fn orthonormal_at(&self, s: f64) -> [FrameVector; 3] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let [a, b, c] = self.rows_at(s);
        [(b - a) * r, (b + a) * r, c]
    }

    /// Light-cone ruling obtained from `B` by negating its third component.
    pub fn ruling(&self) -> Ruling {
        Ruling::new(Arc::new(Flip3(self.b.clone())))
    }
}

/// Curvature functions of a frame, evaluated by finite differences.
pub fn extract_curvatures(frame: &NullFrame) -> impl Fn(f64) -> (f64, f64, f64) + '_ {
    move |s| frame.curvatures_at(s)
}

/// Equally spaced sample points across `span`, endpoints included.
pub fn sample_points(span: (f64, f64), n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| span.0 + (span.1 - span.0) * i as f64 / (n - 1) as f64)
}

/// Rebuilds `gamma` from its left-translated velocity with `gamma(origin) = 0`.
///
/// The components follow `gamma' = (A1, A2, A3 + (gamma1 A2 - gamma2 A1)/2)`. Each RK4
/// step on this system reduces to Simpson's rule for the first two components.
pub fn reconstruct_curve(velocity: FrameCurve, settings: FrameSettings) -> Result<NullCurve> {
    let FrameSettings { origin, span, step } = settings;
    if !(step > 0.0) || !(span.0 <= origin && origin <= span.1) || !(span.0 < span.1) {
        return Err(Error::Invalid(format!("bad reconstruction span {span:?} / origin {origin}")));
    }
    let knots = crate::curve::nodes(span.0, span.1, origin, step);
    let o = knots.iter().position(|&s| s == origin).expect("origin is a node");
    let coord = |g: &[f64; 3], a: FrameVector| [a.v1, a.v2, a.v3 + 0.5 * (g[0] * a.v2 - g[1] * a.v1)];
    let ys = ode::rk4_nodes(|s, g: &[f64; 3]| coord(g, velocity.value(s)), [0.0; 3], &knots, o);
    let mut d1 = Vec::with_capacity(knots.len());
    let mut d2 = Vec::with_capacity(knots.len());
    for (&s, g) in knots.iter().zip(&ys) {
        let a = velocity.value(s);
        let da = velocity.d1(s);
        let gd = coord(g, a);
        d1.push(Nil3Point::from_array(gd));
        d2.push(Nil3Point::new(da.v1, da.v2, da.v3 + 0.5 * (gd[0] * a.v2 + g[0] * da.v2 - gd[1] * a.v1 - g[1] * da.v1)));
    }
    let points = Hermite::new(knots, ys.into_iter().map(Nil3Point::from_array).collect(), d1, d2)?;
    Ok(NullCurve { point: Arc::new(points), velocity })
}

/// A light-cone valued ruling `B~(s)` in frame components.
#[derive(Clone)]
pub struct Ruling {
    pub btilde: FrameCurve,
}

/// `beta` at one parameter value, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSample {
    pub beta: f64,
    /// `|B~ x B~' + beta B~|` after the least-squares solve.
    pub residual: f64,
    /// `|g(B~',B~') - beta^2|`.
    pub norm_defect: f64,
}

/// What [`normalize_ruling`] found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaClass {
    Zero,
    Half,
}

impl Ruling {
    pub fn new(btilde: FrameCurve) -> Self {
        Ruling { btilde }
    }

    pub fn value(&self, s: f64) -> FrameVector {
        self.btilde.value(s)
    }

    pub fn d1(&self, s: f64) -> FrameVector {
        self.btilde.d1(s)
    }

    pub fn d2(&self, s: f64) -> FrameVector {
        self.btilde.d2(s)
    }

    /// `B = B1 e1 + B2 e2 - B3 e3`.
    pub fn induced(&self, s: f64) -> FrameVector {
        self.value(s).flip3()
    }

    pub fn beta(&self, s: f64) -> Result<f64> {
        compute_beta(self, s).map(|b| b.beta)
    }

    pub fn scaled(&self, factor: ScalarCurve) -> Ruling {
        Ruling::new(Arc::new(Scaled { inner: self.btilde.clone(), factor }))
    }
}

/// Solves `B~ x B~' = -beta B~` by least squares over the three components.
pub fn compute_beta(ruling: &Ruling, s: f64) -> Result<BetaSample> {
    let b = ruling.value(s);
    let db = ruling.d1(s);
    beta_from(b, db, s)
}

fn beta_from(b: FrameVector, db: FrameVector, s: f64) -> Result<BetaSample> {
    let n2 = b.euclid_norm_sq();
    if !(n2 > 1e-24) {
        return Err(Error::ZeroRuling(s));
    }
    let g = metric(b, b);
    if g.abs() > 1e-8 * n2.max(1.0) {
        return Err(Error::NotNull(g));
    }
    let x = cross(b, db);
    let beta = -x.euclid_dot(b) / n2;
    Ok(BetaSample { beta, residual: (x + b * beta).euclid_norm_sq().sqrt(), norm_defect: (metric(db, db) - beta * beta).abs() })
}

/// Rescales a ruling so that `beta` becomes `1/2`, or leaves it alone when `beta = 0`.
///
/// `beta` is sampled at `samples` points of `span`; points where the ruling vanishes are
/// skipped. Returns `MixedBeta` when `beta` is neither identically zero nor nowhere zero.
pub fn normalize_ruling(ruling: &Ruling, span: (f64, f64), samples: usize) -> Result<(Ruling, BetaClass)> {
    let tol = 1e-9;
    let mut betas = Vec::new();
    for s in sample_points(span, samples) {
        match compute_beta(ruling, s) {
            Ok(b) => betas.push(b.beta),
            Err(Error::ZeroRuling(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if betas.is_empty() {
        return Err(Error::ZeroRuling(span.0));
    }
    if betas.iter().all(|b| b.abs() <= tol) {
        return Ok((ruling.clone(), BetaClass::Zero));
    }
    let positive = betas.iter().all(|&b| b > tol);
    let negative = betas.iter().all(|&b| b < -tol);
    if !(positive || negative) {
        return Err(Error::MixedBeta);
    }
    if betas.iter().all(|b| (b - 0.5).abs() <= 1e-12) {
        return Ok((ruling.clone(), BetaClass::Half));
    }
    let (r0, r1) = (ruling.clone(), ruling.clone());
    let factor = Analytic::new(move |s| 0.5 / raw_beta(&r0, s).0)
        .with_d1(move |s| {
            let (beta, dbeta) = raw_beta(&r1, s);
            -0.5 * dbeta / (beta * beta)
        })
        .shared();
    Ok((ruling.scaled(factor), BetaClass::Half))
}

/// `beta = -(B~ x B~').B~ / |B~|^2` and its derivative, without the null check.
fn raw_beta(ruling: &Ruling, s: f64) -> (f64, f64) {
    let (b, db, ddb) = (ruling.value(s), ruling.d1(s), ruling.d2(s));
    let n2 = b.euclid_norm_sq();
    let x = cross(b, db);
    let num = x.euclid_dot(b);
    let dnum = cross(b, ddb).euclid_dot(b) + x.euclid_dot(db);
    let dn2 = 2.0 * b.euclid_dot(db);
    (-num / n2, -(dnum * n2 - num * dn2) / (n2 * n2))
}

/// `phi(s) B(s)` with product-rule derivatives.
pub struct Scaled {
    pub inner: FrameCurve,
    pub factor: ScalarCurve,
}

impl Curve<FrameVector> for Scaled {
    fn value(&self, s: f64) -> FrameVector {
        self.inner.value(s) * self.factor.value(s)
    }
    fn d1(&self, s: f64) -> FrameVector {
        self.inner.value(s) * self.factor.d1(s) + self.inner.d1(s) * self.factor.value(s)
    }
    fn d2(&self, s: f64) -> FrameVector {
        self.inner.value(s) * self.factor.d2(s) + self.inner.d1(s) * (2.0 * self.factor.d1(s)) + self.inner.d2(s) * self.factor.value(s)
    }
}

/// The reflection `v3 -> -v3` applied to a curve.
pub struct Flip3(pub FrameCurve);

impl Curve<FrameVector> for Flip3 {
    fn value(&self, s: f64) -> FrameVector {
        self.0.value(s).flip3()
    }
    fn d1(&self, s: f64) -> FrameVector {
        self.0.d1(s).flip3()
    }
    fn d2(&self, s: f64) -> FrameVector {
        self.0.d2(s).flip3()
    }
}

/// A frame curve scaled by a function: `alpha(s) V(s)`.
pub fn times(alpha: ScalarCurve, v: FrameCurve) -> FrameCurve {
    Arc::new(Scaled { inner: v, factor: alpha })
}

/// Maximum of `|g(A,A)|` over sample points, for checking that a velocity is null.
pub fn max_null_defect(v: &dyn Curve<FrameVector>, span: (f64, f64), samples: usize) -> f64 {
    sample_points(span, samples).map(|s| metric(v.value(s), v.value(s)).abs()).fold(0.0, f64::max)
}

/// Second derivative check helper used by constructions: `B''` by differences of `B'`.
pub fn fd_second(v: &dyn Curve<FrameVector>, s: f64) -> FrameVector {
    fd_d2(|x| v.value(x), s, 5e-3)
}
