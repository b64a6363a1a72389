//! One-parameter functions: analytic closures, sampled splines and Hermite interpolants.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::minkowski::MinkVector;
use crate::nil3_core::{FrameVector, Nil3Point};

/// Values that can be interpolated and differenced.
pub trait Linear: Copy + Send + Sync + 'static {
    fn zero() -> Self;
    fn axpy(self, k: f64, o: Self) -> Self;
    fn scaled(self, k: f64) -> Self {
        Self::zero().axpy(k, self)
    }
}

impl Linear for f64 {
    fn zero() -> Self {
        0.0
    }
    fn axpy(self, k: f64, o: Self) -> Self {
        self + k * o
    }
}

impl Linear for FrameVector {
    fn zero() -> Self {
        FrameVector::ZERO
    }
    fn axpy(self, k: f64, o: Self) -> Self {
        self + o * k
    }
}

impl Linear for Nil3Point {
    fn zero() -> Self {
        Nil3Point::IDENTITY
    }
    fn axpy(self, k: f64, o: Self) -> Self {
        Nil3Point::new(self.x1 + k * o.x1, self.x2 + k * o.x2, self.x3 + k * o.x3)
    }
}

impl Linear for MinkVector {
    fn zero() -> Self {
        MinkVector::ZERO
    }
    fn axpy(self, k: f64, o: Self) -> Self {
        self + o * k
    }
}

const D1_STEP: f64 = 1e-3;
const D2_STEP: f64 = 5e-3;

/// Fourth-order central first derivative.
pub fn fd_d1<T: Linear>(f: impl Fn(f64) -> T, s: f64, h: f64) -> T {
    let w = 1.0 / (12.0 * h);
    T::zero().axpy(-w, f(s + 2.0 * h)).axpy(8.0 * w, f(s + h)).axpy(-8.0 * w, f(s - h)).axpy(w, f(s - 2.0 * h))
}

/// Fourth-order central second derivative.
pub fn fd_d2<T: Linear>(f: impl Fn(f64) -> T, s: f64, h: f64) -> T {
    let w = 1.0 / (12.0 * h * h);
    T::zero().axpy(-w, f(s + 2.0 * h)).axpy(16.0 * w, f(s + h)).axpy(-30.0 * w, f(s)).axpy(16.0 * w, f(s - h)).axpy(-w, f(s - 2.0 * h))
}

/// A function of one real parameter with first and second derivatives.
///
/// The default derivatives are fourth-order central differences.
pub trait Curve<T: Linear>: Send + Sync {
    fn value(&self, s: f64) -> T;

    fn d1(&self, s: f64) -> T {
        fd_d1(|x| self.value(x), s, D1_STEP)
    }

    fn d2(&self, s: f64) -> T {
        fd_d2(|x| self.value(x), s, D2_STEP)
    }
}

pub type ScalarCurve = Arc<dyn Curve<f64>>;
pub type FrameCurve = Arc<dyn Curve<FrameVector>>;

type Func<T> = Arc<dyn Fn(f64) -> T + Send + Sync>;

/// A closed-form function with optional analytic derivatives.
#[derive(Clone)]
pub struct Analytic<T> {
    f: Func<T>,
    df: Option<Func<T>>,
    ddf: Option<Func<T>>,
}

impl<T: Linear> Analytic<T> {
    pub fn new(f: impl Fn(f64) -> T + Send + Sync + 'static) -> Self {
        Analytic { f: Arc::new(f), df: None, ddf: None }
    }

    pub fn with_d1(mut self, df: impl Fn(f64) -> T + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn with_d2(mut self, ddf: impl Fn(f64) -> T + Send + Sync + 'static) -> Self {
        self.ddf = Some(Arc::new(ddf));
        self
    }

    pub fn shared(self) -> Arc<dyn Curve<T>> {
        Arc::new(self)
    }
}

impl<T: Linear> Curve<T> for Analytic<T> {
    fn value(&self, s: f64) -> T {
        (self.f)(s)
    }

    fn d1(&self, s: f64) -> T {
        match &self.df {
            Some(df) => df(s),
            None => fd_d1(|x| (self.f)(x), s, D1_STEP),
        }
    }

    fn d2(&self, s: f64) -> T {
        match (&self.ddf, &self.df) {
            (Some(ddf), _) => ddf(s),
            (None, Some(df)) => fd_d1(|x| df(x), s, D1_STEP),
            (None, None) => fd_d2(|x| (self.f)(x), s, D2_STEP),
        }
    }
}

pub fn constant(c: f64) -> ScalarCurve {
    Analytic::new(move |_| c).with_d1(|_| 0.0).with_d2(|_| 0.0).shared()
}

/// Natural-order lookup of the interval containing `s`, clamped to the ends.
fn interval(knots: &[f64], s: f64) -> usize {
    let n = knots.len();
    let k = knots.partition_point(|&x| x <= s);
    k.clamp(1, n - 1) - 1
}

fn check_knots(knots: &[f64], needed: usize) -> Result<()> {
    if knots.len() < needed {
        return Err(Error::TooFewPoints { needed, got: knots.len() });
    }
    if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("sample parameters must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Cubic spline with not-a-knot end conditions.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn not_a_knot(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_knots(&knots, 4)?;
        if values.len() != knots.len() {
            return Err(Error::Invalid("knot and value counts differ".into()));
        }
        let n = knots.len();
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (values[i + 1] - values[i]) / h[i]).collect();

        // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} follow from third-derivative continuity
        // at the first and last interior knots.
        let m = n - 2;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for r in 0..m {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = 6.0 * (d[i] - d[i - 1]);
        }
        // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        sup[0] -= h0 * h0 / h1;
        // M_{n-1} = ((hb + ha) M_{n-2} - hb M_{n-3}) / ha with ha = h[n-3], hb = h[n-2]
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[m - 1] += hb * (ha + hb) / ha;
        sub[m - 1] -= hb * hb / ha;

        let inner = if m == 2 {
            // sup[0] and sub[1] already carry both end conditions
            let det = diag[0] * diag[1] - sup[0] * sub[1];
            vec![(rhs[0] * diag[1] - sup[0] * rhs[1]) / det, (diag[0] * rhs[1] - sub[1] * rhs[0]) / det]
        } else {
            thomas(&sub, &diag, &sup, &rhs)
        };

        let mut second = vec![0.0; n];
        second[1..n - 1].copy_from_slice(&inner);
        second[0] = ((h0 + h1) * second[1] - h0 * second[2]) / h1;
        second[n - 1] = ((ha + hb) * second[n - 2] - hb * second[n - 3]) / ha;
        Ok(CubicSpline { knots, values, second })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    fn eval(&self, s: f64, order: usize) -> f64 {
        let i = interval(&self.knots, s);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - s) / h;
        let b = (s - self.knots[i]) / h;
        let (y0, y1, m0, m1) = (self.values[i], self.values[i + 1], self.second[i], self.second[i + 1]);
        match order {
            0 => a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0,
            1 => (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0,
            _ => a * m0 + b * m1,
        }
    }
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

impl Curve<f64> for CubicSpline {
    fn value(&self, s: f64) -> f64 {
        self.eval(s, 0)
    }
    fn d1(&self, s: f64) -> f64 {
        self.eval(s, 1)
    }
    fn d2(&self, s: f64) -> f64 {
        self.eval(s, 2)
    }
}

/// Componentwise not-a-knot spline of frame-vector samples.
#[derive(Debug, Clone)]
pub struct FrameSpline {
    parts: [CubicSpline; 3],
}

impl FrameSpline {
    pub fn not_a_knot(knots: Vec<f64>, values: &[FrameVector]) -> Result<Self> {
        let comp = |i: usize| values.iter().map(|v| v[i]).collect::<Vec<_>>();
        Ok(FrameSpline {
            parts: [
                CubicSpline::not_a_knot(knots.clone(), comp(0))?,
                CubicSpline::not_a_knot(knots.clone(), comp(1))?,
                CubicSpline::not_a_knot(knots, comp(2))?,
            ],
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.parts[0].domain()
    }
}

impl Curve<FrameVector> for FrameSpline {
    fn value(&self, s: f64) -> FrameVector {
        FrameVector::new(self.parts[0].value(s), self.parts[1].value(s), self.parts[2].value(s))
    }
    fn d1(&self, s: f64) -> FrameVector {
        FrameVector::new(self.parts[0].d1(s), self.parts[1].d1(s), self.parts[2].d1(s))
    }
    fn d2(&self, s: f64) -> FrameVector {
        FrameVector::new(self.parts[0].d2(s), self.parts[1].d2(s), self.parts[2].d2(s))
    }
}

/// Piecewise quintic Hermite interpolant through values, first and second derivatives.
#[derive(Debug, Clone)]
pub struct Hermite<T> {
    knots: Vec<f64>,
    y: Vec<T>,
    dy: Vec<T>,
    ddy: Vec<T>,
}

impl<T: Linear> Hermite<T> {
    pub fn new(knots: Vec<f64>, y: Vec<T>, dy: Vec<T>, ddy: Vec<T>) -> Result<Self> {
        check_knots(&knots, 2)?;
        if y.len() != knots.len() || dy.len() != knots.len() || ddy.len() != knots.len() {
            return Err(Error::Invalid("Hermite data lengths differ".into()));
        }
        Ok(Hermite { knots, y, dy, ddy })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn node_values(&self) -> &[T] {
        &self.y
    }

    fn eval(&self, s: f64, order: usize) -> T {
        let i = interval(&self.knots, s);
        let h = self.knots[i + 1] - self.knots[i];
        let u = (s - self.knots[i]) / h;
        let b = quintic_basis(u, order);
        let scale = h.powi(-(order as i32));
        T::zero()
            .axpy(b[0] * scale, self.y[i])
            .axpy(b[1] * h * scale, self.dy[i])
            .axpy(b[2] * h * h * scale, self.ddy[i])
            .axpy(b[3] * h * h * scale, self.ddy[i + 1])
            .axpy(b[4] * h * scale, self.dy[i + 1])
            .axpy(b[5] * scale, self.y[i + 1])
    }
}

/// Quintic Hermite basis (and its u-derivatives) ordered as
/// `[y0, h*y0', h^2*y0'', h^2*y1'', h*y1', y1]`.
fn quintic_basis(u: f64, order: usize) -> [f64; 6] {
    let (u2, u3, u4, u5) = (u * u, u * u * u, u * u * u * u, u * u * u * u * u);
    match order {
        0 => [
            1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5,
            u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5,
            0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5,
            0.5 * u3 - u4 + 0.5 * u5,
            -4.0 * u3 + 7.0 * u4 - 3.0 * u5,
            10.0 * u3 - 15.0 * u4 + 6.0 * u5,
        ],
        1 => [
            -30.0 * u2 + 60.0 * u3 - 30.0 * u4,
            1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4,
            u - 4.5 * u2 + 6.0 * u3 - 2.5 * u4,
            1.5 * u2 - 4.0 * u3 + 2.5 * u4,
            -12.0 * u2 + 28.0 * u3 - 15.0 * u4,
            30.0 * u2 - 60.0 * u3 + 30.0 * u4,
        ],
        _ => [
            -60.0 * u + 180.0 * u2 - 120.0 * u3,
            -36.0 * u + 96.0 * u2 - 60.0 * u3,
            1.0 - 9.0 * u + 18.0 * u2 - 10.0 * u3,
            3.0 * u - 12.0 * u2 + 10.0 * u3,
            -24.0 * u + 84.0 * u2 - 60.0 * u3,
            60.0 * u - 180.0 * u2 + 120.0 * u3,
        ],
    }
}

impl<T: Linear> Curve<T> for Hermite<T> {
    fn value(&self, s: f64) -> T {
        self.eval(s, 0)
    }
    fn d1(&self, s: f64) -> T {
        self.eval(s, 1)
    }
    fn d2(&self, s: f64) -> T {
        self.eval(s, 2)
    }
}

/// Parameter nodes covering `[a, b]` with spacing `h` measured from `origin`,
/// with the end nodes placed exactly at `a` and `b`.
pub fn nodes(a: f64, b: f64, origin: f64, h: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = ((a - origin) / h).ceil() as i64;
    if origin + k as f64 * h - a < 1e-9 * h {
        k += 1;
    }
    out.push(a);
    loop {
        let s = origin + k as f64 * h;
        if s >= b - 1e-9 * h {
            break;
        }
        out.push(s);
        k += 1;
    }
    out.push(b);
    out
}
