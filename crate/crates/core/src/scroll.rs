//! Null scrolls `f(s,t) = gamma(s) * exp(t B~(s))`: evaluation, fundamental forms,
//! minimality, null charts, support function and the Abresch-Rosenberg differential.

use crate::curve::ScalarCurve;
use crate::error::{Error, Result};
use crate::nil3_core::{connection, cross, group_mul, lie_exp, metric, FrameVector, Nil3Point, E3};
use crate::nullcurve::{compute_beta, sample_points, NullCurve, Ruling};
use crate::paracomplex::ParaComplex;

#[derive(Clone)]
pub struct NullScroll {
    pub base: NullCurve,
    pub ruling: Ruling,
    /// First curvature of the generating frame, for scrolls built from curvature data.
    pub k1: Option<ScalarCurve>,
}

/// First and second fundamental data at one `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalData {
    pub g11: f64,
    pub g12: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub mean_curvature: f64,
    /// `N = -(f_s x f_t) / g12`.
    pub normal: FrameVector,
    /// `ln |2 g12|`.
    pub u: f64,
    /// `g(f_s, E3)`.
    pub d3: f64,
}

/// Frame components of the first and second partial derivatives at `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub fs: FrameVector,
    pub ft: FrameVector,
    pub nabla_ss: FrameVector,
    pub nabla_st: FrameVector,
    pub nabla_tt: FrameVector,
}

/// `B2 B1' - B1 B2'`.
fn v_term(b: FrameVector, db: FrameVector) -> f64 {
    b.v2 * db.v1 - b.v1 * db.v2
}

/// `A1 B2 - A2 B1`.
fn w_term(a: FrameVector, b: FrameVector) -> f64 {
    a.v1 * b.v2 - a.v2 * b.v1
}

impl NullScroll {
    pub fn new(base: NullCurve, ruling: Ruling) -> Self {
        NullScroll { base, ruling, k1: None }
    }

    pub fn with_k1(mut self, k1: ScalarCurve) -> Self {
        self.k1 = Some(k1);
        self
    }

    pub fn eval(&self, s: f64, t: f64) -> Nil3Point {
        group_mul(self.base.at(s), lie_exp(self.ruling.value(s) * t))
    }

    pub fn velocity(&self, s: f64) -> FrameVector {
        self.base.velocity.value(s)
    }

    /// `(f_s, f_t)` in frame components.
    pub fn scroll_partials(&self, s: f64, t: f64) -> (FrameVector, FrameVector) {
        let a = self.velocity(s);
        let b = self.ruling.value(s);
        let db = self.ruling.d1(s);
        (Self::fs_from(a, b, db, t), b)
    }

    fn fs_from(a: FrameVector, b: FrameVector, db: FrameVector, t: f64) -> FrameVector {
        let d3 = a.v3 + t * (db.v3 + w_term(a, b)) + 0.5 * t * t * v_term(b, db);
        FrameVector::new(a.v1 + t * db.v1, a.v2 + t * db.v2, d3)
    }

    /// Closed-form partials and covariant second derivatives.
    pub fn partials(&self, s: f64, t: f64) -> Partials {
        let a = self.velocity(s);
        let da = self.base.velocity.d1(s);
        let b = self.ruling.value(s);
        let db = self.ruling.d1(s);
        let ddb = self.ruling.d2(s);
        let fs = Self::fs_from(a, b, db, t);
        let ft = b;
        let dd3 = da.v3 + t * (ddb.v3 + w_term(da, b) + w_term(a, db)) + 0.5 * t * t * (b.v2 * ddb.v1 - b.v1 * ddb.v2);
        let dfs = FrameVector::new(da.v1 + t * ddb.v1, da.v2 + t * ddb.v2, dd3);
        Partials { fs, ft, nabla_ss: dfs + connection(fs, fs), nabla_st: db + connection(fs, ft), nabla_tt: connection(ft, ft) }
    }

    /// Fundamental data from the closed-form partials.
    pub fn fundamental_data(&self, s: f64, t: f64) -> Result<FundamentalData> {
        let p = self.partials(s, t);
        let g11 = metric(p.fs, p.fs);
        let g12 = metric(p.fs, p.ft);
        if g12 == 0.0 || !g12.is_finite() {
            return Err(Error::DegeneratePoint(g12));
        }
        let normal = cross(p.fs, p.ft) * (-1.0 / g12);
        let h11 = metric(p.nabla_ss, normal);
        let h12 = metric(p.nabla_st, normal);
        let h22 = metric(p.nabla_tt, normal);
        Ok(FundamentalData {
            g11,
            g12,
            h11,
            h12,
            h22,
            mean_curvature: -(g11 * h22 - 2.0 * g12 * h12) / (2.0 * g12 * g12),
            normal,
            u: (2.0 * g12).abs().ln(),
            d3: p.fs.v3,
        })
    }

    /// Coefficients in `t` of `g11`, `g12` and `g(nabla_s f_t, f_s x f_t)`.
    pub fn polynomials(&self, s: f64) -> Polynomials {
        let a = self.velocity(s);
        let bt = self.ruling.value(s);
        let db = self.ruling.d1(s);
        let binduced = bt.flip3();
        let (w, v) = (w_term(a, bt), v_term(bt, db));
        let (b1, b2, b3) = (bt.v1, bt.v2, bt.v3);
        let (db1, db2, db3) = (db.v1, db.v2, db.v3);
        let b3sq = b3 * b3;
        let gab = metric(a, bt);
        Polynomials {
            g11: [
                0.0,
                2.0 * metric(a, db) + 2.0 * w * a.v3,
                metric(db, db) + 2.0 * w * db3 + w * w + v * a.v3,
                v * (db3 + w),
                0.25 * v * v,
            ],
            g12: [gab, w * b3, 0.5 * v * b3],
            p: [
                metric(a, cross(bt, db)) + 0.5 * gab * metric(a, binduced),
                -w * (a.v3 * b3sq + v) + 0.5 * gab * (-b1 * db1 + b2 * db2 - b3 * db3),
                -0.5 * v * (a.v3 * b3sq + v) - w * db3 * b3sq - 0.5 * w * w * b3sq,
                -0.5 * w * v * b3sq - 0.5 * v * db3 * b3sq,
                // the squared V here is what makes g11 B3^2 + 2P cancel at order t^4
                -0.125 * v * v * b3sq,
            ],
            b3sq,
        }
    }

    /// Mean curvature from the polynomial coefficients: `H = -(g11 B3^2 + 2P) / (2 g12^2)`.
    pub fn mean_curvature_polynomial(&self, s: f64, t: f64) -> Result<f64> {
        let poly = self.polynomials(s);
        let g11 = horner(&poly.g11, t);
        let g12 = horner(&poly.g12, t);
        let p = horner(&poly.p, t);
        if g12 == 0.0 {
            return Err(Error::DegeneratePoint(g12));
        }
        Ok(-(g11 * poly.b3sq + 2.0 * p) / (2.0 * g12 * g12))
    }

    /// `g(N, E3)` with `N = -(f_s x f_t)/g12`; identically zero on Hopf cylinders.
    pub fn vertical_component(&self, s: f64, t: f64) -> Result<f64> {
        Ok(metric(self.fundamental_data(s, t)?.normal, E3))
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * t + k)
}

/// Polynomial coefficients (lowest order first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polynomials {
    pub g11: [f64; 5],
    pub g12: [f64; 3],
    /// `g(nabla_s f_t, f_s x f_t)`.
    pub p: [f64; 5],
    pub b3sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MinimalityClass {
    InnerZero,
    TwoBeta,
    NotMinimal,
}

/// Classifies a scroll by `g(A, B~) = 0` or `g(A, B) = 2 beta` on sample points.
/// `TwoBeta` is reported when both hold.
pub fn minimality_class(f: &NullScroll, span: (f64, f64), samples: usize) -> MinimalityClass {
    let tol = 1e-9;
    let mut inner_zero = true;
    let mut two_beta = true;
    for s in sample_points(span, samples) {
        let a = f.velocity(s);
        let bt = f.ruling.value(s);
        if metric(a, bt).abs() > tol {
            inner_zero = false;
        }
        match compute_beta(&f.ruling, s) {
            Ok(b) => {
                if (metric(a, bt.flip3()) - 2.0 * b.beta).abs() > tol {
                    two_beta = false;
                }
            }
            Err(Error::ZeroRuling(_)) => {}
            Err(_) => two_beta = false,
        }
    }
    if two_beta {
        MinimalityClass::TwoBeta
    } else if inner_zero {
        MinimalityClass::InnerZero
    } else {
        MinimalityClass::NotMinimal
    }
}

/// Null chart `s = 8 p(x)`, `t = 1/(p(x) + q(y))`.
#[derive(Clone)]
pub struct NullChart {
    pub p: ScalarCurve,
    pub q: ScalarCurve,
}

/// Chart quantities at one `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub s: f64,
    pub t: f64,
    pub s_x: f64,
    pub t_x: f64,
    pub t_y: f64,
    pub s_xx: f64,
    pub t_xx: f64,
    pub t_yy: f64,
    pub w: f64,
}

impl NullChart {
    pub fn new(p: ScalarCurve, q: ScalarCurve) -> Self {
        NullChart { p, q }
    }

    /// Chart values, or `ChartInvalid` where `p + q = 0` or `p_x q_y >= 0`.
    pub fn at(&self, x: f64, y: f64) -> Result<ChartPoint> {
        let (p, px, pxx) = (self.p.value(x), self.p.d1(x), self.p.d2(x));
        let (q, qy, qyy) = (self.q.value(y), self.q.d1(y), self.q.d2(y));
        if ![p, px, pxx, q, qy, qyy].iter().all(|v| v.is_finite()) {
            return Err(Error::ChartInvalid(format!("p or q is not finite at ({x}, {y})")));
        }
        let sum = p + q;
        if !(sum.abs() > 1e-12) {
            return Err(Error::ChartInvalid(format!("p + q = {sum:e} at ({x}, {y})")));
        }
        if !(px * qy < 0.0) {
            return Err(Error::ChartInvalid(format!("p_x q_y = {:e} is not negative at ({x}, {y})", px * qy)));
        }
        let inv = 1.0 / sum;
        let inv2 = inv * inv;
        Ok(ChartPoint {
            s: 8.0 * p,
            t: inv,
            s_x: 8.0 * px,
            t_x: -px * inv2,
            t_y: -qy * inv2,
            s_xx: 8.0 * pxx,
            t_xx: -pxx * inv2 + 2.0 * px * px * inv2 * inv,
            t_yy: -qyy * inv2 + 2.0 * qy * qy * inv2 * inv,
            w: (-px * qy * inv2).ln(),
        })
    }

    pub fn w(&self, x: f64, y: f64) -> Result<f64> {
        self.at(x, y).map(|c| c.w)
    }

    pub fn to_st(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.at(x, y).map(|c| (c.s, c.t))
    }
}

/// `(s, t)` at `(x, y)` together with the conformality residual
/// `max(|g11 s_x + 2 g12 t_x|, |s_y|)`; `s_y` vanishes by construction.
pub fn null_coordinates(f: &NullScroll, chart: &NullChart, x: f64, y: f64) -> Result<(f64, f64, f64)> {
    let c = chart.at(x, y)?;
    let d = f.fundamental_data(c.s, c.t)?;
    Ok((c.s, c.t, (d.g11 * c.s_x + 2.0 * d.g12 * c.t_x).abs()))
}

/// Chart partials `f_x = s_x f_s + t_x f_t`, `f_y = t_y f_t` in frame components.
pub fn chart_partials(f: &NullScroll, c: &ChartPoint) -> (FrameVector, FrameVector) {
    let (fs, ft) = f.scroll_partials(c.s, c.t);
    (fs * c.s_x + ft * c.t_x, ft * c.t_y)
}

/// `f_z = sum phi^j E_j` with `d/dz = l d/dx + lbar d/dy`.
pub fn phi_triple(fx: FrameVector, fy: FrameVector) -> [ParaComplex; 3] {
    [0, 1, 2].map(|j| ParaComplex::L * fx[j] + ParaComplex::LBAR * fy[j])
}

/// Support function: the closed form `sqrt2 * eps * |s_x t_y|^{1/2}` and the
/// definitional `-e^{u/2} g(N, E3)` in the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportValue {
    pub closed: f64,
    pub definitional: f64,
    /// `sgn g(f_s x f_t, E3)`.
    pub epsilon: f64,
    /// `w` of the chart; `|h| = 4 e^{w/2}` for minimal framed scrolls.
    pub w: f64,
}

pub fn support_function(f: &NullScroll, chart: &NullChart, x: f64, y: f64) -> Result<SupportValue> {
    let c = chart.at(x, y)?;
    let (fs, ft) = f.scroll_partials(c.s, c.t);
    let epsilon = metric(cross(fs, ft), E3).signum();
    let closed = std::f64::consts::SQRT_2 * epsilon * (c.s_x * c.t_y).abs().sqrt();
    let (fx, fy) = chart_partials(f, &c);
    let (u, n) = chart_normal(fx, fy)?;
    Ok(SupportValue { closed, definitional: -(0.5 * u).exp() * metric(n, E3), epsilon, w: c.w })
}

/// `e^u = 2 g(f_x, f_y)` and `N = -(f_x x f_y) / |f_x x f_y|`.
pub fn chart_normal(fx: FrameVector, fy: FrameVector) -> Result<(f64, FrameVector)> {
    let m = 2.0 * metric(fx, fy);
    let n = cross(fx, fy);
    let nn = metric(n, n);
    if !(m > 0.0) || !(nn > 0.0) {
        return Err(Error::ChartInvalid(format!("chart is not conformal-timelike here (2g(f_x,f_y) = {m:e})")));
    }
    Ok((m.ln(), n * (-1.0 / nn.sqrt())))
}

/// The Abresch-Rosenberg coefficient by three routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArDifferential {
    /// `(l/4)(-s_x^2 h11 - s_x^2 D3^2 - 2 s_x t_x D3 B3)`, from the scroll's fundamental data.
    pub closed: ParaComplex,
    /// `(l/4) s_x^2 k1`, when the scroll carries its frame curvature.
    pub from_curvature: Option<ParaComplex>,
    /// `-(i'/4) Q~ - (phi^3)^2 / 4` with `Q~` from finite differences in the chart.
    pub definitional: ParaComplex,
}

pub fn abresch_rosenberg(f: &NullScroll, chart: &NullChart, x: f64, y: f64) -> Result<ArDifferential> {
    let c = chart.at(x, y)?;
    let d = f.fundamental_data(c.s, c.t)?;
    let b3 = f.ruling.value(c.s).v3;
    let real = -c.s_x * c.s_x * d.h11 - c.s_x * c.s_x * d.d3 * d.d3 - 2.0 * c.s_x * c.t_x * d.d3 * b3;
    let closed = ParaComplex::L * (0.25 * real);
    let from_curvature = f.k1.as_ref().map(|k1| ParaComplex::L * (0.25 * c.s_x * c.s_x * k1.value(c.s)));
    let definitional = definitional_ar(|x, y| chart.to_st(x, y).map(|(s, t)| f.eval(s, t)), x, y)?;
    Ok(ArDifferential { closed, from_curvature, definitional })
}

/// `-(i'/4) Q~ - (phi^3)^2/4` for a minimal surface given in null coordinates,
/// with every derivative taken by central differences.
pub fn definitional_ar<F>(map: F, x: f64, y: f64) -> Result<ParaComplex>
where
    F: Fn(f64, f64) -> Result<Nil3Point>,
{
    let j = crate::verify::fd_jet(&map, x, y, crate::tolerances::FD_STEP_FIRST, crate::tolerances::FD_STEP_SECOND)?;
    ar_from_jet(&j)
}

/// `-(i'/4) Q~ - (phi^3)^2/4` from first and covariant second partials in null coordinates.
pub fn ar_from_jet(j: &crate::verify::Jet) -> Result<ParaComplex> {
    let (_, n) = chart_normal(j.fs, j.ft)?;
    let q_tilde = ParaComplex::L * metric(j.nabla_ss, n) + ParaComplex::LBAR * metric(j.nabla_tt, n);
    let phi3 = ParaComplex::L * j.fs.v3 + ParaComplex::LBAR * j.ft.v3;
    Ok((ParaComplex::I * q_tilde).scale(-0.25) - (phi3 * phi3).scale(0.25))
}

/// `1/2 w_xy + e^w`, the Liouville residual in null coordinates, with a cross stencil of
/// step `h`.
pub fn liouville_residual(chart: &NullChart, x: f64, y: f64, h: f64) -> Result<f64> {
    let w = |a: f64, b: f64| chart.w(a, b);
    let wxy = (w(x + h, y + h)? - w(x + h, y - h)? - w(x - h, y + h)? + w(x - h, y - h)?) / (4.0 * h * h);
    Ok(0.5 * wxy + w(x, y)?.exp())
}

/// The same residual written as `(1/8)(w_XX - w_YY) + e^w` with `X = (x+y)/2`, `Y = (x-y)/2`.
pub fn liouville_residual_rotated(chart: &NullChart, x: f64, y: f64, h: f64) -> Result<f64> {
    let w = |xx: f64, yy: f64| chart.w(xx + yy, xx - yy);
    let (xx, yy) = (0.5 * (x + y), 0.5 * (x - y));
    let w0 = w(xx, yy)?;
    let wxx = (w(xx + h, yy)? - 2.0 * w0 + w(xx - h, yy)?) / (h * h);
    let wyy = (w(xx, yy + h)? - 2.0 * w0 + w(xx, yy - h)?) / (h * h);
    Ok(0.125 * (wxx - wyy) + w0.exp())
}
