//! Minkowski space with signature `(-, +, +)`: null Frenet frames, B-scrolls and
//! finite-difference surface invariants.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Hermite, ScalarCurve};
use crate::error::{Error, Result};
use crate::ode::{self, BaseCurve, FrameRows};
use crate::paracomplex::ParaComplex;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl MinkVector {
    pub const ZERO: MinkVector = MinkVector { t: 0.0, x: 0.0, y: 0.0 };

    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        MinkVector { t, x, y }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.t, self.x, self.y]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkVector::new(a[0], a[1], a[2])
    }

    pub fn max_abs_diff(self, o: Self) -> f64 {
        (self.t - o.t).abs().max((self.x - o.x).abs()).max((self.y - o.y).abs())
    }

    /// Row-vector product `v M`.
    pub fn times(self, m: &Matrix3<f64>) -> Self {
        let v = nalgebra::RowVector3::new(self.t, self.x, self.y) * m;
        MinkVector::new(v[0], v[1], v[2])
    }
}

impl Add for MinkVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        MinkVector::new(self.t + o.t, self.x + o.x, self.y + o.y)
    }
}

impl Sub for MinkVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        MinkVector::new(self.t - o.t, self.x - o.x, self.y - o.y)
    }
}

impl Neg for MinkVector {
    type Output = Self;
    fn neg(self) -> Self {
        MinkVector::new(-self.t, -self.x, -self.y)
    }
}

impl Mul<f64> for MinkVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        MinkVector::new(self.t * k, self.x * k, self.y * k)
    }
}

impl Mul<MinkVector> for f64 {
    type Output = MinkVector;
    fn mul(self, v: MinkVector) -> MinkVector {
        v * self
    }
}

pub fn inner(v: MinkVector, w: MinkVector) -> f64 {
    -v.t * w.t + v.x * w.x + v.y * w.y
}

/// Lorentzian cross product: `<v x w, z> = det[v | w | z]`.
pub fn cross(v: MinkVector, w: MinkVector) -> MinkVector {
    MinkVector::new(-(v.x * w.y - v.y * w.x), v.y * w.t - v.t * w.y, v.t * w.x - v.x * w.t)
}

pub fn eta() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, 1.0))
}

/// `M^T eta M = eta` within 1e-10.
pub fn is_lorentz(m: &Matrix3<f64>) -> bool {
    let d = m.transpose() * eta() * m - eta();
    d.iter().all(|x| x.abs() <= 1e-10)
}

pub fn is_special_lorentz(m: &Matrix3<f64>) -> bool {
    is_lorentz(m) && (m.determinant() - 1.0).abs() <= 1e-10
}

/// Boost in the `(t, x)` plane (`axis = 1`) or `(t, y)` plane (`axis = 2`).
pub fn boost(axis: usize, rapidity: f64) -> Matrix3<f64> {
    let (c, s) = (rapidity.cosh(), rapidity.sinh());
    let mut m = Matrix3::identity();
    m[(0, 0)] = c;
    m[(0, axis)] = s;
    m[(axis, 0)] = s;
    m[(axis, axis)] = c;
    m
}

/// Rotation of the spacelike `(x, y)` plane.
pub fn rotation(theta: f64) -> Matrix3<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Null Frenet frame along a null curve, with the curve itself.
#[derive(Clone)]
pub struct MinkNullFrame {
    pub a: Arc<Hermite<MinkVector>>,
    pub b: Arc<Hermite<MinkVector>>,
    pub c: Arc<Hermite<MinkVector>>,
    pub gamma: Arc<Hermite<MinkVector>>,
    pub k1: ScalarCurve,
    pub k2: ScalarCurve,
    pub gram_drift: f64,
}

fn hermite_rows(sol: &ode::FrameSolution, j: usize) -> Result<Hermite<MinkVector>> {
    Hermite::new(
        sol.knots.clone(),
        sol.rows.iter().map(|r| MinkVector::from_array(r[j])).collect(),
        sol.d1.iter().map(|r| MinkVector::from_array(r[j])).collect(),
        sol.d2.iter().map(|r| MinkVector::from_array(r[j])).collect(),
    )
}

/// Integrates `A' = k1 C, B' = k2 C, C' = -k2 A - k1 B` and `gamma' = A` from `init` at
/// `s = 0`, with `gamma(0) = 0`.
pub fn integrate_mink_frame(k1: ScalarCurve, k2: ScalarCurve, init: [MinkVector; 3], span: (f64, f64), step: f64) -> Result<MinkNullFrame> {
    let rows: FrameRows = init.map(MinkVector::to_array);
    let sol = ode::integrate_frame(&*k1, &*k2, rows, 0.0, span, step, BaseCurve::Flat)?;
    let g = sol.gamma.as_ref().expect("flat base requested");
    let gamma = Hermite::new(
        sol.knots.clone(),
        g.iter().copied().map(MinkVector::from_array).collect(),
        sol.rows.iter().map(|r| MinkVector::from_array(r[0])).collect(),
        sol.d1.iter().map(|r| MinkVector::from_array(r[0])).collect(),
    )?;
    Ok(MinkNullFrame {
        a: Arc::new(hermite_rows(&sol, 0)?),
        b: Arc::new(hermite_rows(&sol, 1)?),
        c: Arc::new(hermite_rows(&sol, 2)?),
        gamma: Arc::new(gamma),
        k1,
        k2,
        gram_drift: sol.max_gram_drift(),
    })
}

/// The oriented standard null frame (`C = A x B`).
pub fn standard_frame() -> [MinkVector; 3] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [MinkVector::new(-r, r, 0.0), MinkVector::new(r, r, 0.0), MinkVector::new(0.0, 0.0, -1.0)]
}

impl MinkNullFrame {
    pub fn domain(&self) -> (f64, f64) {
        self.a.domain()
    }

    /// Largest Gram defect of the interpolated frame at the given parameters.
    pub fn gram_defect_at(&self, s: f64) -> f64 {
        ode::gram_defect(&[self.a.value(s).to_array(), self.b.value(s).to_array(), self.c.value(s).to_array()])
    }
}

/// B-scroll `Phi(s, t) = gamma(s) + t B(s)`.
pub fn bscroll_eval(frame: &MinkNullFrame, s: f64, t: f64) -> MinkVector {
    frame.gamma.value(s) + frame.b.value(s) * t
}

/// Finite-difference invariants of a timelike surface given in null coordinates `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceData {
    /// `e^u = 2 <Phi_x, Phi_y>`.
    pub u: f64,
    pub mean_curvature: f64,
    /// `Q = l <Phi_xx, N> + lbar <Phi_yy, N>`.
    pub hopf: ParaComplex,
    pub normal: MinkVector,
}

/// Surface data with first-derivative step `h1` and second-derivative step `h2`.
pub fn surface_data<F>(phi: F, x: f64, y: f64, h1: f64, h2: f64) -> Result<SurfaceData>
where
    F: Fn(f64, f64) -> MinkVector,
{
    let px = (phi(x + h1, y) - phi(x - h1, y)) * (0.5 / h1);
    let py = (phi(x, y + h1) - phi(x, y - h1)) * (0.5 / h1);
    let p0 = phi(x, y);
    let pxx = (phi(x + h2, y) - p0 * 2.0 + phi(x - h2, y)) * (1.0 / (h2 * h2));
    let pyy = (phi(x, y + h2) - p0 * 2.0 + phi(x, y - h2)) * (1.0 / (h2 * h2));
    let pxy = (phi(x + h2, y + h2) - phi(x + h2, y - h2) - phi(x - h2, y + h2) + phi(x - h2, y - h2)) * (0.25 / (h2 * h2));
    let m = 2.0 * inner(px, py);
    let n = cross(px, py);
    let nn = inner(n, n);
    if !(m > 0.0) || !(nn > 0.0) {
        return Err(Error::DegenerateMetric);
    }
    let normal = -n * (1.0 / nn.sqrt());
    Ok(SurfaceData {
        u: m.ln(),
        mean_curvature: 2.0 * inner(pxy, normal) / m,
        hopf: ParaComplex::L * inner(pxx, normal) + ParaComplex::LBAR * inner(pyy, normal),
        normal,
    })
}

/// Residuals of the Gauss and Codazzi equations at `(x, y)`:
/// `1/2 u_xy + 1/4 H^2 e^u - Q Qbar e^{-u}` and `|Q_zbar - 1/2 H_z e^u|`.
pub fn gauss_codazzi_residual<F>(phi: F, x: f64, y: f64, h: f64) -> Result<(f64, f64)>
where
    F: Fn(f64, f64) -> MinkVector,
{
    let (h1, h2) = (1e-5, 1e-4);
    let d = |a: f64, b: f64| surface_data(&phi, a, b, h1, h2);
    let c = d(x, y)?;
    let (pp, pm, mp, mm) = (d(x + h, y + h)?, d(x + h, y - h)?, d(x - h, y + h)?, d(x - h, y - h)?);
    let u_xy = (pp.u - pm.u - mp.u + mm.u) / (4.0 * h * h);
    let gauss = 0.5 * u_xy + 0.25 * c.mean_curvature.powi(2) * c.u.exp() - c.hopf.norm_sq() * (-c.u).exp();

    let (xp, xm, yp, ym) = (d(x + h, y)?, d(x - h, y)?, d(x, y + h)?, d(x, y - h)?);
    let q_x = (xp.hopf - xm.hopf) / (2.0 * h);
    let q_y = (yp.hopf - ym.hopf) / (2.0 * h);
    let h_x = (xp.mean_curvature - xm.mean_curvature) / (2.0 * h);
    let h_y = (yp.mean_curvature - ym.mean_curvature) / (2.0 * h);
    let q_zbar = ParaComplex::LBAR * q_x + ParaComplex::L * q_y;
    let h_z = ParaComplex::L * h_x + ParaComplex::LBAR * h_y;
    let codazzi = (q_zbar - h_z.scale(0.5 * c.u.exp())).max_abs_diff(ParaComplex::ZERO);
    Ok((gauss, codazzi))
}
