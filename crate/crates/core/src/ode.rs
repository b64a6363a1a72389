//! Fixed-step RK4 for the null-frame system `A' = k1 C, B' = k2 C, C' = -k2 A - k1 B`.
//!
//! The same system governs null frames in Minkowski space and in Nil3 (frame components),
//! so both modules share this integrator.

use crate::curve::{nodes, Curve};
use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Rows `A`, `B`, `C` of a frame, as plain component triples.
pub type FrameRows = [Vec3; 3];

/// Integrates `y' = f(s, y)` over `knots` starting from `y0` at `knots[origin]`,
/// stepping forward to the last knot and backward to the first.
pub fn rk4_nodes<const N: usize, F>(f: F, y0: [f64; N], knots: &[f64], origin: usize) -> Vec<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = vec![[0.0; N]; knots.len()];
    out[origin] = y0;
    for i in origin..knots.len() - 1 {
        out[i + 1] = rk4_step(&f, knots[i], &out[i], knots[i + 1] - knots[i]);
    }
    for i in (1..=origin).rev() {
        out[i - 1] = rk4_step(&f, knots[i], &out[i], knots[i - 1] - knots[i]);
    }
    out
}

fn rk4_step<const N: usize, F>(f: &F, s: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let shift = |y: &[f64; N], k: &[f64; N], c: f64| {
        let mut o = *y;
        for i in 0..N {
            o[i] += c * k[i];
        }
        o
    };
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, &shift(y, &k1, 0.5 * h));
    let k3 = f(s + 0.5 * h, &shift(y, &k2, 0.5 * h));
    let k4 = f(s + h, &shift(y, &k3, h));
    let mut o = *y;
    for i in 0..N {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Gram matrix entries `<X,Y>` for `eta = diag(-1, 1, 1)`.
pub fn eta(v: &Vec3, w: &Vec3) -> f64 {
    -v[0] * w[0] + v[1] * w[1] + v[2] * w[2]
}

/// Largest deviation of the six pairings from `<A,B> = <C,C> = 1`, others 0.
pub fn gram_defect(rows: &FrameRows) -> f64 {
    let [a, b, c] = rows;
    [eta(a, a).abs(), eta(b, b).abs(), eta(a, c).abs(), eta(b, c).abs(), (eta(a, b) - 1.0).abs(), (eta(c, c) - 1.0).abs()]
        .into_iter()
        .fold(0.0, f64::max)
}

pub fn det3(rows: &FrameRows) -> f64 {
    let [a, b, c] = rows;
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Nodes plus frame values, first and second derivatives at every node.
pub struct FrameSolution {
    pub knots: Vec<f64>,
    pub origin: usize,
    pub rows: Vec<FrameRows>,
    pub d1: Vec<FrameRows>,
    pub d2: Vec<FrameRows>,
    /// Integrated base curve with `gamma(origin) = 0`, when requested.
    pub gamma: Option<Vec<Vec3>>,
}

fn frame_rhs(k1: f64, k2: f64, r: &FrameRows) -> FrameRows {
    let [a, b, c] = r;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[0][i] = k1 * c[i];
        out[1][i] = k2 * c[i];
        out[2][i] = -k2 * a[i] - k1 * b[i];
    }
    out
}

fn frame_rhs_d(k1: f64, k2: f64, dk1: f64, dk2: f64, r: &FrameRows) -> FrameRows {
    let d = frame_rhs(k1, k2, r);
    let [a, b, c] = r;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[0][i] = dk1 * c[i] + k1 * d[2][i];
        out[1][i] = dk2 * c[i] + k2 * d[2][i];
        out[2][i] = -dk2 * a[i] - k2 * d[0][i] - dk1 * b[i] - k1 * d[1][i];
    }
    out
}

/// How to advance the base curve alongside the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseCurve {
    None,
    /// `gamma' = A` (Minkowski space).
    Flat,
}

/// Integrates the frame system from `init` at `origin` across `[span.0, span.1]`.
pub fn integrate_frame(
    k1: &dyn Curve<f64>,
    k2: &dyn Curve<f64>,
    init: FrameRows,
    origin: f64,
    span: (f64, f64),
    step: f64,
    base: BaseCurve,
) -> Result<FrameSolution> {
    if !(step > 0.0) || !(span.0 <= origin && origin <= span.1) || !(span.0 < span.1) {
        return Err(Error::Invalid(format!(
            "frame integration needs span.0 <= origin <= span.1 and step > 0 (span {span:?}, origin {origin}, step {step})"
        )));
    }
    let defect = gram_defect(&init);
    if !(defect <= 1e-10) {
        return Err(Error::BadInitialFrame(defect));
    }
    let knots = nodes(span.0, span.1, origin, step);
    let o = knots.iter().position(|&s| s == origin).expect("origin is a node");
    let pack = |r: &FrameRows, g: &Vec3| {
        let mut y = [0.0; 12];
        for j in 0..3 {
            y[3 * j..3 * j + 3].copy_from_slice(&r[j]);
        }
        y[9..].copy_from_slice(g);
        y
    };
    let unpack = |y: &[f64; 12]| -> (FrameRows, Vec3) {
        let r = [[y[0], y[1], y[2]], [y[3], y[4], y[5]], [y[6], y[7], y[8]]];
        (r, [y[9], y[10], y[11]])
    };
    let rhs = |s: f64, y: &[f64; 12]| {
        let (r, _) = unpack(y);
        let d = frame_rhs(k1.value(s), k2.value(s), &r);
        let g = if base == BaseCurve::Flat { r[0] } else { [0.0; 3] };
        pack(&d, &g)
    };
    let ys = rk4_nodes(rhs, pack(&init, &[0.0; 3]), &knots, o);
    let mut rows = Vec::with_capacity(ys.len());
    let mut gam = Vec::with_capacity(ys.len());
    for y in &ys {
        let (r, g) = unpack(y);
        rows.push(r);
        gam.push(g);
    }
    let d1 = knots.iter().zip(&rows).map(|(&s, r)| frame_rhs(k1.value(s), k2.value(s), r)).collect();
    let d2 = knots.iter().zip(&rows).map(|(&s, r)| frame_rhs_d(k1.value(s), k2.value(s), k1.d1(s), k2.d1(s), r)).collect();
    Ok(FrameSolution { knots, origin: o, rows, d1, d2, gamma: (base == BaseCurve::Flat).then_some(gam) })
}

impl FrameSolution {
    pub fn max_gram_drift(&self) -> f64 {
        self.rows.iter().map(gram_defect).fold(0.0, f64::max)
    }

    pub fn max_det_drift(&self) -> f64 {
        let d0 = det3(&self.rows[self.origin]);
        self.rows.iter().map(|r| (det3(r) - d0).abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{constant, Analytic};

    fn oriented() -> FrameRows {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        [[-r, r, 0.0], [r, r, 0.0], [0.0, 0.0, -1.0]]
    }

    #[test]
    fn rk4_is_exact_on_cubics() {
        let knots: Vec<f64> = (0..=10).map(|i| -1.0 + 0.2 * i as f64).collect();
        let ys = rk4_nodes(|s, _y: &[f64; 1]| [3.0 * s * s], [0.0], &knots, 5);
        for (s, y) in knots.iter().zip(&ys) {
            assert!((y[0] - s * s * s).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_curvature_keeps_frame_constant() {
        let z = constant(0.0);
        let sol = integrate_frame(&*z, &*z, oriented(), 0.0, (-1.0, 1.0), 0.1, BaseCurve::Flat).unwrap();
        for r in &sol.rows {
            for (row, want) in r.iter().zip(oriented()) {
                for (a, b) in row.iter().zip(want) {
                    assert!((a - b).abs() < 1e-15);
                }
            }
        }
        let g = sol.gamma.unwrap();
        let last = g.last().unwrap();
        assert!((last[0] - oriented()[0][0]).abs() < 1e-14);
    }

    #[test]
    fn gram_is_conserved() {
        let k1 = Analytic::new(|s: f64| s.sin()).with_d1(|s: f64| s.cos());
        let sol = integrate_frame(&k1, &*constant(0.5), oriented(), 0.0, (-2.0, 2.0), 1e-3, BaseCurve::None).unwrap();
        assert!(sol.max_gram_drift() < 1e-10);
        assert!(sol.max_det_drift() < 1e-10);
    }

    #[test]
    fn rejects_bad_initial_frame() {
        let z = constant(0.0);
        let mut f = oriented();
        f[2][2] = -1.1;
        assert!(matches!(integrate_frame(&*z, &*z, f, 0.0, (-1.0, 1.0), 0.1, BaseCurve::None), Err(Error::BadInitialFrame(_))));
    }
}
