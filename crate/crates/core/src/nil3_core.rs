//! The Heisenberg group Nil3 with its left-invariant Lorentzian metric g+.
//!
//! Tangent vectors are stored as components in the left-invariant orthonormal frame
//! `{E1, E2, E3}` with signature `(-, +, +)`. Coordinate vectors only appear at the
//! boundary, in [`coord_to_frame`] and [`frame_to_coord`].

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Nil3Point {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVector {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

pub const E1: FrameVector = FrameVector::new(1.0, 0.0, 0.0);
pub const E2: FrameVector = FrameVector::new(0.0, 1.0, 0.0);
pub const E3: FrameVector = FrameVector::new(0.0, 0.0, 1.0);

impl Nil3Point {
    pub const IDENTITY: Nil3Point = Nil3Point { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Nil3Point { x1, x2, x3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Nil3Point::new(a[0], a[1], a[2])
    }

    /// Largest coordinate difference, treating both points as vectors of R^3.
    pub fn max_abs_diff(self, o: Self) -> f64 {
        (self.x1 - o.x1).abs().max((self.x2 - o.x2).abs()).max((self.x3 - o.x3).abs())
    }
}

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector { v1: 0.0, v2: 0.0, v3: 0.0 };

    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        FrameVector { v1, v2, v3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        FrameVector::new(a[0], a[1], a[2])
    }

    /// The reflection `v3 -> -v3` relating a ruling to its induced field.
    pub fn flip3(self) -> Self {
        FrameVector::new(self.v1, self.v2, -self.v3)
    }

    pub fn euclid_norm_sq(self) -> f64 {
        self.v1 * self.v1 + self.v2 * self.v2 + self.v3 * self.v3
    }

    pub fn euclid_dot(self, o: Self) -> f64 {
        self.v1 * o.v1 + self.v2 * o.v2 + self.v3 * o.v3
    }

    pub fn max_abs(self) -> f64 {
        self.v1.abs().max(self.v2.abs()).max(self.v3.abs())
    }

    pub fn max_abs_diff(self, o: Self) -> f64 {
        (self - o).max_abs()
    }
}

impl Index<usize> for FrameVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.v1,
            1 => &self.v2,
            2 => &self.v3,
            _ => panic!("frame index {i} out of range"),
        }
    }
}

impl Add for FrameVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FrameVector::new(self.v1 + o.v1, self.v2 + o.v2, self.v3 + o.v3)
    }
}

impl AddAssign for FrameVector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for FrameVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        FrameVector::new(self.v1 - o.v1, self.v2 - o.v2, self.v3 - o.v3)
    }
}

impl Neg for FrameVector {
    type Output = Self;
    fn neg(self) -> Self {
        FrameVector::new(-self.v1, -self.v2, -self.v3)
    }
}

impl Mul<f64> for FrameVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        FrameVector::new(self.v1 * k, self.v2 * k, self.v3 * k)
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, v: FrameVector) -> FrameVector {
        v * self
    }
}

pub fn group_mul(p: Nil3Point, q: Nil3Point) -> Nil3Point {
    Nil3Point::new(p.x1 + q.x1, p.x2 + q.x2, p.x3 + q.x3 + 0.5 * (p.x1 * q.x2 - p.x2 * q.x1))
}

pub fn group_inv(p: Nil3Point) -> Nil3Point {
    Nil3Point::new(-p.x1, -p.x2, -p.x3)
}

/// Exponential of `v1 e1 + v2 e2 + v3 e3`; in these coordinates it is the identity map.
pub fn lie_exp(v: FrameVector) -> Nil3Point {
    Nil3Point::new(v.v1, v.v2, v.v3)
}

pub fn lie_log(p: Nil3Point) -> FrameVector {
    FrameVector::new(p.x1, p.x2, p.x3)
}

/// Frame components of the coordinate vector `c` based at `p`.
pub fn coord_to_frame(p: Nil3Point, c: [f64; 3]) -> FrameVector {
    FrameVector::new(c[0], c[1], c[2] - 0.5 * (p.x1 * c[1] - p.x2 * c[0]))
}

/// Coordinate components of the frame vector `v` based at `p`.
pub fn frame_to_coord(p: Nil3Point, v: FrameVector) -> [f64; 3] {
    [v.v1, v.v2, v.v3 + 0.5 * (p.x1 * v.v2 - p.x2 * v.v1)]
}

/// `gamma^{-1} dgamma/ds` for a curve given by its point and coordinate velocity.
pub fn left_translate_velocity(point: Nil3Point, coord_velocity: [f64; 3]) -> FrameVector {
    coord_to_frame(point, coord_velocity)
}

/// Left-translated velocity of a callable curve by central differences of step `h`.
pub fn left_translate_velocity_fd<F>(gamma: F, s: f64, h: f64) -> FrameVector
where
    F: Fn(f64) -> Nil3Point,
{
    let (a, b) = (gamma(s + h).to_array(), gamma(s - h).to_array());
    let c = [0, 1, 2].map(|i| (a[i] - b[i]) / (2.0 * h));
    coord_to_frame(gamma(s), c)
}

/// The metric g+ = diag(-1, 1, 1) in the orthonormal frame.
pub fn metric(v: FrameVector, w: FrameVector) -> f64 {
    -v.v1 * w.v1 + v.v2 * w.v2 + v.v3 * w.v3
}

/// The unique `u` with `g(u, z) = det[v | w | z]` for every `z`.
pub fn cross(v: FrameVector, w: FrameVector) -> FrameVector {
    FrameVector::new(-(v.v2 * w.v3 - v.v3 * w.v2), v.v3 * w.v1 - v.v1 * w.v3, v.v1 * w.v2 - v.v2 * w.v1)
}

/// `GAMMA[i][j]` holds the frame components of `nabla_{E_i} E_j`.
pub const GAMMA: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 0.5], [0.0, -0.5, 0.0]],
    [[0.0, 0.0, -0.5], [0.0, 0.0, 0.0], [-0.5, 0.0, 0.0]],
    [[0.0, -0.5, 0.0], [-0.5, 0.0, 0.0], [0.0, 0.0, 0.0]],
];

/// `nabla_V X` for constant-coefficient frame fields: `sum V^i X^j nabla_{E_i} E_j`.
pub fn connection(v: FrameVector, x: FrameVector) -> FrameVector {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            let c = v[i] * x[j];
            if c != 0.0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += c * GAMMA[i][j][k];
                }
            }
        }
    }
    FrameVector::from_array(out)
}

/// Covariant derivative of a frame field `X` along a map.
///
/// `dx` holds the ordinary derivative of the components of `X` in the chosen direction,
/// and `velocity` the frame components of the map's derivative in that direction.
pub fn covariant_derivative(dx: FrameVector, velocity: FrameVector, x: FrameVector) -> FrameVector {
    dx + connection(velocity, x)
}

/// Lie bracket of left-invariant fields, `[e1, e2] = e3`.
pub fn bracket(v: FrameVector, w: FrameVector) -> FrameVector {
    FrameVector::new(0.0, 0.0, v.v1 * w.v2 - v.v2 * w.v1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(a: FrameVector, b: FrameVector, c: FrameVector) -> f64 {
        a.v1 * (b.v2 * c.v3 - b.v3 * c.v2) - a.v2 * (b.v1 * c.v3 - b.v3 * c.v1) + a.v3 * (b.v1 * c.v2 - b.v2 * c.v1)
    }

    #[test]
    fn group_examples() {
        let p = Nil3Point::new(0.3, -1.2, 2.0);
        assert_eq!(group_mul(p, Nil3Point::IDENTITY), p);
        assert_eq!(group_mul(Nil3Point::new(1.0, 0.0, 0.0), Nil3Point::new(0.0, 1.0, 0.0)), Nil3Point::new(1.0, 1.0, 0.5));
        assert_eq!(group_mul(p, group_inv(p)), Nil3Point::IDENTITY);
        assert_eq!(group_inv(Nil3Point::new(1.0, 1.0, 0.5)), Nil3Point::new(-1.0, -1.0, -0.5));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(lie_exp(FrameVector::ZERO), Nil3Point::IDENTITY);
        assert_eq!(lie_exp(E1 + 2.0 * E3), Nil3Point::new(1.0, 0.0, 2.0));
        let v = FrameVector::new(0.1, 0.2, 0.3);
        assert_eq!(lie_log(lie_exp(v)), v);
    }

    #[test]
    fn metric_examples() {
        assert_eq!(metric(E1, E1), -1.0);
        assert_eq!(metric(E2, E3), 0.0);
        let th: f64 = 0.9;
        let v = FrameVector::new(1.0, th.cos(), th.sin());
        assert!(metric(v, v).abs() < 1e-15);
    }

    #[test]
    fn cross_matches_determinant() {
        let basis = [E1, E2, E3];
        for &v in &basis {
            for &w in &basis {
                for &z in &basis {
                    assert_eq!(metric(cross(v, w), z), det(v, w, z));
                }
            }
        }
        assert_eq!(metric(cross(E2, E3), E1), 1.0);
        let v = FrameVector::new(0.4, -1.0, 2.0);
        assert_eq!(cross(v, v), FrameVector::ZERO);
    }

    #[test]
    fn connection_table_identities() {
        assert_eq!(connection(E1, E2), 0.5 * E3);
        assert_eq!(connection(E1, E3), -0.5 * E2);
        assert_eq!(connection(E2, E1), -0.5 * E3);
        assert_eq!(connection(E2, E3), -0.5 * E1);
        assert_eq!(connection(E3, E1), -0.5 * E2);
        assert_eq!(connection(E3, E2), -0.5 * E1);
        for e in [E1, E2, E3] {
            assert_eq!(connection(e, e), FrameVector::ZERO);
        }
    }

    #[test]
    fn connection_is_metric_and_torsion_free() {
        let b = [E1, E2, E3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let m = metric(connection(b[i], b[j]), b[k]) + metric(b[j], connection(b[i], b[k]));
                    assert_eq!(m, 0.0, "metric compatibility {i}{j}{k}");
                }
                let torsion = connection(b[i], b[j]) - connection(b[j], b[i]) - bracket(b[i], b[j]);
                assert_eq!(torsion, FrameVector::ZERO, "torsion {i}{j}");
            }
        }
    }

    #[test]
    fn velocity_of_line_and_circle_base() {
        let v = left_translate_velocity_fd(|s| Nil3Point::new(s, 0.0, 0.0), 0.7, 1e-5);
        assert!(v.max_abs_diff(E1) < 1e-10);
        let gamma = |s: f64| Nil3Point::new(-s, s.sin(), -0.5 * s * s.sin());
        for &s in &[-1.3, 0.0, 0.4, 2.0] {
            let v = left_translate_velocity_fd(gamma, s, 1e-5);
            let exact = FrameVector::new(-1.0, s.cos(), -s.sin());
            assert!(v.max_abs_diff(exact) < 1e-8);
        }
    }

    #[test]
    fn frame_coordinate_round_trip() {
        let p = Nil3Point::new(0.3, -2.0, 1.0);
        let c = [0.5, 0.25, -1.5];
        assert_eq!(frame_to_coord(p, coord_to_frame(p, c)), c);
    }
}
