//! Para-complex (split-complex) numbers `re + i'im` with `i'^2 = 1`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Rect;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParaComplex {
    pub re: f64,
    pub im: f64,
}

impl ParaComplex {
    pub const ZERO: ParaComplex = ParaComplex { re: 0.0, im: 0.0 };
    pub const ONE: ParaComplex = ParaComplex { re: 1.0, im: 0.0 };
    /// The para-complex unit i'.
    pub const I: ParaComplex = ParaComplex { re: 0.0, im: 1.0 };
    /// l = (1 + i')/2, an idempotent null element.
    pub const L: ParaComplex = ParaComplex { re: 0.5, im: 0.5 };
    /// l-bar = (1 - i')/2.
    pub const LBAR: ParaComplex = ParaComplex { re: 0.5, im: -0.5 };

    pub const fn new(re: f64, im: f64) -> Self {
        ParaComplex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        ParaComplex { re, im: 0.0 }
    }

    /// Builds `l*a + lbar*b` from its null components.
    pub fn from_null(a: f64, b: f64) -> Self {
        ParaComplex::new(0.5 * (a + b), 0.5 * (a - b))
    }

    /// Components `(a, b)` with `self = l*a + lbar*b`.
    pub fn null_parts(self) -> (f64, f64) {
        (self.re + self.im, self.re - self.im)
    }

    pub fn conj(self) -> Self {
        ParaComplex::new(self.re, -self.im)
    }

    /// `z * conj(z) = re^2 - im^2`.
    pub fn norm_sq(self) -> f64 {
        self.re * self.re - self.im * self.im
    }

    pub fn scale(self, k: f64) -> Self {
        ParaComplex::new(self.re * k, self.im * k)
    }

    /// Square root on the closed cone `re >= |im|`; the root has non-negative null parts.
    pub fn sqrt(self) -> Result<Self> {
        let (a, b) = self.null_parts();
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::NoRoot);
        }
        Ok(ParaComplex::from_null(a.sqrt(), b.sqrt()))
    }

    pub fn exp(self) -> Self {
        let r = self.re.exp();
        ParaComplex::new(r * self.im.cosh(), r * self.im.sinh())
    }

    pub fn inverse(self) -> Result<Self> {
        let d = self.norm_sq();
        if d == 0.0 {
            return Err(Error::NotInvertible);
        }
        Ok(ParaComplex::new(self.re / d, -self.im / d))
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.re - other.re).abs().max((self.im - other.im).abs())
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl fmt::Display for ParaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{} - {}i'", self.re, -self.im)
        } else {
            write!(f, "{} + {}i'", self.re, self.im)
        }
    }
}

impl Add for ParaComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ParaComplex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for ParaComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ParaComplex::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for ParaComplex {
    type Output = Self;
    fn neg(self) -> Self {
        ParaComplex::new(-self.re, -self.im)
    }
}

impl Mul for ParaComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ParaComplex::new(self.re * o.re + self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Mul<f64> for ParaComplex {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl Mul<ParaComplex> for f64 {
    type Output = ParaComplex;
    fn mul(self, z: ParaComplex) -> ParaComplex {
        z.scale(self)
    }
}

impl Div<f64> for ParaComplex {
    type Output = Self;
    fn div(self, k: f64) -> Self {
        ParaComplex::new(self.re / k, self.im / k)
    }
}

/// Wirtinger-type partials `(dF/dz, dF/dzbar)` for `z = x + i'y`, using central differences.
///
/// `dF/dz = (F_x + i' F_y)/2` and `dF/dzbar = (F_x - i' F_y)/2`.
pub fn pc_partials<F>(f: F, domain: &Rect, x: f64, y: f64, h: f64) -> Result<(ParaComplex, ParaComplex)>
where
    F: Fn(f64, f64) -> ParaComplex,
{
    if !domain.contains_with_margin(x, y, h) {
        return Err(Error::OutOfGrid(format!("({x}, {y}) with step {h}")));
    }
    let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    let dz = (fx + ParaComplex::I * fy).scale(0.5);
    let dzbar = (fx - ParaComplex::I * fy).scale(0.5);
    Ok((dz, dzbar))
}

/// Partials for null coordinates `z = l x + lbar y`: `d/dz = l d/dx + lbar d/dy`.
pub fn null_partials<F>(f: F, domain: &Rect, x: f64, y: f64, h: f64) -> Result<(ParaComplex, ParaComplex)>
where
    F: Fn(f64, f64) -> ParaComplex,
{
    if !domain.contains_with_margin(x, y, h) {
        return Err(Error::OutOfGrid(format!("({x}, {y}) with step {h}")));
    }
    let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    let dz = ParaComplex::L * fx + ParaComplex::LBAR * fy;
    let dzbar = ParaComplex::LBAR * fx + ParaComplex::L * fy;
    Ok((dz, dzbar))
}
