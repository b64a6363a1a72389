//! Rectangular parameter domains and regular sample grids.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    /// True when the whole central-difference stencil of half-width `h` stays inside.
    pub fn contains_with_margin(&self, x: f64, y: f64, h: f64) -> bool {
        x - h >= self.x0 && x + h <= self.x1 && y - h >= self.y0 && y + h <= self.y1
    }
}

/// A regular `ns x nt` grid over `[s0,s1] x [t0,t1]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub s0: f64,
    pub s1: f64,
    pub ns: usize,
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
}

impl Grid {
    pub fn new(s: (f64, f64), ns: usize, t: (f64, f64), nt: usize) -> Self {
        Grid { s0: s.0, s1: s.1, ns, t0: t.0, t1: t.1, nt }
    }

    pub fn s_at(&self, i: usize) -> f64 {
        lerp(self.s0, self.s1, i, self.ns)
    }

    pub fn t_at(&self, j: usize) -> f64 {
        lerp(self.t0, self.t1, j, self.nt)
    }

    pub fn len(&self) -> usize {
        self.ns * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order (s outer, t inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.ns {
            for j in 0..self.nt {
                out.push((self.s_at(i), self.t_at(j)));
            }
        }
        out
    }
}

fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        a
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `s0:s1:ns,t0:t1:nt`.
    fn from_str(text: &str) -> Result<Self, Error> {
        let bad = || Error::Invalid(format!("grid must look like s0:s1:ns,t0:t1:nt, got {text:?}"));
        let (a, b) = text.split_once(',').ok_or_else(bad)?;
        let axis = |part: &str| -> Result<(f64, f64, usize), Error> {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let lo: f64 = f[0].trim().parse().map_err(|_| bad())?;
            let hi: f64 = f[1].trim().parse().map_err(|_| bad())?;
            let n: usize = f[2].trim().parse().map_err(|_| bad())?;
            if !(lo.is_finite() && hi.is_finite()) || hi <= lo || n < 2 {
                return Err(bad());
            }
            Ok((lo, hi, n))
        };
        let (s0, s1, ns) = axis(a)?;
        let (t0, t1, nt) = axis(b)?;
        Ok(Grid { s0, s1, ns, t0, t1, nt })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grid() {
        let g: Grid = "-1:1:5,0.1:2:3".parse().unwrap();
        assert_eq!(g, Grid::new((-1.0, 1.0), 5, (0.1, 2.0), 3));
        assert_eq!(g.points().len(), 15);
        assert_eq!(g.s_at(4), 1.0);
        assert!("1:0:5,0:1:2".parse::<Grid>().is_err());
        assert!("0:1:5".parse::<Grid>().is_err());
        assert!("0:1:1,0:1:2".parse::<Grid>().is_err());
    }
}
