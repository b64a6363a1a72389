//! Quad-grid meshes of surfaces in OBJ and CSV form.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::nil3_core::Nil3Point;
use crate::verify::pool;

/// Header line shared by both formats.
pub const COORDINATE_NOTE: &str = "Nil3 coordinates (x1, x2, x3) written as positions in R^3; exp is a global diffeomorphism onto R^3";

/// Surface samples on a grid, row-major with `s` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub grid: Grid,
    pub points: Vec<Nil3Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl Mesh {
    pub fn sample<F>(f: F, grid: &Grid) -> Result<Mesh>
    where
        F: Fn(f64, f64) -> Result<Nil3Point> + Sync,
    {
        if grid.ns < 2 || grid.nt < 2 {
            return Err(Error::Invalid("a mesh needs at least 2 x 2 samples".into()));
        }
        let points = pool().install(|| {
            grid.points()
                .into_par_iter()
                .map(|(s, t)| {
                    let p = f(s, t)?;
                    if p.to_array().iter().all(|x| x.is_finite()) {
                        Ok(p)
                    } else {
                        Err(Error::DegeneratePoint(f64::NAN))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(Mesh { grid: *grid, points })
    }

    pub fn write<W: Write>(&self, format: MeshFormat, name: &str, out: W) -> Result<()> {
        match format {
            MeshFormat::Obj => self.write_obj(name, out),
            MeshFormat::Csv => self.write_csv(out),
        }
    }

    /// Wavefront OBJ with one vertex per sample and one quad per grid cell.
    pub fn write_obj<W: Write>(&self, name: &str, mut out: W) -> Result<()> {
        let g = &self.grid;
        writeln!(out, "# {COORDINATE_NOTE}")?;
        writeln!(out, "# grid s {}:{}:{} t {}:{}:{}", g.s0, g.s1, g.ns, g.t0, g.t1, g.nt)?;
        writeln!(out, "o {name}")?;
        for p in &self.points {
            writeln!(out, "v {} {} {}", sig9(p.x1), sig9(p.x2), sig9(p.x3))?;
        }
        let idx = |i: usize, j: usize| i * g.nt + j + 1;
        for i in 0..g.ns - 1 {
            for j in 0..g.nt - 1 {
                writeln!(out, "f {} {} {} {}", idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1))?;
            }
        }
        Ok(())
    }

    /// `s,t,x1,x2,x3`, one row per sample, shortest round-trip float formatting.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "s,t,x1,x2,x3")?;
        for ((s, t), p) in self.grid.points().into_iter().zip(&self.points) {
            writeln!(out, "{s},{t},{},{},{}", p.x1, p.x2, p.x3)?;
        }
        Ok(())
    }
}

/// `x` with nine significant digits, in plain notation when that is short.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..9).contains(&e) {
        let prec = (8 - e).max(0) as usize;
        let s = format!("{x:.prec$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-0.5), "-0.5");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(123456.789123), "123456.789");
        assert_eq!(sig9(1.0e-7), "1.00000000e-7");
        assert_eq!(sig9(-2.5e12), "-2.50000000e12");
        let x = 0.123456789876;
        assert!((sig9(x).parse::<f64>().unwrap() - x).abs() < 1e-9);
    }

    fn plane() -> Mesh {
        Mesh::sample(|s, t| Ok(Nil3Point::new(s, t, s + t)), &Grid::new((0.0, 1.0), 3, (0.0, 1.0), 2)).unwrap()
    }

    #[test]
    fn obj_layout() {
        let mut buf = Vec::new();
        plane().write_obj("plane", &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# Nil3 coordinates"));
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 6);
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces, vec!["f 1 3 4 2", "f 3 5 6 4"]);
        assert!(text.contains("v 0.5 1 1.5"));
    }

    #[test]
    fn csv_is_deterministic() {
        let write = || {
            let mut buf = Vec::new();
            plane().write_csv(&mut buf).unwrap();
            buf
        };
        let a = write();
        assert_eq!(a, write());
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().next(), Some("s,t,x1,x2,x3"));
        assert_eq!(text.lines().nth(2), Some("0,1,0,1,1"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn rejects_non_finite_and_tiny_grids() {
        let g = Grid::new((0.0, 1.0), 3, (0.0, 1.0), 3);
        assert!(Mesh::sample(|s, _| Ok(Nil3Point::new(1.0 / (s - 0.5), 0.0, 0.0)), &g).is_err());
        assert!(Mesh::sample(|_, _| Ok(Nil3Point::IDENTITY), &Grid::new((0.0, 1.0), 1, (0.0, 1.0), 3)).is_err());
    }
}
