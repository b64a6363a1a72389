//! Construction and verification of timelike minimal surfaces in the Lorentzian
//! Heisenberg group Nil3, built as null scrolls `f(s,t) = gamma(s) * exp(t B(s))`.

// `!(x <= tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod construct;
pub mod correspondence;
pub mod curve;
pub mod error;
pub mod grid;
pub mod io;
pub mod mesh;
pub mod minkowski;
pub mod nil3_core;
pub mod nullcurve;
pub mod ode;
pub mod paracomplex;
pub mod scroll;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use minkowski::MinkVector;
pub use nil3_core::{FrameVector, Nil3Point};
pub use paracomplex::ParaComplex;
