//! The tolerance table shared by the library, the CLI and the acceptance suite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Central-difference step for first derivatives.
pub const FD_STEP_FIRST: f64 = 1e-5;
/// Central-difference step for second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-4;

pub const DEFAULTS: &[(&str, f64)] = &[
    ("closed_mean_curvature", 1e-8),
    ("fd_mean_curvature", 1e-4),
    ("non_minimal_floor", 1e-3),
    ("degeneracy_mask", 5e-2),
    ("gram_drift", 1e-8),
    ("planarity", 1e-8),
    ("correspondence", 1e-6),
    ("liouville", 1e-5),
    ("gallery", 1e-9),
    ("support_function", 1e-5),
    ("ar_differential", 1e-6),
    ("conformality", 1e-8),
    ("closedness", 1e-8),
    ("minimality_class", 1e-9),
    ("velocity_check", 1e-9),
    ("fd_step_first", FD_STEP_FIRST),
    ("fd_step_second", FD_STEP_SECOND),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(DEFAULTS.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        *self.0.get(name).unwrap_or_else(|| panic!("unknown tolerance {name}"))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.0.contains_key(name) {
            return Err(Error::Invalid(format!("unknown tolerance {name:?}")));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Invalid(format!("tolerance {name} must be positive, got {value}")));
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    /// Applies an override written as `name=value`.
    pub fn apply(&mut self, text: &str) -> Result<()> {
        let (k, v) = text.split_once('=').ok_or_else(|| Error::Invalid(format!("tolerance override must be name=value, got {text:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Invalid(format!("bad tolerance value in {text:?}")))?;
        self.set(k.trim(), v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}
