//! Run configuration: the command, its inputs, tolerance overrides and seed.
//!
//! The configuration is embedded verbatim in every output file so a run can be
//! reproduced from its artifacts alone.

use crate::outcome::Failure;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Named tolerances with their defaults.
pub const TOLERANCES: &[(&str, f64, &str)] = &[
    ("axiom", 1e-9, "relative slack in the weight axiom checks"),
    ("degree", 1e-9, "vanishing threshold for iterated differences"),
    ("mean", 1e-3, "uniformity defect accepted by the mean estimators"),
    ("resonance", 1e-7, "distance from the unit circle or real axis for resonances"),
    ("residual", 1e-10, "relative residual accepted from the recurrence solver"),
    ("slack", 1e-2, "slack in the decomposition norm inequality"),
];

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    /// Effective value of every named tolerance.
    pub tolerances: BTreeMap<String, f64>,
    /// Only the tolerances given on the command line.
    pub overrides: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(
        command: impl Into<String>,
        inputs: Vec<PathBuf>,
        overrides: &[(String, f64)],
        seed: u64,
        out: PathBuf,
    ) -> Result<Self, Failure> {
        let mut tolerances: BTreeMap<String, f64> =
            TOLERANCES.iter().map(|&(name, value, _)| (name.to_string(), value)).collect();
        let mut given = BTreeMap::new();
        for (name, value) in overrides {
            match tolerances.get_mut(name) {
                Some(slot) => *slot = *value,
                None => {
                    let known: Vec<&str> = TOLERANCES.iter().map(|t| t.0).collect();
                    return Err(Failure::invalid(format!(
                        "unknown tolerance `{name}`; known names: {}",
                        known.join(", ")
                    )));
                }
            }
            given.insert(name.clone(), *value);
        }
        Ok(RunConfig { command: command.into(), inputs, tolerances, overrides: given, seed, out })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

/// `name=value` with a finite positive value.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value.trim().parse().map_err(|e| format!("bad tolerance value `{value}`: {e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance `{name}` must be positive and finite"));
    }
    Ok((name.trim().to_string(), v))
}
