use serde::{Deserialize, Serialize};

/// The underlying group: the integers or the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "Z")]
    IntegerLine,
    #[serde(rename = "R")]
    RealLine,
}

impl Domain {
    pub fn is_discrete(self) -> bool {
        matches!(self, Domain::IntegerLine)
    }
}

/// Reduce a frequency to `(-pi, pi]`.
pub(crate) fn reduce_angle(s: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = s.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}
