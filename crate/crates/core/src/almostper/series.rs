//! The series `ψ(t) = Σ_k k^{-4/3} cos(t k^{-1/3})` and its primitives
//!
//! `Pψ(t) = Σ_k k^{-1} sin(t k^{-1/3})`, `P²ψ(t) = Σ_k 2 k^{-2/3} sin²(t k^{-1/3}/2)`,
//!
//! truncated at `K` terms with explicit integral-test tail budgets.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::polycalc::Signal;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const MIN_TERMS: u64 = 10_000;

#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Si(z) by its Taylor series; adequate for `|z| <= 8`.
fn sine_integral(z: f64) -> f64 {
    let mut term = z;
    let mut sum = z;
    let z2 = z * z;
    for n in 1..60 {
        let k = 2 * n + 1;
        term *= -z2 / ((k - 1) * k) as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `∫_0^z (1 − cos u)/u² du` by its Taylor series; adequate for `|z| <= 8`.
fn one_minus_cos_integral(z: f64) -> f64 {
    // Σ_{n≥1} (−1)^{n+1} z^{2n−1} / ((2n)! (2n−1))
    let z2 = z * z;
    let mut fact = 2.0; // (2n)!
    let mut pow = z; // z^{2n−1}
    let mut sum = 0.0;
    for n in 1..60 {
        let add = pow / (fact * (2 * n - 1) as f64);
        sum += if n % 2 == 1 { add } else { -add };
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= z2;
        fact *= ((2 * n + 1) * (2 * n + 2)) as f64;
    }
    sum
}

/// `∫_x^∞` of the three summands as functions of a continuous index, `y = x^{-1/3}`.
fn tail_integrals(t: f64, x: f64) -> [f64; 3] {
    let y = x.cbrt().recip();
    let z = t * y;
    let psi = if t == 0.0 { 3.0 * y } else { 3.0 * z.sin() / t };
    [psi, 3.0 * sine_integral(z), 3.0 * t * one_minus_cos_integral(z)]
}

/// Largest `|t| K^{-1/3}` for which each summand decreases in `k >= K`:
/// `y⁴cos(ty)`, `y³sin(ty)` and `y²sin²(ty/2)` increase on `0 <= ty <=` these.
const MONOTONE_LIMITS: [f64; 3] = [1.26, 2.45, 4.05];

/// Tail enclosure for the three series at `t` after `K` terms.
///
/// For decreasing summands `Σ_{k>K} f(k)` lies in `[∫_{K+1}^∞ f, ∫_K^∞ f]`;
/// the midpoint is the correction and the half-width the budget. Where a
/// summand is not monotone the correction is zero and the budget is the crude
/// `Σ |f|` bound.
fn tail_enclosure(t: f64, k: u64) -> [(f64, f64); 3] {
    let kk = k as f64;
    let a = t.abs();
    let z = a / kk.cbrt();
    let hi = tail_integrals(a, kk);
    let lo = tail_integrals(a, kk + 1.0);
    let root = kk.cbrt();
    let crude = [3.0 / root, 3.0 * a / root, 1.5 * a * a / root];
    let mut out = [(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = if z <= MONOTONE_LIMITS[i] {
            (0.5 * (hi[i] + lo[i]), 0.5 * (hi[i] - lo[i]).abs())
        } else {
            (0.0, crude[i])
        };
    }
    // Pψ is odd in t
    if t < 0.0 {
        out[1].0 = -out[1].0;
    }
    out
}

/// `6t²(π(|t|³+π³))^{-1/3}`
pub fn lower_bound(t: f64) -> f64 {
    6.0 * t * t * (PI * (t.abs().powi(3) + PI.powi(3))).powf(-1.0 / 3.0)
}

/// `9(1+|t|)`
pub fn upper_bound(t: f64) -> f64 {
    9.0 * (1.0 + t.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub psi: f64,
    pub p_psi: f64,
    /// Partial sum plus the tail correction.
    pub p2_psi: f64,
    /// Enclosure half-width for `P²ψ(t)`: tail bracket plus rounding allowance.
    pub budget: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
    /// `upper_bound − (P²ψ + budget)`
    pub upper_margin: f64,
    /// `(P²ψ − budget) − lower_bound`
    pub lower_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub terms: u64,
    pub rows: Vec<BoundRow>,
    /// Rows with `t >= lower_from` are subject to the lower bound.
    pub lower_from: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
    /// Largest enclosure half-width for `ψ` over the grid.
    pub psi_budget: f64,
}

impl BoundReport {
    /// First row violating the lower bound, if any.
    pub fn first_lower_violation(&self) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.t >= self.lower_from && r.lower_margin <= 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example713 {
    pub psi: Signal,
    pub p_psi: Signal,
    pub p2_psi: Signal,
    pub bound_report: BoundReport,
}

/// Where the lower bound is asserted.
pub const LOWER_BOUND_FROM: f64 = 5.0;

/// Evaluate the three series on `0, grid_step, …` up to `horizon` from `K`
/// terms plus an enclosed tail.
pub fn example_7_13(horizon: f64, terms: u64, grid_step: f64) -> Result<Example713> {
    if terms < MIN_TERMS {
        return Err(Error::invalid(format!("need at least {MIN_TERMS} terms")));
    }
    if !(grid_step > 0.0) || !(horizon >= 0.0) {
        return Err(Error::invalid("horizon must be nonnegative and the grid step positive"));
    }
    let limit = (2.0 * terms as f64).cbrt() * PI;
    if horizon > limit {
        return Err(Error::invalid(format!(
            "horizon {horizon} exceeds the truncation-control limit {limit:.6}"
        )));
    }
    let n = (horizon / grid_step + 1e-9).floor() as usize + 1;
    let ts: Vec<f64> = (0..n).map(|i| i as f64 * grid_step).collect();

    let a: Vec<f64> = (1..=terms).map(|k| (k as f64).cbrt().recip()).collect();
    // per t: three partial sums and Σ|term| for P²ψ (terms are nonnegative)
    let rows: Vec<[f64; 3]> = ts
        .par_iter()
        .map(|&t| {
            let (mut s0, mut s1, mut s2) = (Neumaier::default(), Neumaier::default(), Neumaier::default());
            for &ak in &a {
                let (sh, ch) = (0.5 * t * ak).sin_cos();
                let a2 = ak * ak;
                let a3 = a2 * ak;
                s0.add(a3 * ak * (1.0 - 2.0 * sh * sh));
                s1.add(a3 * 2.0 * sh * ch);
                s2.add(2.0 * a2 * sh * sh);
            }
            [s0.value(), s1.value(), s2.value()]
        })
        .collect();

    // each summand carries a few ulps of error; allow 16ε per unit of Σ|term|
    let rounding = |abs_sum: f64| 16.0 * f64::EPSILON * abs_sum;
    let mut out = Vec::with_capacity(n);
    let mut psi_budget: f64 = 0.0;
    for (&t, partial) in ts.iter().zip(&rows) {
        let enc = tail_enclosure(t, terms);
        let psi = partial[0] + enc[0].0;
        let p1 = partial[1] + enc[1].0;
        let p2 = partial[2] + enc[2].0;
        psi_budget = psi_budget.max(enc[0].1 + rounding(4.0));
        let budget = enc[2].1 + rounding(partial[2]);
        let ub = upper_bound(t);
        let lb = lower_bound(t);
        out.push(BoundRow {
            t,
            psi,
            p_psi: p1,
            p2_psi: p2,
            budget,
            upper_bound: ub,
            lower_bound: lb,
            upper_margin: ub - (p2 + budget),
            lower_margin: (p2 - budget) - lb,
        });
    }
    let report = BoundReport {
        terms,
        upper_holds: out.iter().all(|r| r.upper_margin >= 0.0),
        lower_holds: out.iter().filter(|r| r.t >= LOWER_BOUND_FROM - 1e-12).all(|r| r.lower_margin > 0.0),
        lower_from: LOWER_BOUND_FROM,
        psi_budget,
        rows: out,
    };
    let sig = |f: fn(&BoundRow) -> f64| {
        Signal::new(
            Domain::RealLine,
            0.0,
            grid_step,
            1,
            report.rows.iter().map(|r| Complex64::new(f(r), 0.0)).collect(),
        )
    };
    Ok(Example713 {
        psi: sig(|r| r.psi)?,
        p_psi: sig(|r| r.p_psi)?,
        p2_psi: sig(|r| r.p2_psi)?,
        bound_report: report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonMembership {
    /// `min_a inf_t |f(t) − a t| / (1+t)`
    pub value: f64,
    pub best_a: f64,
    pub t_range: (f64, f64),
    pub a_range: (f64, f64),
    pub a_step: f64,
}

/// Best affine subtraction `a t` (slope on a grid) measured by the worst-case
/// smallness `inf_t |f(t) − a t|/(1+t)` over `t ∈ [t_lo, t_hi]`.
pub fn nonmembership_surrogate(
    f: &Signal,
    t_range: (f64, f64),
    a_range: (f64, f64),
    a_step: f64,
) -> Result<NonMembership> {
    if !(a_step > 0.0) || a_range.0 > a_range.1 || t_range.0 > t_range.1 {
        return Err(Error::invalid("ranges must be ordered and the slope step positive"));
    }
    let pts: Vec<(f64, f64)> = (0..f.len())
        .filter(|&i| f.time(i) >= t_range.0 - 1e-12 && f.time(i) <= t_range.1 + 1e-12)
        .map(|i| (f.time(i), f.scalar(i).re))
        .collect();
    if pts.is_empty() {
        return Err(Error::invalid("no samples in the requested t range"));
    }
    let steps = ((a_range.1 - a_range.0) / a_step + 1e-9).floor() as usize;
    let (value, best_a) = (0..=steps)
        .into_par_iter()
        .map(|j| {
            let a = a_range.0 + j as f64 * a_step;
            let inf = pts.iter().map(|&(t, y)| (y - a * t).abs() / (1.0 + t)).fold(f64::INFINITY, f64::min);
            (inf, a)
        })
        .reduce(|| (f64::INFINITY, 0.0), |x, y| if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
    Ok(NonMembership { value, best_a, t_range, a_range, a_step })
}
