//! Finite-horizon checks of power and group growth against spectral data.
//!
//! Each check measures growth numerically, reads the spectrum, and reports
//! whether the algebraic conclusion (nilpotency of `x − e`, decay of the
//! normalised powers or differences) is consistent with what was measured.

use super::MatrixOp;
use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix};
use crate::weights::SLOPE_MARGIN;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Spectral points within this distance count as equal.
const SPECTRUM_TOL: f64 = 1e-8;
/// Relative size below which a matrix power counts as zero.
const NILPOTENT_TOL: f64 = 1e-9;
/// Shortest horizon accepted by the power-growth checks.
pub const MIN_POWER_HORIZON: i64 = 1000;
/// Sample count for the group-growth check.
pub const GROUP_SAMPLES: usize = 2001;
/// Admissible drift of `a(n+1)/a(n)` from 1 over the final decade.
pub const KT_RATIO_TOL: f64 = 1e-2;
/// The normalised curve must stay below this over the final decade for decay.
pub const KT_DECAY_TOL: f64 = 1e-6;
/// Tail sup may exceed head sup by at most this factor for power domination by `a`.
const KT_DOMINATION_FACTOR: f64 = 2.0;

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn spectrum_is_point(x: &MatrixOp, z: Complex64) -> bool {
    x.spectrum().iter().all(|e| (e.value - z).norm() <= SPECTRUM_TOL * z.norm().max(1.0))
}

/// `‖(x − z)^k‖` relative to `max(1, ‖x‖)^k`.
fn relative_power_norm(x: &CMatrix, z: Complex64, k: usize) -> Result<f64> {
    let p = x.shift(z).pow(k as i64)?;
    let scale = x.norm2().max(1.0).powi(k as i32);
    Ok(p.norm2() / scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandHilleReport {
    pub order: usize,
    pub horizon: i64,
    /// `sup_{|n| <= horizon} ‖x^n‖ / (1+|n|)^N`
    pub sup_ratio: f64,
    /// Log-log growth slopes of `‖x^{±n}‖` over `n ∈ [horizon/2, horizon]`.
    pub tail_slope_forward: f64,
    pub tail_slope_backward: f64,
    pub dominated: bool,
    pub spectrum_is_one: bool,
    /// `‖(x − e)^{N+1}‖ / max(1,‖x‖)^{N+1}`
    pub nilpotency_defect: f64,
    pub nilpotent: bool,
    /// `‖(x − e)^N‖ > 0`, so the order `N` is sharp.
    pub sharp: bool,
    /// Domination and `σ = {1}` imply nilpotency.
    pub consistent: bool,
    /// `(n, ‖x^n‖)` for `|n| <= horizon`.
    pub curve: Vec<(i64, f64)>,
}

/// Doubly-infinite power growth of `x` against `(1+|n|)^N`.
pub fn gelfand_hille_check(x: &MatrixOp, order: usize, horizon: i64) -> Result<GelfandHilleReport> {
    if horizon < MIN_POWER_HORIZON {
        return Err(Error::invalid(format!("horizon must be at least {MIN_POWER_HORIZON}")));
    }
    let m = x.matrix();
    let inv = m.inverse().ok();
    let h = horizon as usize;
    let mut forward = Vec::with_capacity(h + 1);
    let mut p = CMatrix::identity(m.dim());
    for _ in 0..=h {
        forward.push(p.norm2());
        p = p.mul(m);
    }
    let backward = match &inv {
        Some(mi) => {
            let mut b = Vec::with_capacity(h + 1);
            let mut p = CMatrix::identity(m.dim());
            for _ in 0..=h {
                b.push(p.norm2());
                p = p.mul(mi);
            }
            b
        }
        None => vec![f64::INFINITY; h + 1],
    };
    let mut curve: Vec<(i64, f64)> = (1..=h).rev().map(|n| (-(n as i64), backward[n])).collect();
    curve.extend(forward.iter().enumerate().map(|(n, &v)| (n as i64, v)));
    let nf = order as i32;
    let sup_ratio = curve
        .iter()
        .map(|&(n, v)| v / (1.0 + n.unsigned_abs() as f64).powi(nf))
        .fold(0.0, f64::max);
    let tail = |vals: &[f64]| {
        let pts: Vec<(f64, f64)> = (h / 2..=h).map(|n| (1.0 + n as f64, vals[n])).collect();
        loglog_slope(&pts)
    };
    let tail_slope_forward = tail(&forward);
    let tail_slope_backward = if inv.is_some() { tail(&backward) } else { f64::INFINITY };
    let limit = order as f64 + SLOPE_MARGIN;
    let dominated = sup_ratio.is_finite() && tail_slope_forward <= limit && tail_slope_backward <= limit;
    let one = Complex64::new(1.0, 0.0);
    let nilpotency_defect = relative_power_norm(m, one, order + 1)?;
    let nilpotent = nilpotency_defect <= NILPOTENT_TOL;
    let sharp = order == 0 || relative_power_norm(m, one, order)? > NILPOTENT_TOL;
    let spectrum_is_one = spectrum_is_point(x, one);
    Ok(GelfandHilleReport {
        order,
        horizon,
        sup_ratio,
        tail_slope_forward,
        tail_slope_backward,
        dominated,
        spectrum_is_one,
        nilpotency_defect,
        nilpotent,
        sharp,
        consistent: !(dominated && spectrum_is_one) || nilpotent,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KtCase {
    /// `σ(x) ∩ T = ∅`: `x^n / a(n) → 0`.
    Empty,
    /// `σ(x) ∩ T = {1}`: `(x^{n+1} − x^n) / a(n) → 0`.
    One,
    /// Some other unimodular spectrum; nothing is asserted.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KtVerdict {
    DecayConfirmed,
    DecayNotObserved,
    NotAsserted,
    NotDominated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KtReport {
    pub horizon: usize,
    pub case: KtCase,
    pub dominated: bool,
    /// `‖x^n‖ / a(n)` for `n = 0..=horizon`.
    pub power_curve: Vec<f64>,
    /// `‖x^{n+1} − x^n‖ / a(n)` for `n = 0..=horizon`.
    pub difference_curve: Vec<f64>,
    pub verdict: KtVerdict,
}

impl KtReport {
    /// The curve the verdict is about: powers for [`KtCase::Empty`], differences otherwise.
    pub fn asserted_curve(&self) -> &[f64] {
        match self.case {
            KtCase::Empty => &self.power_curve,
            _ => &self.difference_curve,
        }
    }
}

/// First `n` from which `curve` stays at or below `tol`.
pub fn settles_below(curve: &[f64], tol: f64) -> Option<usize> {
    let last_bad = curve.iter().rposition(|&v| !(v <= tol));
    match last_bad {
        None => Some(0),
        Some(i) if i + 1 < curve.len() => Some(i + 1),
        Some(_) => None,
    }
}

/// Power behaviour of `x` against a tabulated weight `a(0), a(1), …`.
pub fn kt_check(x: &MatrixOp, a: &[f64], horizon: usize) -> Result<KtReport> {
    if horizon < 10 {
        return Err(Error::invalid("horizon must be at least 10"));
    }
    if a.len() < horizon + 2 {
        return Err(Error::WindowTooShort { needed: horizon + 2, available: a.len() });
    }
    if a.iter().take(horizon + 2).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid("a(n) must be positive and finite"));
    }
    let decade = horizon - horizon / 10;
    if (decade..=horizon).any(|n| (a[n + 1] / a[n] - 1.0).abs() > KT_RATIO_TOL) {
        return Err(Error::invalid(format!(
            "a(n+1)/a(n) drifts from 1 by more than {KT_RATIO_TOL} over the final decade"
        )));
    }
    let m = x.matrix();
    let mut power_curve = Vec::with_capacity(horizon + 1);
    let mut difference_curve = Vec::with_capacity(horizon + 1);
    let mut p = CMatrix::identity(m.dim());
    for n in 0..=horizon {
        let next = p.mul(m);
        power_curve.push(p.norm2() / a[n]);
        difference_curve.push(next.sub(&p).norm2() / a[n]);
        p = next;
    }
    let half = horizon / 2;
    let head = power_curve[..half].iter().cloned().fold(0.0, f64::max);
    let tail = power_curve[half..].iter().cloned().fold(0.0, f64::max);
    let dominated = tail.is_finite() && tail <= KT_DOMINATION_FACTOR * head.max(f64::MIN_POSITIVE);
    let unimodular: Vec<Complex64> = x
        .spectrum()
        .iter()
        .map(|e| e.value)
        .filter(|z| (z.norm() - 1.0).abs() <= SPECTRUM_TOL)
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let case = if unimodular.is_empty() {
        KtCase::Empty
    } else if unimodular.iter().all(|z| (z - one).norm() <= SPECTRUM_TOL) {
        KtCase::One
    } else {
        KtCase::Other
    };
    let mut report = KtReport {
        horizon,
        case,
        dominated,
        power_curve,
        difference_curve,
        verdict: KtVerdict::NotAsserted,
    };
    report.verdict = if !dominated {
        KtVerdict::NotDominated
    } else if case == KtCase::Other {
        KtVerdict::NotAsserted
    } else {
        let c = report.asserted_curve();
        if c[decade..].iter().all(|&v| v <= KT_DECAY_TOL) {
            KtVerdict::DecayConfirmed
        } else {
            KtVerdict::DecayNotObserved
        }
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupNilpotencyReport {
    pub order: usize,
    pub frequency: f64,
    pub horizon: f64,
    /// `sup_t ‖e^{tA}‖ / (1+|t|)^N` over the samples.
    pub sup_ratio: f64,
    pub tail_slope: f64,
    pub dominated: bool,
    pub spectrum_is_is: bool,
    /// `‖(A − is)^{N+1}‖ / max(1,‖A‖)^{N+1}`
    pub nilpotency_defect: f64,
    pub nilpotent: bool,
    pub consistent: bool,
    /// `(t, ‖e^{tA}‖)` on an even grid over `[-horizon, horizon]`.
    pub curve: Vec<(f64, f64)>,
}

/// Growth of `e^{tA}` against `(1+|t|)^N` and the spectral condition `σ(A) = {is}`.
pub fn group_nilpotency_check(
    a: &MatrixOp,
    order: usize,
    frequency: f64,
    horizon: f64,
) -> Result<GroupNilpotencyReport> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::invalid("horizon must be positive"));
    }
    let m = a.matrix();
    let n = GROUP_SAMPLES;
    let mut curve = Vec::with_capacity(n);
    for k in 0..n {
        let t = -horizon + 2.0 * horizon * k as f64 / (n - 1) as f64;
        let norm = match expm(&m.scale(Complex64::new(t, 0.0))) {
            Ok(e) if e.is_finite() => e.norm2(),
            _ => f64::INFINITY,
        };
        curve.push((t, norm));
    }
    let nf = order as i32;
    let sup_ratio = curve.iter().map(|&(t, v)| v / (1.0 + t.abs()).powi(nf)).fold(0.0, f64::max);
    let tail: Vec<(f64, f64)> = curve
        .iter()
        .filter(|p| p.0.abs() >= horizon / 2.0)
        .map(|&(t, v)| (1.0 + t.abs(), v))
        .collect();
    let tail_slope = if tail.iter().any(|p| !p.1.is_finite()) { f64::INFINITY } else { loglog_slope(&tail) };
    let dominated = sup_ratio.is_finite() && tail_slope <= order as f64 + SLOPE_MARGIN;
    let is = Complex64::new(0.0, frequency);
    let nilpotency_defect = relative_power_norm(m, is, order + 1)?;
    let nilpotent = nilpotency_defect <= NILPOTENT_TOL;
    let spectrum_is_is = spectrum_is_point(a, is);
    Ok(GroupNilpotencyReport {
        order,
        frequency,
        horizon,
        sup_ratio,
        tail_slope,
        dominated,
        spectrum_is_is,
        nilpotency_defect,
        nilpotent,
        consistent: !(dominated && spectrum_is_is) || nilpotent,
        curve,
    })
}
