//! Trigonometric polynomials with polynomial coefficients, Bohr coefficients,
//! the split of a `w_N`-almost periodic signal into `t^N ψ` plus a decaying
//! part, ε-periods, and the slowly converging cosine series whose second
//! primitive grows like `|t|` without being `w_1`-almost periodic.

pub(crate) mod clean;
mod series;

pub use clean::{FreqGrid, DYNAMIC_RANGE_FLOOR, MEDIAN_FACTOR};
pub use series::{example_7_13, nonmembership_surrogate, BoundReport, BoundRow, Example713, NonMembership};

use crate::cjson;
use crate::domain::{reduce_angle, Domain};
use crate::error::{Error, Result};
use crate::polycalc::{norm, GroupPoly, Signal};
use clean::{Engine, Segment};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Frequencies closer than this are the same character.
pub const FREQ_MERGE_TOL: f64 = 1e-12;

/// `Σ_j e^{i s_j t} p_j(t)`, kept sorted by frequency with distinct frequencies
/// and nonzero coefficients. On `Z` frequencies live in `(-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    domain: Domain,
    dim: usize,
    terms: Vec<(f64, GroupPoly)>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    freq: f64,
    #[serde(with = "cjson::complex_rows")]
    coeffs: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolyJson {
    domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    terms: Vec<TermJson>,
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TrigPolyJson {
            domain: self.domain,
            dim: Some(self.dim),
            terms: self
                .terms
                .iter()
                .map(|(f, p)| TermJson { freq: *f, coeffs: p.coeffs().to_vec() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TrigPolyJson::deserialize(d)?;
        let dim = raw
            .dim
            .or_else(|| raw.terms.iter().flat_map(|t| t.coeffs.first()).map(Vec::len).next())
            .unwrap_or(1);
        let terms = raw
            .terms
            .into_iter()
            .map(|t| GroupPoly::new(raw.domain, dim, t.coeffs).map(|p| (t.freq, p)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        TrigPoly::new(raw.domain, dim, terms).map_err(serde::de::Error::custom)
    }
}

impl TrigPoly {
    pub fn new(domain: Domain, dim: usize, terms: Vec<(f64, GroupPoly)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        let mut reduced: Vec<(f64, GroupPoly)> = Vec::new();
        for (s, p) in terms {
            if !s.is_finite() {
                return Err(Error::invalid("frequencies must be finite"));
            }
            if p.dim() != dim || p.domain() != domain {
                return Err(Error::invalid("coefficient polynomial does not match the trigonometric polynomial"));
            }
            let s = if domain == Domain::IntegerLine { reduce_angle(s) } else { s };
            match reduced.iter_mut().find(|(f, _)| freq_eq(*f, s, domain)) {
                Some((_, q)) => *q = q.add(&p)?,
                None => reduced.push((s, p)),
            }
        }
        reduced.retain(|(_, p)| !p.is_zero());
        reduced.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(TrigPoly { domain, dim, terms: reduced })
    }

    /// Constant-coefficient scalar trigonometric polynomial.
    pub fn from_pairs(domain: Domain, pairs: &[(f64, Complex64)]) -> Result<Self> {
        let terms = pairs.iter().map(|&(s, c)| (s, GroupPoly::scalar(domain, &[c]))).collect();
        Self::new(domain, 1, terms)
    }

    pub fn zero(domain: Domain, dim: usize) -> Self {
        TrigPoly { domain, dim, terms: vec![] }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(f64, GroupPoly)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn eval(&self, t: f64) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        for (s, p) in &self.terms {
            let e = Complex64::new(0.0, s * t).exp();
            for (a, c) in acc.iter_mut().zip(p.eval(t)) {
                *a += e * c;
            }
        }
        acc
    }

    /// Termwise derivative `(e^{ist} p)' = e^{ist}(i s p + p')`; real line only.
    pub fn derivative(&self) -> Result<Self> {
        if self.domain != Domain::RealLine {
            return Err(Error::invalid("derivatives are taken on the real line"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(s, p)| Ok((*s, p.scale(Complex64::new(0.0, *s)).add(&p.derivative())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.domain, self.dim, terms)
    }

    /// Multiply by the character `e^{ist}`.
    pub fn modulate(&self, s: f64) -> Result<Self> {
        let terms = self.terms.iter().map(|(f, p)| (f + s, p.clone())).collect();
        Self::new(self.domain, self.dim, terms)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain || self.dim != other.dim {
            return Err(Error::invalid("trigonometric polynomials live on different spaces"));
        }
        Self::new(self.domain, self.dim, self.terms.iter().chain(&other.terms).cloned().collect())
    }

    /// Samples on `start + i*step`, `i < len`.
    pub fn sample(&self, start: f64, step: f64, len: usize) -> Result<Signal> {
        Signal::from_vec_fn(self.domain, start, step, len, self.dim, |t| self.eval(t))
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }
}

fn freq_eq(a: f64, b: f64, domain: Domain) -> bool {
    let d = match domain {
        Domain::IntegerLine => reduce_angle(a - b),
        Domain::RealLine => a - b,
    };
    d.abs() <= FREQ_MERGE_TOL * (1.0 + a.abs())
}

pub fn eval_trigpoly(p: &TrigPoly, t: f64) -> Vec<Complex64> {
    p.eval(t)
}

/// Symmetric average `(1/(2L+1)) Σ_{|t|<=L} e^{-ist} φ(t)`; on `R` the trapezoid
/// mean over `[-L, L]`.
pub fn bohr_coefficient(phi: &Signal, s: f64, l: f64) -> Result<Vec<Complex64>> {
    if !(l > 0.0) {
        return Err(Error::invalid("averaging length must be positive"));
    }
    let short = || Error::WindowTooShort {
        needed: (2.0 * l / phi.step()).round() as usize + 1,
        available: phi.len(),
    };
    let i0 = phi.index_of(-l).ok_or_else(short)?;
    let i1 = phi.index_of(l).ok_or_else(short)?;
    let dim = phi.dim();
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    let mut wsum = 0.0;
    for i in i0..=i1 {
        let wt = match phi.domain() {
            Domain::IntegerLine => 1.0,
            Domain::RealLine if i == i0 || i == i1 => 0.5,
            Domain::RealLine => 1.0,
        };
        let e = Complex64::new(0.0, -s * phi.time(i)).exp() * wt;
        for (a, v) in acc.iter_mut().zip(phi.sample(i)) {
            *a += v * e;
        }
        wsum += wt;
    }
    Ok(acc.into_iter().map(|z| z / wsum).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct APDecomposition {
    #[serde(rename = "N")]
    pub n: usize,
    pub psi: TrigPoly,
    /// `sup ‖φ(t) − t^N ψ(t)‖ / (1+|t|)^N` over the tail region.
    pub xi_tail_sup: f64,
    /// `sup ‖ψ‖` over the window.
    pub psi_sup: f64,
    /// `sup ‖φ(t)‖ / (1+|t|)^N` over the window.
    pub phi_weighted_sup: f64,
    pub threshold: f64,
    pub grid: FreqGrid,
    pub tail_start: f64,
}

impl APDecomposition {
    /// `psi_sup <= ‖φ‖_{w_N,∞} + slack`.
    pub fn norm_inequality_holds(&self, slack: f64) -> bool {
        self.psi_sup <= self.phi_weighted_sup + slack
    }
}

/// Split `φ ≈ t^N ψ + ξ` with `ψ` a constant-coefficient trigonometric polynomial,
/// estimated from `g = φ / t^N` on `|t| >= tail_start * T`.
///
/// `threshold = None` uses the scan noise floor.
pub fn decompose_ap_w(
    phi: &Signal,
    n: usize,
    grid: Option<FreqGrid>,
    threshold: Option<f64>,
    tail_start: f64,
) -> Result<APDecomposition> {
    let radius = phi.end();
    if radius <= 0.0 || (phi.start() + radius).abs() > 1e-9 * phi.step().max(radius) {
        return Err(Error::invalid("window must be symmetric about 0"));
    }
    if !(0.0..1.0).contains(&tail_start) {
        return Err(Error::invalid("tail start must be a fraction in [0, 1)"));
    }
    if n > 0 && tail_start * radius < phi.step() {
        return Err(Error::invalid("the tail region must exclude a neighbourhood of 0 when N > 0"));
    }
    let cut = tail_start * radius;
    let dim = phi.dim();
    let in_tail = |t: f64| t.abs() >= cut - 1e-9 * phi.step();
    let ranges: Vec<Vec<usize>> = if cut == 0.0 {
        vec![(0..phi.len()).collect()]
    } else {
        vec![
            (0..phi.len()).filter(|&i| phi.time(i) < 0.0 && in_tail(phi.time(i))).collect(),
            (0..phi.len()).filter(|&i| phi.time(i) > 0.0 && in_tail(phi.time(i))).collect(),
        ]
    };
    let segments: Vec<Segment> = ranges
        .into_iter()
        .filter(|idx| !idx.is_empty())
        .map(|idx| {
            let values = idx
                .iter()
                .flat_map(|&i| {
                    let d = phi.time(i).powi(n as i32);
                    phi.sample(i).iter().map(move |z| z / d)
                })
                .collect();
            Segment::new(phi.time(idx[0]), phi.step(), dim, values)
        })
        .collect();
    let tail_len: usize = phi.times().filter(|&t| in_tail(t)).count();
    let grid = grid.unwrap_or_else(|| FreqGrid::full(phi.step(), tail_len));
    let res = Engine::new(phi.domain(), segments)?.run(&grid, threshold)?;
    let terms = res
        .components
        .iter()
        .map(|c| Ok((c.freq, GroupPoly::new(phi.domain(), dim, vec![c.coeff.clone()])?)))
        .collect::<Result<Vec<_>>>()?;
    let psi = TrigPoly::new(phi.domain(), dim, terms)?;

    let mut xi_tail_sup: f64 = 0.0;
    let mut psi_sup: f64 = 0.0;
    let mut phi_weighted_sup: f64 = 0.0;
    for i in 0..phi.len() {
        let t = phi.time(i);
        let p = psi.eval(t);
        let wn = (1.0 + t.abs()).powi(n as i32);
        psi_sup = psi_sup.max(norm(&p));
        phi_weighted_sup = phi_weighted_sup.max(norm(phi.sample(i)) / wn);
        if in_tail(t) {
            let tn = t.powi(n as i32);
            let r: Vec<Complex64> = phi.sample(i).iter().zip(&p).map(|(x, y)| x - y * tn).collect();
            xi_tail_sup = xi_tail_sup.max(norm(&r) / wn);
        }
    }
    Ok(APDecomposition {
        n,
        psi,
        xi_tail_sup,
        psi_sup,
        phi_weighted_sup,
        threshold: res.threshold,
        grid,
        tail_start,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPeriods {
    /// Nonnegative periods in increasing order; `0` is always present.
    pub periods: Vec<f64>,
    /// Largest gap between consecutive periods, including the gap from the last
    /// period to the end of the searched range.
    pub max_gap: f64,
    /// Largest shift searched.
    pub range: f64,
}

/// Lattice shifts `τ` with `sup_t ‖φ(t+τ) − φ(t)‖ <= ε` over the overlap, for
/// `0 <= τ <= T/2` where `T` is the window length. Periods are symmetric in sign.
pub fn epsilon_periods(phi: &Signal, eps: f64) -> Result<EpsilonPeriods> {
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let n = phi.len();
    let dim = phi.dim();
    let k_max = n / 2;
    let raw = phi.raw();
    let eps2 = eps * eps;
    let mut periods = vec![0.0];
    for k in 1..=k_max {
        let ok = (0..n - k).all(|i| {
            let d: f64 = (0..dim).map(|c| (raw[(i + k) * dim + c] - raw[i * dim + c]).norm_sqr()).sum();
            d <= eps2
        });
        if ok {
            periods.push(k as f64 * phi.step());
        }
    }
    let range = k_max as f64 * phi.step();
    let mut max_gap = periods.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    max_gap = max_gap.max(range - periods.last().copied().unwrap_or(0.0));
    Ok(EpsilonPeriods { periods, max_gap, range })
}
