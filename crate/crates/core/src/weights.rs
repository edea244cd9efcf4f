//! Weight functions on Z or R and finite-grid checks of the weight axioms.
//!
//! A weight is a symmetric function `w >= 1` with `w(s+t) <= w(s) w(t)`. Every
//! closed form here also has an exact logarithm ([`Weight::log_eval`]) so that
//! fast-growing weights can be probed far out without overflow.

use crate::domain::Domain;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Geometric-decay factor required between consecutive dyadic blocks of the
/// Beurling–Domar partial sums.
pub const DOMAR_DECAY_FACTOR: f64 = 0.9;
/// Number of terms in the Beurling–Domar partial sums.
pub const DOMAR_TERMS: u64 = 100_000;
/// Margin in log-log space for growth-order slopes.
pub const SLOPE_MARGIN: f64 = 0.25;
/// Largest growth order considered by [`growth_order`].
pub const GROWTH_ORDER_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum WeightForm {
    /// `(1+|t|)^N`
    #[serde(rename = "poly")]
    PolynomialGrowth {
        #[serde(rename = "N")]
        n: u32,
    },
    /// `(1+|sin t|)(1+|t|)^N`
    #[serde(rename = "sine_modulated")]
    SineModulated {
        #[serde(rename = "N")]
        n: u32,
    },
    /// `exp((1+|t|)^p)`, `0 <= p < 1`
    #[serde(rename = "stretched_exp")]
    StretchedExp { p: f64 },
    /// `exp(1+|t|)`
    #[serde(rename = "exponential")]
    Exponential,
    #[serde(rename = "product")]
    Product { left: Box<Weight>, right: Box<Weight> },
    /// Piecewise-linear interpolation of positive samples on a symmetric grid.
    #[serde(rename = "tabulated")]
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    #[serde(flatten)]
    pub form: WeightForm,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth_order_cache: Option<u32>,
}

impl Weight {
    pub fn new(form: WeightForm, domain: Domain) -> Result<Self> {
        let w = Weight { form, domain, growth_order_cache: None };
        w.validate()?;
        Ok(w)
    }

    /// `w_N(t) = (1+|t|)^N`
    pub fn poly(n: u32, domain: Domain) -> Self {
        Weight { form: WeightForm::PolynomialGrowth { n }, domain, growth_order_cache: Some(n) }
    }

    pub fn sine_modulated(n: u32, domain: Domain) -> Self {
        Weight { form: WeightForm::SineModulated { n }, domain, growth_order_cache: Some(n) }
    }

    pub fn stretched_exp(p: f64, domain: Domain) -> Result<Self> {
        Self::new(WeightForm::StretchedExp { p }, domain)
    }

    pub fn exponential(domain: Domain) -> Self {
        Weight { form: WeightForm::Exponential, domain, growth_order_cache: None }
    }

    pub fn product(left: Weight, right: Weight) -> Result<Self> {
        if left.domain != right.domain {
            return Err(Error::invalid("product factors live on different domains"));
        }
        let domain = left.domain;
        let cache = match (left.growth_order_cache, right.growth_order_cache) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let mut w = Self::new(
            WeightForm::Product { left: Box::new(left), right: Box::new(right) },
            domain,
        )?;
        w.growth_order_cache = cache;
        Ok(w)
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>, domain: Domain) -> Result<Self> {
        Self::new(WeightForm::Tabulated { grid, values }, domain)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: Weight = serde_json::from_str(s).map_err(|e| Error::invalid(format!("weight JSON: {e}")))?;
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.form {
            WeightForm::StretchedExp { p } => {
                if !(0.0..1.0).contains(p) {
                    return Err(Error::invalid(format!("stretched exponent p={p} outside [0,1)")));
                }
            }
            WeightForm::Product { left, right } => {
                if left.domain != self.domain || right.domain != self.domain {
                    return Err(Error::invalid("product factors live on a different domain"));
                }
                left.validate()?;
                right.validate()?;
            }
            WeightForm::Tabulated { grid, values } => {
                if grid.is_empty() || grid.len() != values.len() {
                    return Err(Error::invalid("tabulated weight needs matching nonempty grid and values"));
                }
                if grid.windows(2).any(|p| !(p[0] < p[1])) {
                    return Err(Error::invalid("tabulated grid must be strictly increasing"));
                }
                let n = grid.len();
                for i in 0..n {
                    let (a, b) = (grid[i], grid[n - 1 - i]);
                    if (a + b).abs() > 1e-12 * (1.0 + a.abs()) {
                        return Err(Error::invalid("tabulated grid must be symmetric about 0"));
                    }
                    if (values[i] - values[n - 1 - i]).abs() > 1e-12 * values[i].abs() {
                        return Err(Error::invalid("tabulated values must be symmetric"));
                    }
                    if !(values[i] >= 1.0) {
                        return Err(Error::invalid("tabulated values must be >= 1"));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn check_point(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::invalid("non-finite time point"));
        }
        if self.domain == Domain::IntegerLine && (t - t.round()).abs() > 1e-9 {
            return Err(Error::invalid(format!("{t} is not an integer point")));
        }
        Ok(())
    }

    /// `w(t)`; exact for closed forms, linear interpolation for tabulated weights.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_point(t)?;
        Ok(match &self.form {
            WeightForm::Tabulated { grid, values } => interpolate(grid, values, t)?,
            WeightForm::Product { left, right } => left.eval(t)? * right.eval(t)?,
            WeightForm::PolynomialGrowth { n } => (1.0 + t.abs()).powi(*n as i32),
            WeightForm::SineModulated { n } => (1.0 + t.sin().abs()) * (1.0 + t.abs()).powi(*n as i32),
            _ => self.log_eval_unchecked(t).exp(),
        })
    }

    /// `log w(t)` evaluated without forming `w(t)`.
    pub fn log_eval(&self, t: f64) -> Result<f64> {
        self.check_point(t)?;
        match &self.form {
            WeightForm::Tabulated { grid, values } => Ok(interpolate(grid, values, t)?.ln()),
            WeightForm::Product { left, right } => Ok(left.log_eval(t)? + right.log_eval(t)?),
            _ => Ok(self.log_eval_unchecked(t)),
        }
    }

    fn log_eval_unchecked(&self, t: f64) -> f64 {
        let a = t.abs();
        match &self.form {
            WeightForm::PolynomialGrowth { n } => *n as f64 * a.ln_1p(),
            WeightForm::SineModulated { n } => t.sin().abs().ln_1p() + *n as f64 * a.ln_1p(),
            WeightForm::StretchedExp { p } => (1.0 + a).powf(*p),
            WeightForm::Exponential => 1.0 + a,
            WeightForm::Product { left, right } => {
                left.log_eval_unchecked(t) + right.log_eval_unchecked(t)
            }
            WeightForm::Tabulated { grid, values } => {
                interpolate(grid, values, t).map(f64::ln).unwrap_or(f64::NAN)
            }
        }
    }

    /// Right end of the support (infinite for closed forms).
    pub fn support_radius(&self) -> f64 {
        match &self.form {
            WeightForm::Tabulated { grid, .. } => *grid.last().unwrap_or(&0.0),
            WeightForm::Product { left, right } => left.support_radius().min(right.support_radius()),
            _ => f64::INFINITY,
        }
    }

    /// True when the weight is identically one (only checked structurally).
    pub fn is_trivial(&self) -> bool {
        match &self.form {
            WeightForm::PolynomialGrowth { n } => *n == 0,
            WeightForm::StretchedExp { .. } | WeightForm::Exponential | WeightForm::SineModulated { .. } => false,
            WeightForm::Product { left, right } => left.is_trivial() && right.is_trivial(),
            WeightForm::Tabulated { values, .. } => values.iter().all(|&v| v == 1.0),
        }
    }
}

fn interpolate(grid: &[f64], values: &[f64], t: f64) -> Result<f64> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if t < lo || t > hi {
        return Err(Error::OutOfSupport { t, lo, hi });
    }
    let idx = grid.partition_point(|&g| g <= t);
    if idx == 0 {
        return Ok(values[0]);
    }
    if idx >= grid.len() {
        return Ok(values[grid.len() - 1]);
    }
    let (g0, g1) = (grid[idx - 1], grid[idx]);
    let f = (t - g0) / (g1 - g0);
    Ok(values[idx - 1] * (1.0 - f) + values[idx] * f)
}

/// `±lo, ±(lo+1), …, ±hi` (sorted).
pub fn symmetric_integer_grid(lo: i64, hi: i64) -> Vec<f64> {
    let pos: Vec<f64> = (lo.max(1)..=hi).map(|k| k as f64).collect();
    let mut g: Vec<f64> = pos.iter().rev().map(|&x| -x).collect();
    if lo <= 0 {
        g.push(0.0);
    }
    g.extend(pos);
    g
}

/// `-k*step, …, 0, …, k*step` with `k = floor(radius/step)`.
pub fn symmetric_real_grid(step: f64, radius: f64) -> Vec<f64> {
    let k = (radius / step).floor() as i64;
    (-k..=k).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<f64>,
    pub value: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescription {
    pub points: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomTolerances {
    pub relative: f64,
    pub domar_decay_factor: f64,
    pub domar_terms: u64,
    pub slope_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    pub grid: GridDescription,
    pub tolerances: AxiomTolerances,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn passed(&self, axiom: &str) -> bool {
        self.entry(axiom).map(|e| e.passed).unwrap_or(false)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.passed).map(|e| e.axiom.as_str()).collect()
    }
}

fn entry(axiom: &str, failure: Option<Witness>) -> AxiomEntry {
    AxiomEntry { axiom: axiom.to_string(), passed: failure.is_none(), witness: failure }
}

fn find_point(grid: &[f64], t: f64) -> Option<usize> {
    let tol = 1e-9 * (1.0 + t.abs());
    let i = grid.partition_point(|&g| g < t - tol);
    (i < grid.len() && (grid[i] - t).abs() <= tol).then_some(i)
}

/// Maxima of `f` over four blocks of increasing `|t|`.
fn quartile_maxima(pts: &[(f64, f64)], radius: f64) -> [f64; 4] {
    let mut m = [0.0f64; 4];
    for &(t, v) in pts {
        let b = ((t.abs() / radius) * 4.0).ceil().clamp(1.0, 4.0) as usize - 1;
        m[b] = m[b].max(v);
    }
    m
}

/// Test the weight axioms on a finite symmetric grid.
///
/// Entries are produced in the fixed order `1.1, 1.2, 1.3, 2.1, 2.2, 2.3, 2.4,
/// 2.5, 2.6`; every failure carries a witness.
pub fn check_axioms(w: &Weight, grid: &[f64], tol: f64) -> Result<AxiomReport> {
    if grid.is_empty() {
        return Err(Error::invalid("axiom grid is empty"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut g: Vec<f64> = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    for &t in &g {
        if find_point(&g, -t).is_none() {
            return Err(Error::invalid(format!("grid is not symmetric: {t} has no mirror")));
        }
    }
    let logw: Vec<f64> = g.iter().map(|&t| w.log_eval(t)).collect::<Result<_>>()?;
    let radius = g.iter().fold(0.0f64, |a, &t| a.max(t.abs()));
    let log_slack = tol.ln_1p();
    let mut entries = Vec::with_capacity(9);

    // 1.1: w >= 1 and submultiplicativity on sampled pairs
    let mut fail = None;
    if let Some((i, &lw)) = logw.iter().enumerate().find(|(_, &lw)| lw < -log_slack) {
        fail = Some(Witness { points: vec![g[i]], value: lw.exp(), note: "w(t) < 1".into() });
    }
    if fail.is_none() {
        let stride = (g.len() / 600).max(1);
        let mut worst = (0.0f64, 0.0, 0.0);
        for i in (0..g.len()).step_by(stride) {
            for j in (0..g.len()).step_by(stride) {
                if let Some(k) = find_point(&g, g[i] + g[j]) {
                    let excess = logw[k] - logw[i] - logw[j];
                    if excess > worst.0 {
                        worst = (excess, g[i], g[j]);
                    }
                }
            }
        }
        if worst.0 > log_slack {
            fail = Some(Witness {
                points: vec![worst.1, worst.2],
                value: worst.0.exp(),
                note: "w(s+t) / (w(s) w(t)) exceeds 1 + tol".into(),
            });
        }
    }
    entries.push(entry("1.1", fail));

    // 1.2: symmetry
    let mut fail = None;
    for (i, &t) in g.iter().enumerate() {
        let j = find_point(&g, -t).expect("symmetric grid");
        let d = (logw[i] - logw[j]).abs();
        if d > log_slack {
            fail = Some(Witness { points: vec![t, -t], value: d, note: "|log w(t) - log w(-t)|".into() });
            break;
        }
    }
    entries.push(entry("1.2", fail));

    // 1.3: Beurling–Domar partial sums, judged on dyadic blocks
    let positive: Vec<f64> = g.iter().copied().filter(|&t| t > 0.0).collect();
    let probes: Vec<f64> = if positive.is_empty() {
        vec![]
    } else {
        let mut p = vec![positive[0], positive[positive.len() / 2], positive[positive.len() - 1]];
        p.dedup();
        p
    };
    let mut fail = None;
    for &t in &probes {
        if let Some(wit) = domar_verdict(w, t)? {
            fail = Some(wit);
            break;
        }
    }
    entries.push(entry("1.3", fail));

    // 2.1: w == 1 or 1/w decays towards the grid ends
    let trivial = logw.iter().all(|lw| lw.abs() <= log_slack);
    let mut fail = None;
    if !trivial {
        let pts: Vec<(f64, f64)> = g
            .iter()
            .zip(&logw)
            .filter(|(t, _)| **t != 0.0)
            .map(|(&t, &lw)| (t, (-lw).exp()))
            .collect();
        let m = quartile_maxima(&pts, radius);
        let monotone = m.windows(2).all(|p| p[1] <= p[0] * (1.0 + tol) || p[0] == 0.0);
        if !(monotone && m[3] <= 0.5 * m[0]) {
            fail = Some(Witness {
                points: vec![radius],
                value: m[3],
                note: format!("block maxima of 1/w over |t| quartiles: {m:?}"),
            });
        }
    }
    entries.push(entry("2.1", fail));

    // 2.2: Delta_h w / w decays for several h
    let spacing = positive
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(positive.first().copied().unwrap_or(1.0), f64::min);
    let mut fail = None;
    for mult in [1.0, 2.0, 5.0] {
        let h = spacing * mult;
        let mut pts = Vec::new();
        for (i, &t) in g.iter().enumerate() {
            if let Some(k) = find_point(&g, t + h) {
                pts.push((t, (logw[k] - logw[i]).exp_m1().abs()));
            }
        }
        if pts.is_empty() {
            continue;
        }
        let m = quartile_maxima(&pts, radius);
        let overall = m.iter().fold(0.0f64, |a, &b| a.max(b));
        if overall > tol && m[3] > 0.5 * m[0] {
            fail = Some(Witness {
                points: vec![h],
                value: m[3],
                note: format!("block maxima of |Delta_h w|/w over |t| quartiles: {m:?}"),
            });
            break;
        }
    }
    entries.push(entry("2.2", fail));

    // 2.3: sup |Delta_h w|/w -> 0 as h -> 0 (vacuous on Z)
    let mut fail = None;
    if w.domain == Domain::RealLine {
        let sups: Vec<f64> = [8.0, 4.0, 2.0, 1.0]
            .iter()
            .map(|&mult| {
                let h = spacing * mult;
                g.iter()
                    .enumerate()
                    .filter_map(|(i, &t)| find_point(&g, t + h).map(|k| (logw[k] - logw[i]).exp_m1().abs()))
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let shrinking = sups.windows(2).all(|p| p[1] <= p[0] * (1.0 + tol));
        if sups[0] > tol && !(shrinking && sups[3] <= 0.5 * sups[0]) {
            fail = Some(Witness {
                points: vec![spacing * 8.0, spacing],
                value: sups[3],
                note: format!("sup |Delta_h w|/w for h = 8,4,2,1 grid steps: {sups:?}"),
            });
        }
    }
    entries.push(entry("2.3", fail));

    // 2.4 / 2.5: polynomial growth via the slope diagnostics
    let probe = positive.first().copied().unwrap_or(1.0);
    let m_max = ((w.support_radius() / probe).floor().min(1e4)) as u64;
    let (f24, f25) = if m_max < 16 {
        let wit = Witness { points: vec![probe], value: m_max as f64, note: "support too short for growth probes".into() };
        (Some(wit.clone()), Some(wit))
    } else {
        let s = growth_slopes(w, &[probe], m_max)?;
        let cap_ok = s.upper < GROWTH_ORDER_CAP as f64 + 1.0 - SLOPE_MARGIN;
        let f24 = (!cap_ok).then(|| Witness {
            points: vec![probe],
            value: s.upper,
            note: format!("log-log slope of w(mt) exceeds every order up to {GROWTH_ORDER_CAP}"),
        });
        let n = growth_order(w, &[probe], m_max)?;
        let f25 = match n {
            Some(_) => None,
            None => Some(Witness {
                points: vec![probe],
                value: s.lower,
                note: "no order N with w(mt)/|m|^N bounded below".into(),
            }),
        };
        (f24, f25)
    };
    entries.push(entry("2.4", f24));
    entries.push(entry("2.5", f25));

    // 2.6: nested compact sets with sup inside <= inf outside
    let mut abs_pts: Vec<(f64, f64)> = g.iter().zip(&logw).map(|(&t, &lw)| (t.abs(), lw)).collect();
    abs_pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = abs_pts.len();
    let mut prefix_max = vec![f64::NEG_INFINITY; n];
    let mut acc = f64::NEG_INFINITY;
    for i in 0..n {
        acc = acc.max(abs_pts[i].1);
        prefix_max[i] = acc;
    }
    let mut suffix_min = vec![f64::INFINITY; n + 1];
    for i in (0..n).rev() {
        suffix_min[i] = suffix_min[i + 1].min(abs_pts[i].1);
    }
    // good[i]: K = {|t| <= abs_pts[i].0} works (strictly inside the grid)
    let mut reachable = vec![false; n + 1];
    for i in (0..n).rev() {
        let radius_i = abs_pts[i].0;
        let next_outside = (i + 1..n).find(|&k| abs_pts[k].0 > radius_i);
        let good = match next_outside {
            Some(k) => prefix_max[k - 1] <= suffix_min[k] + log_slack,
            None => false,
        };
        reachable[i] = good || reachable[i + 1];
    }
    let median = abs_pts[n / 2].0;
    let mut fail = None;
    for i in 0..n {
        if abs_pts[i].0 > median {
            break;
        }
        if !reachable[i] {
            fail = Some(Witness {
                points: vec![abs_pts[i].0],
                value: prefix_max[i].exp(),
                note: "no enclosing compact set with sup inside <= inf outside".into(),
            });
            break;
        }
    }
    entries.push(entry("2.6", fail));

    Ok(AxiomReport {
        entries,
        grid: GridDescription { points: g.len(), min: g[0], max: g[g.len() - 1] },
        tolerances: AxiomTolerances {
            relative: tol,
            domar_decay_factor: DOMAR_DECAY_FACTOR,
            domar_terms: DOMAR_TERMS,
            slope_margin: SLOPE_MARGIN,
        },
    })
}

/// Dyadic-block tail test of `sum_{n<=M} n^-2 log w(n t)`; `Some(witness)` when
/// the blocks fail to shrink geometrically.
fn domar_verdict(w: &Weight, t: f64) -> Result<Option<Witness>> {
    let terms = ((w.support_radius() / t).floor().min(DOMAR_TERMS as f64)) as u64;
    let mut blocks = Vec::new();
    let mut partial = 0.0;
    let mut start = 1u64;
    while start * 2 - 1 <= terms {
        let end = start * 2 - 1;
        let b: f64 = (start..=end)
            .map(|n| w.log_eval(n as f64 * t).map(|lw| lw / (n as f64 * n as f64)))
            .sum::<Result<f64>>()?;
        partial += b;
        blocks.push(b);
        start *= 2;
    }
    if blocks.iter().all(|&b| b.abs() <= 1e-300) {
        return Ok(None);
    }
    if blocks.len() < 4 {
        return Ok(Some(Witness {
            points: vec![t],
            value: partial,
            note: "support too short to judge the partial sums".into(),
        }));
    }
    let ratios: Vec<f64> = blocks.windows(2).map(|p| p[1] / p[0]).collect();
    let tail = &ratios[ratios.len().saturating_sub(4)..];
    if tail.iter().all(|&r| r <= DOMAR_DECAY_FACTOR) {
        Ok(None)
    } else {
        Ok(Some(Witness {
            points: vec![t],
            value: partial,
            note: format!(
                "partial sums keep growing: final dyadic block ratios {tail:?} exceed {DOMAR_DECAY_FACTOR}"
            ),
        }))
    }
}

struct GrowthSlopes {
    /// Slope of the block maxima of log w(mt) vs log m (max over probes).
    upper: f64,
    /// Slope of the block minima (max over probes).
    lower: f64,
}

fn growth_slopes(w: &Weight, probes: &[f64], m_max: u64) -> Result<GrowthSlopes> {
    let block = |t: f64, lo: u64, hi: u64| -> Result<(f64, f64)> {
        let mut mx = f64::NEG_INFINITY;
        let mut mn = f64::INFINITY;
        for m in lo..=hi {
            for s in [1.0, -1.0] {
                let lw = w.log_eval(s * m as f64 * t)?;
                mx = mx.max(lw);
                mn = mn.min(lw);
            }
        }
        Ok((mx, mn))
    };
    let mut upper = f64::NEG_INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let m = m_max;
    for &t in probes {
        let (mx1, mn1) = block(t, m / 8, m / 4)?;
        let (mx2, mn2) = block(t, m / 2, m)?;
        upper = upper.max((mx2 - mx1) / 4f64.ln());
        lower = lower.max((mn2 - mn1) / 4f64.ln());
    }
    Ok(GrowthSlopes { upper, lower })
}

/// Smallest order `N` for which `w(mt)/(1+|m|^{N+1})` is seen to decay and
/// `w(mt)/|m|^N` stays bounded below along the probes, up to [`GROWTH_ORDER_CAP`].
pub fn growth_order(w: &Weight, probe: &[f64], m_max: u64) -> Result<Option<u32>> {
    if m_max < 16 {
        return Err(Error::invalid("m_max must be at least 16"));
    }
    if probe.is_empty() {
        return Err(Error::invalid("probe set is empty"));
    }
    let s = growth_slopes(w, probe, m_max)?;
    Ok((0..=GROWTH_ORDER_CAP).find(|&n| {
        let n = n as f64;
        s.upper < n + 1.0 - SLOPE_MARGIN && s.lower >= n - SLOPE_MARGIN
    }))
}

/// Tail-half extrema of `w(t+s)/w(t)`: surrogates for the limsup and liminf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedWeight {
    pub limsup: f64,
    pub liminf: f64,
    pub samples: usize,
}

const REDUCED_SAMPLES: usize = 500_000;

pub fn reduced_weight(w: &Weight, s: f64, horizon: f64) -> Result<ReducedWeight> {
    let lo = horizon / 2.0;
    let ts: Vec<f64> = match w.domain {
        Domain::IntegerLine => {
            let a = lo.ceil() as i64;
            let b = horizon.floor() as i64;
            let count = (b - a + 1).max(0) as usize;
            let stride = count.div_ceil(REDUCED_SAMPLES).max(1);
            (a..=b).step_by(stride).map(|k| k as f64).collect()
        }
        Domain::RealLine => {
            let step = (horizon - lo) / REDUCED_SAMPLES as f64;
            (0..=REDUCED_SAMPLES).map(|i| lo + i as f64 * step).collect()
        }
    };
    if ts.len() < 1000 {
        return Err(Error::invalid("horizon holds fewer than 1000 sample points"));
    }
    let mut limsup = f64::NEG_INFINITY;
    let mut liminf = f64::INFINITY;
    for &t in &ts {
        let r = (w.log_eval(t + s)? - w.log_eval(t)?).exp();
        limsup = limsup.max(r);
        liminf = liminf.min(r);
    }
    Ok(ReducedWeight { limsup, liminf, samples: ts.len() })
}

/// `(1/n) log w(n t)`
pub fn log_growth_rate(w: &Weight, t: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(w.log_eval(n as f64 * t)? / n as f64)
}
