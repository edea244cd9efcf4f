//! Iterative extraction of characters from sampled data.
//!
//! Data are one or more contiguous segments. Each segment carries a Hann taper;
//! the tapered Bohr average at `s` is `Σ h_j g_j e^{-i s t_j} / Σ h_j` over all
//! segments. Peaks are located on an FFT grid, refined by golden-section search
//! on the exact average, and subtracted before the next scan.

use crate::domain::{reduce_angle, Domain};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Frequencies `lo <= s <= hi`, resolved to `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl FreqGrid {
    /// The whole Nyquist band for `sample_step`, at the natural resolution of `len` samples.
    pub fn full(sample_step: f64, len: usize) -> Self {
        let nyq = PI / sample_step;
        FreqGrid { lo: -nyq, hi: nyq, step: 2.0 * PI / (len.max(1) as f64 * sample_step) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.lo <= self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::invalid("frequency grid needs lo <= hi and a positive step"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub t0: f64,
    pub step: f64,
    pub dim: usize,
    pub values: Vec<Complex64>,
    taper: Vec<f64>,
}

impl Segment {
    pub fn new(t0: f64, step: f64, dim: usize, values: Vec<Complex64>) -> Self {
        let n = values.len() / dim;
        let taper = (0..n)
            .map(|j| if n == 1 { 1.0 } else { 0.5 - 0.5 * (2.0 * PI * (j as f64 + 0.5) / n as f64).cos() })
            .collect();
        Segment { t0, step, dim, values, taper }
    }

    fn len(&self) -> usize {
        self.values.len() / self.dim
    }
}

/// A character `coeff * e^{i freq t}` found in the data.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Component {
    pub freq: f64,
    pub coeff: Vec<Complex64>,
}

impl Component {
    pub fn mass(&self) -> f64 {
        self.coeff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CleanResult {
    pub components: Vec<Component>,
    pub threshold: f64,
}

/// Relative floor on the retention threshold, as a fraction of the strongest initial peak.
pub const DYNAMIC_RANGE_FLOOR: f64 = 1e-4;
/// Multiple of the median scanned magnitude used as the default noise floor.
pub const MEDIAN_FACTOR: f64 = 5.0;
const MAX_COMPONENTS: usize = 256;

pub(crate) struct Engine {
    domain: Domain,
    segments: Vec<Segment>,
    dim: usize,
    total_taper: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Engine {
    pub fn new(domain: Domain, segments: Vec<Segment>) -> Result<Self> {
        let dim = segments.first().ok_or_else(|| Error::invalid("no data segments"))?.dim;
        if segments.iter().any(|s| s.dim != dim || s.len() == 0) {
            return Err(Error::invalid("segments must share a dimension and be nonempty"));
        }
        let step = segments[0].step;
        if segments.iter().any(|s| (s.step - step).abs() > 1e-12 * step) {
            return Err(Error::invalid("segments must share a sample step"));
        }
        let total_taper = segments.iter().flat_map(|s| s.taper.iter()).sum();
        Ok(Engine { domain, segments, dim, total_taper })
    }

    fn step(&self) -> f64 {
        self.segments[0].step
    }

    fn reduce(&self, s: f64) -> f64 {
        match self.domain {
            Domain::IntegerLine => reduce_angle(s),
            Domain::RealLine => s,
        }
    }

    /// Tapered Bohr average at `s`.
    pub fn coefficient(&self, s: f64) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        for seg in &self.segments {
            for j in 0..seg.len() {
                let t = seg.t0 + j as f64 * seg.step;
                let (sn, cs) = (s * t).sin_cos();
                let e = Complex64::new(cs, -sn) * seg.taper[j];
                for (a, v) in acc.iter_mut().zip(&seg.values[j * self.dim..(j + 1) * self.dim]) {
                    *a += v * e;
                }
            }
        }
        acc.iter().map(|z| z / self.total_taper).collect()
    }

    fn subtract(&mut self, comp: &Component) {
        for seg in &mut self.segments {
            for j in 0..seg.len() {
                let t = seg.t0 + j as f64 * seg.step;
                let (sn, cs) = (comp.freq * t).sin_cos();
                let e = Complex64::new(cs, sn);
                for (v, a) in seg.values[j * seg.dim..(j + 1) * seg.dim].iter_mut().zip(&comp.coeff) {
                    *v -= a * e;
                }
            }
        }
    }

    /// FFT size resolving `grid.step` and holding the longest segment.
    fn fft_size(&self, grid: &FreqGrid) -> usize {
        let longest = self.segments.iter().map(Segment::len).max().unwrap_or(1);
        let resolve = (2.0 * PI / (self.step() * grid.step)).ceil() as usize;
        longest.max(resolve).max(16).next_power_of_two()
    }

    /// Magnitudes on the FFT grid, as `(frequency, magnitude)` inside `grid`.
    fn scan(&self, grid: &FreqGrid, m: usize) -> Vec<(f64, f64)> {
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);
        let bin = 2.0 * PI / (m as f64 * self.step());
        let mut total = vec![vec![Complex64::new(0.0, 0.0); m]; self.dim];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for seg in &self.segments {
            for (c, tot) in total.iter_mut().enumerate() {
                buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for j in 0..seg.len() {
                    buf[j] = seg.values[j * seg.dim + c] * seg.taper[j];
                }
                fft.process(&mut buf);
                for (k, (t, x)) in tot.iter_mut().zip(&buf).enumerate() {
                    let (sn, cs) = (k as f64 * bin * seg.t0).sin_cos();
                    *t += x * Complex64::new(cs, -sn);
                }
            }
        }
        let period = 2.0 * PI / self.step();
        let mut out = Vec::new();
        for k in 0..m {
            let mut s = k as f64 * bin;
            if s > 0.5 * period {
                s -= period;
            }
            if s < grid.lo - 1e-12 || s > grid.hi + 1e-12 {
                continue;
            }
            let mag = total.iter().map(|col| col[k].norm_sqr()).sum::<f64>().sqrt() / self.total_taper;
            out.push((s, mag));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Maximize `|coefficient|` on `[a, b]` by golden-section search.
    fn refine(&self, mut a: f64, mut b: f64) -> f64 {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |s: f64| norm(&self.coefficient(s));
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..60 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1);
            }
            if b - a <= 1e-13 * (1.0 + a.abs()) {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// Extract components until the strongest remaining peak drops below the threshold.
    ///
    /// Components closer than `grid.step` are merged at their mass-weighted centroid.
    pub fn run(mut self, grid: &FreqGrid, threshold: Option<f64>) -> Result<CleanResult> {
        grid.validate()?;
        let m = self.fft_size(grid);
        let bin = 2.0 * PI / (m as f64 * self.step());
        let first = self.scan(grid, m);
        if first.is_empty() {
            return Err(Error::invalid("frequency grid selects no scan points"));
        }
        let peak0 = first.iter().map(|p| p.1).fold(0.0, f64::max);
        let threshold = match threshold {
            Some(t) => t,
            None => {
                let mut mags: Vec<f64> = first.iter().map(|p| p.1).collect();
                mags.sort_by(f64::total_cmp);
                (MEDIAN_FACTOR * mags[mags.len() / 2]).max(DYNAMIC_RANGE_FLOOR * peak0)
            }
        };
        let mut comps: Vec<Component> = Vec::new();
        let mut scan = first;
        for _ in 0..MAX_COMPONENTS {
            let Some(&(s0, mag)) = scan.iter().max_by(|a, b| a.1.total_cmp(&b.1)) else { break };
            if mag < threshold || mag == 0.0 {
                break;
            }
            let s = self.refine((s0 - bin).max(grid.lo), (s0 + bin).min(grid.hi));
            let coeff = self.coefficient(s);
            if norm(&coeff) < threshold {
                break;
            }
            let comp = Component { freq: s, coeff };
            self.subtract(&comp);
            comps.push(comp);
            scan = self.scan(grid, m);
        }
        let mut merged = merge(comps, grid.step);
        let reduce = |s: f64| self.reduce(s);
        for c in &mut merged {
            c.freq = reduce(c.freq);
        }
        merged.retain(|c| c.mass() >= threshold);
        merged.sort_by(|a, b| a.freq.total_cmp(&b.freq));
        Ok(CleanResult { components: merged, threshold })
    }
}

fn merge(comps: Vec<Component>, tol: f64) -> Vec<Component> {
    let mut out: Vec<(Component, f64)> = Vec::new();
    for c in comps {
        let m = c.mass();
        if let Some((acc, wsum)) = out.iter_mut().find(|(a, _)| (a.freq - c.freq).abs() < tol) {
            acc.freq = (acc.freq * *wsum + c.freq * m) / (*wsum + m).max(f64::MIN_POSITIVE);
            *wsum += m;
            for (x, y) in acc.coeff.iter_mut().zip(&c.coeff) {
                *x += y;
            }
        } else {
            out.push((c, m));
        }
    }
    out.into_iter().map(|(c, _)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone_segment(freqs: &[(f64, Complex64)], t0: f64, step: f64, n: usize) -> Segment {
        let vals = (0..n)
            .map(|j| {
                let t = t0 + j as f64 * step;
                freqs.iter().map(|&(s, a)| a * Complex64::new(0.0, s * t).exp()).sum()
            })
            .collect();
        Segment::new(t0, step, 1, vals)
    }

    #[test]
    fn recovers_two_tones_on_integer_line() {
        let tones = [(0.7, Complex64::new(1.0, 0.5)), (-2.1, Complex64::new(0.0, -0.3))];
        let eng = Engine::new(Domain::IntegerLine, vec![tone_segment(&tones, 100.0, 1.0, 5000)]).unwrap();
        let grid = FreqGrid { lo: -PI, hi: PI, step: 1e-3 };
        let res = eng.run(&grid, None).unwrap();
        assert_eq!(res.components.len(), 2);
        assert!((res.components[0].freq + 2.1).abs() < 1e-6);
        assert!((res.components[1].freq - 0.7).abs() < 1e-6);
        assert!((res.components[1].coeff[0] - tones[0].1).norm() < 1e-6);
    }

    #[test]
    fn split_segments_share_phase() {
        let tones = [(1.3, Complex64::new(0.2, 0.9))];
        let segs = vec![tone_segment(&tones, -400.0, 0.05, 4000), tone_segment(&tones, 200.0, 0.05, 4000)];
        let eng = Engine::new(Domain::RealLine, segs).unwrap();
        let grid = FreqGrid { lo: -5.0, hi: 5.0, step: 1e-3 };
        let res = eng.run(&grid, Some(0.05)).unwrap();
        assert_eq!(res.components.len(), 1);
        assert!((res.components[0].coeff[0] - tones[0].1).norm() < 1e-6);
    }

    #[test]
    fn zero_data_has_no_components() {
        let eng = Engine::new(Domain::IntegerLine, vec![Segment::new(0.0, 1.0, 1, vec![Complex64::new(0.0, 0.0); 512])]).unwrap();
        let res = eng.run(&FreqGrid::full(1.0, 512), None).unwrap();
        assert!(res.components.is_empty());
    }
}
