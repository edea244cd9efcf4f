//! Spectra of trigonometric polynomials, spectral estimation from samples,
//! and finitely supported band-pass kernels.
//!
//! The spectrum of a stored [`TrigPoly`] is exactly its frequency set. For
//! sampled data [`sp_estimate`] is a surrogate: it reports the characters of
//! `φ/w` found on the trailing half of the window, which identifies the atoms
//! of signals made of a trigonometric polynomial dominated by `w` plus a
//! `w`-decaying perturbation.

use crate::almostper::clean::{Engine, Segment};
use crate::almostper::{FreqGrid, TrigPoly};
use crate::cjson;
use crate::domain::{reduce_angle, Domain};
use crate::error::{Error, Result};
use crate::ergodic::divide_by_weight;
use crate::polycalc::{GroupPoly, Signal};
use crate::weights::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Kernels longer than this are rejected as infeasible.
pub const MAX_TAPS: usize = 1 << 20;

/// Minimum sample count for [`sp_estimate`].
pub const MIN_ESTIMATE_WINDOW: usize = 1000;

/// Finitely supported kernel; tap `j` sits at time `(j - offset) * step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingKernel {
    pub domain: Domain,
    pub step: f64,
    pub offset: usize,
    #[serde(with = "cjson::complex_vec")]
    pub taps: Vec<Complex64>,
    pub center: f64,
    pub bandwidth: f64,
    pub quality: u32,
    pub weight: Weight,
    /// `Σ |f(t_j)| w(t_j)`
    pub l1_w_norm: f64,
}

impl SmoothingKernel {
    pub fn tap_time(&self, j: usize) -> f64 {
        (j as f64 - self.offset as f64) * self.step
    }

    /// `f̂(s) = Σ_j f_j e^{-i s t_j}`
    pub fn transfer(&self, s: f64) -> Complex64 {
        self.taps
            .iter()
            .enumerate()
            .map(|(j, &f)| f * Complex64::new(0.0, -s * self.tap_time(j)).exp())
            .sum()
    }

    /// Whether `s` lies in the pass band `|s - center| < bandwidth/2` (periodically on the lattice).
    pub fn in_band(&self, s: f64) -> bool {
        let period = 2.0 * PI / self.step;
        let d = (s - self.center).rem_euclid(period);
        let d = d.min(period - d);
        d < 0.5 * self.bandwidth
    }

    /// The unit impulse at 0.
    pub fn impulse(domain: Domain, step: f64, weight: Weight) -> Result<Self> {
        let l1 = weight.eval(0.0)?;
        Ok(SmoothingKernel {
            domain,
            step,
            offset: 0,
            taps: vec![Complex64::new(1.0, 0.0)],
            center: 0.0,
            bandwidth: 2.0 * PI / step,
            quality: u32::MAX,
            weight,
            l1_w_norm: l1,
        })
    }
}

fn convolve_real(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Modulated `p`-fold power of a Fejér kernel of order `M`.
///
/// The transfer function is `F̂_M(s - c)^p ≥ 0`, equal to 1 at the center, and
/// at most `(M sin(bw/4))^{-2p} <= 10^{-quality}` off the band.
pub fn make_bandpass(
    domain: Domain,
    step: f64,
    center: f64,
    bandwidth: f64,
    w: &Weight,
    quality: u32,
) -> Result<SmoothingKernel> {
    if !(bandwidth > 0.0) || !(step > 0.0) {
        return Err(Error::invalid("bandwidth and step must be positive"));
    }
    if domain == Domain::IntegerLine && step != 1.0 {
        return Err(Error::invalid("integer-line kernels use step 1"));
    }
    // Normalised (per-sample) bandwidth.
    let nbw = bandwidth * step;
    let center = if domain == Domain::IntegerLine { reduce_angle(center) } else { center };
    if nbw >= 2.0 * PI {
        let mut k = SmoothingKernel::impulse(domain, step, w.clone())?;
        k.center = center;
        k.bandwidth = bandwidth;
        k.quality = quality;
        return Ok(k);
    }
    let m = (8.0 * PI / nbw).ceil() as usize;
    let floor = m as f64 * (nbw / 4.0).sin();
    let p = ((quality as f64) / (2.0 * floor.log10())).ceil().max(1.0) as usize;
    let support = p * (2 * m - 2) + 1;
    if support > MAX_TAPS {
        return Err(Error::Infeasible(format!(
            "kernel would need {support} taps (limit {MAX_TAPS}) for quality {quality} at bandwidth {bandwidth}"
        )));
    }
    let fejer: Vec<f64> = (0..2 * m - 1)
        .map(|i| (m as f64 - (i as f64 - (m - 1) as f64).abs()) / (m * m) as f64)
        .collect();
    let mut base = vec![1.0];
    for _ in 0..p {
        base = convolve_real(&base, &fejer);
    }
    let offset = p * (m - 1);
    let taps: Vec<Complex64> = base
        .iter()
        .enumerate()
        .map(|(j, &x)| x * Complex64::new(0.0, center * (j as f64 - offset as f64) * step).exp())
        .collect();
    let mut l1 = 0.0;
    for (j, z) in taps.iter().enumerate() {
        l1 += z.norm() * w.eval((j as f64 - offset as f64) * step)?;
    }
    Ok(SmoothingKernel {
        domain,
        step,
        offset,
        taps,
        center,
        bandwidth,
        quality,
        weight: w.clone(),
        l1_w_norm: l1,
    })
}

/// `(φ∗f)(t) = Σ_j f_j φ(t - t_j)` on the interior where every shift is sampled.
pub fn convolve(phi: &Signal, f: &SmoothingKernel) -> Result<Signal> {
    if phi.domain() != f.domain || (phi.step() - f.step).abs() > 1e-12 * f.step {
        return Err(Error::invalid("kernel and signal live on different lattices"));
    }
    let (n, l, dim) = (phi.len(), f.taps.len(), phi.dim());
    if l > n {
        return Err(Error::WindowTooShort { needed: l, available: n });
    }
    let out_len = n - l + 1;
    let mut values = vec![Complex64::new(0.0, 0.0); out_len * dim];
    // Output sample i sits at start + (i + l - 1 - offset) step and reads
    // φ at index i + l - 1 - j for tap j.
    for i in 0..out_len {
        for (j, &fj) in f.taps.iter().enumerate() {
            let src = phi.sample(i + l - 1 - j);
            for c in 0..dim {
                values[i * dim + c] += fj * src[c];
            }
        }
    }
    let start = phi.start() + (l - 1 - f.offset) as f64 * phi.step();
    Signal::new(phi.domain(), start, phi.step(), dim, values)
}

/// Exact `π∗f`: `(γ_s p)∗f = γ_s q` with `q(t) = Σ_j f_j e^{-is t_j} p(t - t_j)`.
/// Terms whose coefficients fall to at most `drop_tol` are removed.
pub fn convolve_trigpoly(pi: &TrigPoly, f: &SmoothingKernel, drop_tol: f64) -> Result<TrigPoly> {
    if pi.domain() != f.domain {
        return Err(Error::invalid("kernel and trigonometric polynomial live on different groups"));
    }
    let dim = pi.dim();
    let mut terms = Vec::new();
    for (s, p) in pi.terms() {
        let deg = p.degree();
        // μ_r = Σ_j f_j e^{-is t_j} (-t_j)^r
        let mu: Vec<Complex64> = (0..=deg)
            .map(|r| {
                f.taps
                    .iter()
                    .enumerate()
                    .map(|(j, &fj)| {
                        let t = f.tap_time(j);
                        fj * Complex64::new(0.0, -s * t).exp() * (-t).powi(r as i32)
                    })
                    .sum()
            })
            .collect();
        let mut q = vec![vec![Complex64::new(0.0, 0.0); dim]; deg + 1];
        for (i, ci) in p.coeffs().iter().enumerate() {
            let mut binom = 1.0;
            for (mdeg, qm) in q.iter_mut().enumerate().take(i + 1) {
                for c in 0..dim {
                    qm[c] += ci[c] * mu[i - mdeg] * binom;
                }
                binom = binom * (i - mdeg) as f64 / (mdeg + 1) as f64;
            }
        }
        let q = GroupPoly::new(pi.domain(), dim, q)?;
        if q.coeff_norm() > drop_tol {
            terms.push((*s, q));
        }
    }
    TrigPoly::new(pi.domain(), dim, terms)
}

/// The frequencies of a stored trigonometric polynomial.
pub fn sp_of_trigpoly(pi: &TrigPoly) -> Vec<f64> {
    pi.frequencies()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSpectra {
    pub sp_phi: Vec<f64>,
    pub sp_dphi: Vec<f64>,
    /// `sp(φ') ⊆ sp(φ)`
    pub derivative_inside: bool,
    /// `sp(φ) ⊆ sp(φ') ∪ {0}`
    pub phi_inside_derivative_and_zero: bool,
    pub inclusions_hold: bool,
}

pub fn sp_derivative_relation(pi: &TrigPoly) -> Result<DerivativeSpectra> {
    let d = pi.derivative()?;
    let sp_phi = sp_of_trigpoly(pi);
    let sp_dphi = sp_of_trigpoly(&d);
    let derivative_inside = sp_dphi.iter().all(|s| sp_phi.contains(s));
    let phi_inside_derivative_and_zero = sp_phi.iter().all(|s| *s == 0.0 || sp_dphi.contains(s));
    Ok(DerivativeSpectra {
        inclusions_hold: derivative_inside && phi_inside_derivative_and_zero,
        sp_phi,
        sp_dphi,
        derivative_inside,
        phi_inside_derivative_and_zero,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub freq: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// Sorted by frequency; every mass is at least `threshold`.
    pub atoms: Vec<Atom>,
    pub grid: FreqGrid,
    pub threshold: f64,
    /// Time interval the masses were averaged over.
    pub window: (f64, f64),
}

impl SpectrumEstimate {
    pub fn frequencies(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.freq).collect()
    }
}

/// Bohr masses of `φ/w` on the trailing half of the window.
pub fn sp_estimate(phi: &Signal, w: &Weight, grid: Option<FreqGrid>, threshold: Option<f64>) -> Result<SpectrumEstimate> {
    if phi.len() < MIN_ESTIMATE_WINDOW {
        return Err(Error::WindowTooShort { needed: MIN_ESTIMATE_WINDOW, available: phi.len() });
    }
    let scaled = divide_by_weight(phi, w)?;
    let tail = scaled.slice(scaled.len() / 2, scaled.len())?;
    let grid = grid.unwrap_or_else(|| FreqGrid::full(phi.step(), tail.len()));
    let seg = Segment::new(tail.start(), tail.step(), tail.dim(), tail.raw().to_vec());
    let res = Engine::new(phi.domain(), vec![seg])?.run(&grid, threshold)?;
    let atoms = res.components.iter().map(|c| Atom { freq: c.freq, mass: c.mass() }).collect();
    Ok(SpectrumEstimate { atoms, grid, threshold: res.threshold, window: (tail.start(), tail.end()) })
}
