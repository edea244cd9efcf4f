use crate::cjson;
use crate::domain::Domain;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A finite window of a vector-valued function sampled on `start + i*step`.
///
/// Samples are stored flat: sample `i` occupies `values[i*dim .. (i+1)*dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    domain: Domain,
    start: f64,
    step: f64,
    dim: usize,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SignalJson {
    domain: Domain,
    start: f64,
    step: f64,
    dim: usize,
    #[serde(with = "cjson::complex_rows")]
    values: Vec<Vec<Complex64>>,
}

impl Serialize for Signal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignalJson {
            domain: self.domain,
            start: self.start,
            step: self.step,
            dim: self.dim,
            values: (0..self.len()).map(|i| self.sample(i).to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Signal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SignalJson::deserialize(d)?;
        if raw.values.iter().any(|r| r.len() != raw.dim) {
            return Err(serde::de::Error::custom("every sample must have `dim` entries"));
        }
        let flat = raw.values.into_iter().flatten().collect();
        Signal::new(raw.domain, raw.start, raw.step, raw.dim, flat).map_err(serde::de::Error::custom)
    }
}

impl Signal {
    pub fn new(domain: Domain, start: f64, step: f64, dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("signal dimension must be at least 1"));
        }
        if values.is_empty() || values.len() % dim != 0 {
            return Err(Error::invalid("signal needs a nonempty whole number of samples"));
        }
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::invalid("signal step must be positive and start finite"));
        }
        if domain == Domain::IntegerLine && (step != 1.0 || start.fract() != 0.0) {
            return Err(Error::invalid("integer-line signals need step 1 and an integer start"));
        }
        Ok(Signal { domain, start, step, dim, values })
    }

    /// Scalar signal from a closure over sample times.
    pub fn from_fn(domain: Domain, start: f64, step: f64, len: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..len).map(|i| f(start + i as f64 * step)).collect();
        Self::new(domain, start, step, 1, values)
    }

    /// Real scalar signal from a closure over sample times.
    pub fn from_real_fn(domain: Domain, start: f64, step: f64, len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(domain, start, step, len, |t| Complex64::new(f(t), 0.0))
    }

    /// Vector-valued signal from a closure returning `dim` components.
    pub fn from_vec_fn(
        domain: Domain,
        start: f64,
        step: f64,
        len: usize,
        dim: usize,
        f: impl Fn(f64) -> Vec<Complex64>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(len * dim);
        for i in 0..len {
            let v = f(start + i as f64 * step);
            if v.len() != dim {
                return Err(Error::invalid("closure returned the wrong dimension"));
            }
            values.extend(v);
        }
        Self::new(domain, start, step, dim, values)
    }

    /// Real scalar samples on the integer window starting at `start`.
    pub fn integer(start: i64, values: &[f64]) -> Result<Self> {
        Self::new(
            Domain::IntegerLine,
            start as f64,
            1.0,
            1,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.time(i))
    }

    pub fn sample(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// First component of sample `i`.
    pub fn scalar(&self, i: usize) -> Complex64 {
        self.values[i * self.dim]
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.values
    }

    /// Component `c` as a contiguous vector.
    pub fn component(&self, c: usize) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.values[i * self.dim + c]).collect()
    }

    /// Index of the sample at time `t`, if `t` is on the lattice and inside the window.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = (t - self.start) / self.step;
        let k = x.round();
        if (x - k).abs() > 1e-9 * (1.0 + x.abs()) || k < 0.0 || k as usize >= self.len() {
            return None;
        }
        Some(k as usize)
    }

    /// Convert a shift `h` into a whole number of lattice steps.
    pub fn lattice_steps(&self, h: f64) -> Result<i64> {
        let x = h / self.step;
        let k = x.round();
        if (x - k).abs() > 1e-9 * (1.0 + x.abs()) {
            return Err(Error::NotOnLattice { h, step: self.step });
        }
        Ok(k as i64)
    }

    pub fn at(&self, t: f64) -> Option<&[Complex64]> {
        self.index_of(t).map(|i| self.sample(i))
    }

    /// Largest Euclidean norm over the samples.
    pub fn sup_norm(&self) -> f64 {
        (0..self.len()).map(|i| norm(self.sample(i))).fold(0.0, f64::max)
    }

    /// Samples `i0..i1` as a new signal.
    pub fn slice(&self, i0: usize, i1: usize) -> Result<Self> {
        if i0 >= i1 || i1 > self.len() {
            return Err(Error::WindowTooShort { needed: i1, available: self.len() });
        }
        Self::new(
            self.domain,
            self.time(i0),
            self.step,
            self.dim,
            self.values[i0 * self.dim..i1 * self.dim].to_vec(),
        )
    }

    /// Pointwise map `(t, sample) -> sample` keeping the dimension.
    pub fn map(&self, f: impl Fn(f64, &[Complex64]) -> Vec<Complex64>) -> Result<Self> {
        Self::from_vec_fn(self.domain, self.start, self.step, self.len(), self.dim, |t| {
            let i = self.index_of(t).expect("own lattice");
            f(t, self.sample(i))
        })
    }

    /// Multiply every sample by the scalar `f(t)`.
    pub fn scale_by(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.len() {
            let s = f(self.time(i));
            for z in &mut out.values[i * self.dim..(i + 1) * self.dim] {
                *z *= s;
            }
        }
        out
    }

    /// Combine with another signal on the intersection of the two windows.
    pub fn zip_with(&self, other: &Signal, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.dim != other.dim || self.domain != other.domain || (self.step - other.step).abs() > 1e-12 * self.step {
            return Err(Error::invalid("signals are not on a common lattice"));
        }
        let offset = self.lattice_steps(other.start - self.start)?;
        let lo = self.start.max(other.start);
        let hi = self.end().min(other.end());
        if lo > hi + 1e-9 * self.step {
            return Err(Error::invalid("signal windows do not overlap"));
        }
        let i0 = self.index_of(lo).expect("lo on lattice");
        let len = ((hi - lo) / self.step).round() as usize + 1;
        let mut values = Vec::with_capacity(len * self.dim);
        for i in i0..i0 + len {
            let j = (i as i64 - offset) as usize;
            for c in 0..self.dim {
                values.push(f(self.sample(i)[c], other.sample(j)[c]));
            }
        }
        Self::new(self.domain, lo, self.step, self.dim, values)
    }

    pub fn sub(&self, other: &Signal) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Signal) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Translate: `phi_h(t) = phi(t+h)`, on the window where `t+h` is sampled.
    pub fn translate(&self, h: f64) -> Result<Self> {
        let k = self.lattice_steps(h)?;
        let n = self.len() as i64;
        if k.abs() >= n {
            return Err(Error::WindowTooShort { needed: k.unsigned_abs() as usize + 1, available: self.len() });
        }
        let (src0, len) = if k >= 0 { (k as usize, (n - k) as usize) } else { (0, (n + k) as usize) };
        let start = if k >= 0 { self.start } else { self.start - k as f64 * self.step };
        Self::new(
            self.domain,
            start,
            self.step,
            self.dim,
            self.values[src0 * self.dim..(src0 + len) * self.dim].to_vec(),
        )
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
