use crate::cjson;
use crate::domain::Domain;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Polynomial in `t` with complex-vector coefficients; `coeffs[k]` multiplies `t^k`.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients at all. Its degree is reported as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoly {
    domain: Domain,
    dim: usize,
    coeffs: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct GroupPolyJson {
    domain: Domain,
    dim: usize,
    #[serde(with = "cjson::complex_rows")]
    coeffs: Vec<Vec<Complex64>>,
}

impl Serialize for GroupPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupPolyJson { domain: self.domain, dim: self.dim, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupPolyJson::deserialize(d)?;
        GroupPoly::new(raw.domain, raw.dim, raw.coeffs).map_err(serde::de::Error::custom)
    }
}

impl GroupPoly {
    pub fn new(domain: Domain, dim: usize, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("polynomial dimension must be at least 1"));
        }
        if coeffs.iter().any(|c| c.len() != dim) {
            return Err(Error::invalid("all coefficient vectors must share the dimension"));
        }
        let mut p = GroupPoly { domain, dim, coeffs };
        p.trim();
        Ok(p)
    }

    /// Scalar polynomial from ascending coefficients.
    pub fn scalar(domain: Domain, coeffs: &[Complex64]) -> Self {
        Self::new(domain, 1, coeffs.iter().map(|&c| vec![c]).collect()).expect("dim 1")
    }

    pub fn real(domain: Domain, coeffs: &[f64]) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::scalar(domain, &c)
    }

    /// Constant vector polynomial.
    pub fn constant(domain: Domain, v: Vec<Complex64>) -> Self {
        let dim = v.len();
        Self::new(domain, dim, vec![v]).expect("consistent dimension")
    }

    pub fn zero(domain: Domain, dim: usize) -> Self {
        GroupPoly { domain, dim, coeffs: vec![] }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.iter().all(|z| *z == ZERO)) {
            self.coeffs.pop();
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> Vec<Complex64> {
        let mut acc = vec![ZERO; self.dim];
        for c in self.coeffs.iter().rev() {
            for (a, &ck) in acc.iter_mut().zip(c) {
                *a = *a * t + ck;
            }
        }
        acc
    }

    /// Exact `p(t+h) - p(t)` on the coefficients.
    pub fn difference_exact(&self, h: f64) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![vec![ZERO; self.dim]; n.saturating_sub(1)];
        for (k, ck) in self.coeffs.iter().enumerate() {
            // (t+h)^k - t^k = sum_{i<k} C(k,i) h^{k-i} t^i
            let mut binom = 1.0;
            for i in 0..k {
                let f = binom * h.powi((k - i) as i32);
                for (o, &c) in out[i].iter_mut().zip(ck) {
                    *o += c * f;
                }
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
        }
        GroupPoly::new(self.domain, self.dim, out).expect("same dimension")
    }

    pub fn derivative(&self) -> Self {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.iter().map(|&z| z * k as f64).collect())
            .collect();
        GroupPoly::new(self.domain, self.dim, out).expect("same dimension")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::invalid("dimension mismatch"));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|k| {
                (0..self.dim)
                    .map(|c| {
                        self.coeffs.get(k).map_or(ZERO, |v| v[c]) + other.coeffs.get(k).map_or(ZERO, |v| v[c])
                    })
                    .collect()
            })
            .collect();
        GroupPoly::new(self.domain, self.dim, out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let out = self.coeffs.iter().map(|c| c.iter().map(|&z| z * s).collect()).collect();
        GroupPoly::new(self.domain, self.dim, out).expect("same dimension")
    }

    /// Largest coefficient magnitude.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}
