//! JSON helpers: complex numbers travel as `[re, im]` pairs, and a bare number
//! is accepted as a real value on input.

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A complex number with the `[re, im]` wire format.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsonComplex(pub Complex64);

impl Serialize for JsonComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0.re)?;
        seq.serialize_element(&self.0.im)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for JsonComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = JsonComplex;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a [re, im] pair")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonComplex, E> {
                Ok(JsonComplex(Complex64::new(v, 0.0)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonComplex, E> {
                Ok(JsonComplex(Complex64::new(v as f64, 0.0)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonComplex, E> {
                Ok(JsonComplex(Complex64::new(v as f64, 0.0)))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<JsonComplex, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(JsonComplex(Complex64::new(re, im)))
            }
        }
        d.deserialize_any(V)
    }
}

/// `#[serde(with = "complex")]` for a single `Complex64`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        JsonComplex(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(JsonComplex::deserialize(d)?.0)
    }
}

/// `#[serde(with = "complex_vec")]` for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            seq.serialize_element(&JsonComplex(*z))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw: Vec<JsonComplex> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|z| z.0).collect())
    }
}

/// `#[serde(with = "complex_rows")]` for `Vec<Vec<Complex64>>`.
pub mod complex_rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Vec<JsonComplex>> = rows
            .iter()
            .map(|r| r.iter().copied().map(JsonComplex).collect())
            .collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let raw: Vec<Vec<JsonComplex>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|r| r.into_iter().map(|z| z.0).collect())
            .collect())
    }
}
