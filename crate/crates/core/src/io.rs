//! JSON forms of SPFs and symmetric configurations.
//!
//! An SPF is `{"poles":[{"re":..,"im":..,"mult":..}, ...]}`; a configuration
//! is `{"upper_poles":[...]}` with the same pole records. Floats are written
//! in shortest round-trip form, so emitting and re-parsing is exact for `f64`.

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blaschke::SymmetricConfiguration;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spf::{Pole, Spf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleRecord {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpfRecord {
    pub poles: Vec<PoleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationRecord {
    pub upper_poles: Vec<PoleRecord>,
}

fn records<T: Scalar>(poles: &[Pole<T>]) -> Vec<PoleRecord> {
    poles
        .iter()
        .map(|p| PoleRecord {
            re: p.location.re.as_f64(),
            im: p.location.im.as_f64(),
            mult: p.multiplicity,
        })
        .collect()
}

fn pairs<T: Scalar>(records: &[PoleRecord]) -> impl Iterator<Item = (Complex<T>, u32)> + '_ {
    records
        .iter()
        .map(|r| (Complex::new(T::lit(r.re), T::lit(r.im)), r.mult))
}

impl SpfRecord {
    pub fn from_spf<T: Scalar>(spf: &Spf<T>) -> Self {
        Self {
            poles: records(spf.poles()),
        }
    }

    pub fn to_spf<T: Scalar>(&self) -> Result<Spf<T>> {
        Spf::new(pairs(&self.poles))
    }
}

impl ConfigurationRecord {
    pub fn from_configuration<T: Scalar>(conf: &SymmetricConfiguration<T>) -> Self {
        Self {
            upper_poles: records(conf.upper_poles()),
        }
    }

    pub fn to_configuration<T: Scalar>(&self) -> Result<SymmetricConfiguration<T>> {
        SymmetricConfiguration::new(pairs(&self.upper_poles))
    }
}

impl<T: Scalar> Serialize for Spf<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpfRecord::from_spf(self).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Spf<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SpfRecord::deserialize(d)?
            .to_spf()
            .map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> Serialize for SymmetricConfiguration<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigurationRecord::from_configuration(self).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for SymmetricConfiguration<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ConfigurationRecord::deserialize(d)?
            .to_configuration()
            .map_err(serde::de::Error::custom)
    }
}

pub fn spf_from_json<T: Scalar>(text: &str) -> Result<Spf<T>> {
    let record: SpfRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    record.to_spf()
}

pub fn spf_to_json<T: Scalar>(spf: &Spf<T>) -> String {
    serde_json::to_string(&SpfRecord::from_spf(spf)).expect("records always serialize")
}

pub fn configuration_from_json<T: Scalar>(text: &str) -> Result<SymmetricConfiguration<T>> {
    let record: ConfigurationRecord =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    record.to_configuration()
}

pub fn configuration_to_json<T: Scalar>(conf: &SymmetricConfiguration<T>) -> String {
    serde_json::to_string(&ConfigurationRecord::from_configuration(conf))
        .expect("records always serialize")
}

/// Serde adapter for exponents in `(1, ∞]`: infinity is written as `"inf"`,
/// and `"inf"`, `"infinity"` or a number are accepted.
pub mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(p),
            Raw::Text(t) => parse(&t).map_err(de::Error::custom),
        }
    }

    /// Parses `inf`, `infinity` (any case) or a decimal number.
    pub fn parse(text: &str) -> Result<f64, String> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            Ok(f64::INFINITY)
        } else {
            t.parse::<f64>()
                .map_err(|e| format!("bad exponent '{t}': {e}"))
        }
    }
}
