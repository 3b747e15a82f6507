//! Serde helpers: big integers travel as JSON numbers when they fit in an
//! `i64` and as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub(crate) fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => ser.serialize_i64(v),
        None => ser.serialize_str(&value.to_string()),
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(E::custom)
    }
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
    de.deserialize_any(IntVisitor)
}

/// Wrapper used to (de)serialize nested collections of big integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Wire(pub BigInt);

impl Serialize for Wire {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serialize(&self.0, ser)
    }
}

impl<'de> serde::Deserialize<'de> for Wire {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        deserialize(de).map(Wire)
    }
}

pub(crate) mod vec {
    use super::Wire;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub(crate) fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        let wire: Vec<Wire> = v.iter().cloned().map(Wire).collect();
        wire.serialize(ser)
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let wire = Vec::<Wire>::deserialize(de)?;
        Ok(wire.into_iter().map(|w| w.0).collect())
    }
}

pub(crate) mod matrix {
    use super::Wire;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub(crate) fn serialize<S: Serializer>(m: &[Vec<BigInt>], ser: S) -> Result<S::Ok, S::Error> {
        let wire: Vec<Vec<Wire>> = m
            .iter()
            .map(|row| row.iter().cloned().map(Wire).collect())
            .collect();
        wire.serialize(ser)
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let wire = Vec::<Vec<Wire>>::deserialize(de)?;
        Ok(wire
            .into_iter()
            .map(|row| row.into_iter().map(|w| w.0).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "super")]
        x: BigInt,
        #[serde(with = "super::vec")]
        v: Vec<BigInt>,
    }

    #[test]
    fn small_values_are_numbers_and_large_ones_strings() {
        let big = BigInt::from(i64::MAX) * 4u32;
        let h = Holder {
            x: BigInt::from(-7),
            v: vec![BigInt::from(3), big.clone()],
        };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, format!("{{\"x\":-7,\"v\":[3,\"{}\"]}}", big));
        let back: Holder = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
