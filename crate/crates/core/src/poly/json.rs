use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational};
use super::{Poly, RatFunc};
use crate::Rational;

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<CoeffJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Int(i64),
    Text(String),
}

impl CoeffJson {
    fn to_rational(&self) -> crate::Result<Rational> {
        match self {
            CoeffJson::Int(n) => Ok(Rational::from_integer((*n).into())),
            CoeffJson::Text(s) => parse_rational(s),
        }
    }
}

impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| CoeffJson::Text(format_rational(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(CoeffJson::to_rational)
            .collect::<crate::Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncJson {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFuncJson {
            num: self.num().clone(),
            den: self.den().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RatFuncJson::deserialize(d)?;
        RatFunc::new(raw.num, raw.den).map_err(D::Error::custom)
    }
}
