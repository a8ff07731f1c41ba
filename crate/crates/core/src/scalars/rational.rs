//! Exact rationals backed by `num-rational`, with the `"p/q"` string form used
//! in every JSON document.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Always-reduced arbitrary precision rational.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// `r` as an integer when it is one.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Numerator or denominator overflow f64; fall back to scaled division.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

/// Serde adaptors that keep rationals as strings.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = QString::deserialize(d)?;
        raw.into_rational().map_err(de::Error::custom)
    }

    /// Accepts `"p/q"` strings and bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum QString {
        Str(String),
        Int(i64),
    }

    impl QString {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                QString::Str(s) => parse_rational(&s),
                QString::Int(i) => Ok(int(i)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw = Vec::<QString>::deserialize(d)?;
            raw.into_iter()
                .map(|q| q.into_rational().map_err(de::Error::custom))
                .collect()
        }
    }
}

/// Serde adaptor for `BigInt` as a JSON number when it fits in `i64`, else a
/// decimal string.
pub mod serde_z {
    use super::*;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match z.to_i64() {
            Some(i) => s.serialize_i64(i),
            None => s.serialize_str(&z.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum ZRaw {
        Int(i64),
        Str(String),
    }

    impl ZRaw {
        pub(crate) fn into_bigint(self) -> Result<BigInt> {
            match self {
                ZRaw::Int(i) => Ok(BigInt::from(i)),
                ZRaw::Str(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        ZRaw::deserialize(d)?.into_bigint().map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for z in v {
                match z.to_i64() {
                    Some(i) => seq.serialize_element(&i)?,
                    None => seq.serialize_element(&z.to_string())?,
                }
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
            Vec::<ZRaw>::deserialize(d)?
                .into_iter()
                .map(|z| z.into_bigint().map_err(de::Error::custom))
                .collect()
        }
    }
}
