use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rational::{format_rational, serde_q, Rational};
use crate::error::{Error, Result};

/// A ℚ-linear combination `Σ coords[j] · b_{j+1}` of declared, ℚ-linearly
/// independent positive real basis symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVec(Vec<Rational>);

impl QVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVec(coords)
    }

    pub fn zero(dim: usize) -> Self {
        QVec(vec![Rational::zero(); dim])
    }

    /// The basis symbol `b_{j+1}`.
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[j] = Rational::from_integer(1.into());
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVec(coords.iter().map(|&c| super::rational::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> QVec {
        QVec(self.0.iter().map(|c| c * r).collect())
    }

    /// Sign shared by every nonzero coordinate, if there is one. Basis symbols
    /// are positive, so this is the sign of the represented real number
    /// whenever it is defined.
    pub fn definite_sign(&self) -> Option<i8> {
        let mut sign = 0i8;
        for c in &self.0 {
            let s = super::rational::sign(c);
            if s == 0 {
                continue;
            }
            if sign != 0 && sign != s {
                return None;
            }
            sign = s;
        }
        (sign != 0).then_some(sign)
    }

    fn check_dim(&self, other: &QVec) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QVec) -> Result<QVec> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    /// The rational `r` with `self = r · other`, if one exists.
    ///
    /// `other` must be nonzero; `r` is then unique.
    pub fn proportionality(&self, other: &QVec) -> Result<Option<Rational>> {
        self.check_dim(other)?;
        let pivot = other
            .0
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroVector("reference vector"))?;
        let r = &self.0[pivot] / &other.0[pivot];
        let matches = self.0.iter().zip(&other.0).all(|(a, b)| *a == &r * b);
        Ok(matches.then_some(r))
    }

    /// The linear polynomial `Σ coords[j] · b_{j+1}`.
    pub fn to_poly(&self) -> Poly {
        Poly::linear_in_basis(&self.0)
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_q::vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_q::vec::deserialize(d).map(QVec)
    }
}

/// Parses `"1,-1/2"` (comma separated rationals, optional parentheses).
impl std::str::FromStr for QVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        s.split(',')
            .map(super::rational::parse_rational)
            .collect::<Result<Vec<_>>>()
            .map(QVec)
    }
}
