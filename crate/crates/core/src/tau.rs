//! The `τ(c, h, k)` parametrization of moduli with `Re τ / |τ|² = h/k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SpecialTau, TauSpec};
use crate::scalars::rational::{format_rational, to_f64, Rational};
use crate::scalars::QVec;

/// `(c, h, k)` with `c ≠ 0`, `k ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub c: QVec,
    #[serde(with = "crate::scalars::rational::serde_z")]
    pub h: BigInt,
    #[serde(with = "crate::scalars::rational::serde_z")]
    pub k: BigInt,
}

impl Triple {
    pub fn new(c: QVec, h: impl Into<BigInt>, k: impl Into<BigInt>) -> Self {
        Triple {
            c,
            h: h.into(),
            k: k.into(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.k.is_zero() {
            return Err(Error::NotInDomain("k must be nonzero".into()));
        }
        if self.c.is_zero() {
            return Err(Error::ZeroVector("c"));
        }
        if let Some(sign) = self.c.definite_sign() {
            if (sign > 0) != self.k.is_positive() {
                return Err(Error::NotInDomain("c*k must be positive".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    /// Space separated, with the vector `c` comma separated: `1/2 1 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.coords().iter().map(format_rational).collect();
        write!(f, "{} {} {}", c.join(","), self.h, self.k)
    }
}

impl From<&SpecialTau> for Triple {
    fn from(t: &SpecialTau) -> Self {
        Triple::new(t.c_ref.clone(), t.h.clone(), t.k.clone())
    }
}

/// The special modulus `τ(c, h, k)`. Fails off the domain `c ≠ 0, k ≠ 0,
/// ck > 0` (the sign is checked when `c` has a definite sign).
pub fn tau_from_triple(t: &Triple) -> Result<TauSpec> {
    t.check()?;
    Ok(TauSpec::Special(SpecialTau {
        c_ref: t.c.clone(),
        h: t.h.clone(),
        k: t.k.clone(),
        ck_positive: true,
    }))
}

/// The rational factor `r` with `t1 = r · t2`, if any.
fn ratio(t1: &Triple, t2: &Triple) -> Option<Rational> {
    let r = t1.c.proportionality(&t2.c).ok()??;
    let scaled = |z: &BigInt| &r * Rational::from_integer(z.clone());
    (scaled(&t2.h) == Rational::from_integer(t1.h.clone())
        && scaled(&t2.k) == Rational::from_integer(t1.k.clone()))
    .then_some(r)
}

/// Whether the two triples define the same τ: rational proportionality of
/// `(c, h, k)`.
pub fn same_fiber(t1: &Triple, t2: &Triple) -> bool {
    t1.c.dim() == t2.c.dim() && ratio(t1, t2).is_some()
}

/// Divides by `gcd(h, k)`; idempotent.
pub fn canonical_triple(t: &Triple) -> Result<Triple> {
    t.check()?;
    let d = t.h.gcd(&t.k);
    let inv = Rational::new(BigInt::from(1), d.clone());
    Ok(Triple {
        c: t.c.scale(&inv),
        h: &t.h / &d,
        k: &t.k / &d,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauRatioInvariants {
    /// `Re τ / |τ|²` when it is rational.
    #[serde(serialize_with = "serialize_opt_q")]
    pub re_over_mod2: Option<Rational>,
}

fn serialize_opt_q<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn tau_ratio_invariants(t: &TauSpec) -> TauRatioInvariants {
    let re_over_mod2 = match t {
        TauSpec::Generic => None,
        TauSpec::Special(s) if !s.k.is_zero() => Some(Rational::new(s.h.clone(), s.k.clone())),
        TauSpec::Special(_) => None,
    };
    TauRatioInvariants { re_over_mod2 }
}

/// Floating-point value `(Re τ, Im τ)` for given numeric values of the basis
/// symbols. For display only; no verdict depends on it.
pub fn tau_numeric(t: &Triple, basis_values: &[f64]) -> Result<(f64, f64)> {
    t.check()?;
    if basis_values.len() != t.c.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.c.dim(),
            found: basis_values.len(),
        });
    }
    let c: f64 = t
        .c
        .coords()
        .iter()
        .zip(basis_values)
        .map(|(q, b)| to_f64(q) * b)
        .sum();
    let h = t.h.to_f64().unwrap_or(f64::NAN);
    let k = t.k.to_f64().unwrap_or(f64::NAN);
    let pi = std::f64::consts::PI;
    let scale = 2.0 * k * pi / (4.0 * pi * pi * h * h + c * c);
    Ok((scale * 2.0 * h * pi, scale * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn t(c: &[i64], h: i64, k: i64) -> Triple {
        Triple::new(QVec::from_ints(c), h, k)
    }

    #[test]
    fn from_triple() {
        assert!(tau_from_triple(&t(&[1], 0, 1)).is_ok());
        assert!(tau_from_triple(&t(&[1], 0, 0)).is_err());
        assert!(tau_from_triple(&t(&[0], 0, 1)).is_err());
        assert!(tau_from_triple(&t(&[1], 0, -1)).is_err());
        let spec = tau_from_triple(&t(&[1], 1, 1)).unwrap();
        assert_eq!(tau_ratio_invariants(&spec).re_over_mod2, Some(rat(1, 1)));
    }

    #[test]
    fn numeric_tau_matches_ratios() {
        let (re, im) = tau_numeric(&t(&[1], 0, 1), &[1.0]).unwrap();
        assert!(re.abs() < 1e-15);
        assert!((im - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let (re, im) = tau_numeric(&t(&[2], 1, 3), &[0.7]).unwrap();
        assert!((re / (re * re + im * im) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn fibers() {
        assert!(same_fiber(&t(&[1], 0, 1), &t(&[3], 0, 3)));
        assert!(!same_fiber(&t(&[1], 0, 1), &t(&[1], 1, 1)));
        assert!(same_fiber(&t(&[2], 4, 2), &t(&[1], 2, 1)));
    }

    #[test]
    fn canonical() {
        let c = canonical_triple(&t(&[1], 2, 4)).unwrap();
        assert_eq!(c, Triple::new(QVec::new(vec![rat(1, 2)]), 1, 2));
        assert_eq!(c.to_string(), "1/2 1 2");
        let c = canonical_triple(&t(&[1], 0, 3)).unwrap();
        assert_eq!(c, Triple::new(QVec::new(vec![rat(1, 3)]), 0, 1));
        assert_eq!(canonical_triple(&t(&[1], 1, 1)).unwrap(), t(&[1], 1, 1));
        // Negative k keeps its sign.
        let c = canonical_triple(&t(&[-2], 2, -4)).unwrap();
        assert_eq!(c, t(&[-1], 1, -2));
    }

    #[test]
    fn ratio_invariants() {
        let s = tau_from_triple(&t(&[1], 1, 2)).unwrap();
        assert_eq!(tau_ratio_invariants(&s).re_over_mod2, Some(rat(1, 2)));
        assert_eq!(tau_ratio_invariants(&TauSpec::Generic).re_over_mod2, None);
        let s = tau_from_triple(&t(&[1], 0, 1)).unwrap();
        assert_eq!(tau_ratio_invariants(&s).re_over_mod2, Some(rat(0, 1)));
    }
}
