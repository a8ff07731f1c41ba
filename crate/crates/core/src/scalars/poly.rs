//! Multivariate polynomials over ℚ in the symbols `u, b1, …, bd`.
//!
//! `u` stands for the complex constant τ/(τ−τ̄); its conjugate is `1 − u`.
//! The `b_j` are real, so conjugation fixes them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};

/// Exponent vector: slot 0 is `u`, slot `j` is `b_j`. Trailing zeros are
/// always trimmed so that equal monomials compare equal.
type Exponents = Vec<u32>;

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn mul_exponents(a: &[u32], b: &[u32]) -> Exponents {
    let len = a.len().max(b.len());
    let e = (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(e)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn u() -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![1], Rational::one());
        p
    }

    /// Basis symbol `b_j`, `j ≥ 1`.
    pub fn b(j: usize) -> Self {
        assert!(j >= 1, "basis symbols are 1-based");
        let mut e = vec![0; j + 1];
        e[j] = 1;
        let mut p = Poly::zero();
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coords[j] · b_{j+1}`.
    pub fn linear_in_basis(coords: &[Rational]) -> Self {
        let mut p = Poly::zero();
        for (j, c) in coords.iter().enumerate() {
            let mut e = vec![0; j + 2];
            e[j + 1] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(trim(e)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// The ℚ-algebra involution `u ↦ 1 − u`, `b_j ↦ b_j`.
    pub fn conjugate(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let a = e.first().copied().unwrap_or(0);
            // (1-u)^a = Σ_k C(a,k) (-u)^k
            for k in 0..=a {
                let mut coeff = c * Rational::from_integer(binomial(BigInt::from(a), BigInt::from(k)));
                if k % 2 == 1 {
                    coeff = -coeff;
                }
                let mut ex = e.clone();
                if ex.is_empty() {
                    ex.push(0);
                }
                ex[0] = k;
                out.add_term(ex, coeff);
            }
        }
        out
    }

    /// Evaluates with `u = values[0]`, `b_j = values[j]`; missing slots read 0.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = values.get(i).cloned().unwrap_or_else(Rational::zero);
                t *= num_traits::pow(v, k as usize);
            }
            total += t;
        }
        total
    }

    /// Degree of the polynomial in `u` alone.
    pub fn degree_in_u(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.first().copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(mul_exponents(ea, eb), ca * cb);
            }
        }
        out
    }
}

fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if i == 0 {
            write!(f, "u")?;
        } else {
            write!(f, "b{i}")?;
        }
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

/// Terms are printed by descending total degree, then descending exponent
/// vector, e.g. `2*u*b1 - 2*b1` or `u^2 - 2*u + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            total_degree(b)
                .cmp(&total_degree(a))
                .then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if e.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}
