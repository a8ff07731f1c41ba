//! Exterior calculus on invariant coframe forms with character coefficients.
//!
//! A form is a finite sum of terms `p · f_c · φ^S` where `p` is a polynomial
//! in `u, b1, …, bd`, `f_c` is the coefficient function of the character `c`
//! and `φ^S` a wedge of coframe generators. Generators are ordered
//! `φ⁰, φ̄⁰, φ¹, …, φⁿ, φ̄¹, …, φ̄ⁿ` and a monomial is stored as a bit mask in
//! that order.
//!
//! Rendering grammar, used by the CLI:
//!
//! ```text
//! form  := "0" | term (" + " term)*
//! term  := coeff [" * f[c=" vector "]"] [" * " mono]
//! coeff := poly            (parenthesized when it has several terms)
//! mono  := gen ("^" gen)*  with gen in phi0, phibar0, phi<i>, phibar<i>
//! ```
//!
//! For example `(2*u*b1 - 2*b1) * f[c=(1,-1)] * phi0^phi1^phibar2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::LambdaSpec;
use crate::scalars::{Poly, QVec};

/// Hard limit so that `2n + 2` generators fit a `u64` mask.
pub const MAX_FORM_N: usize = 31;

/// A subset of `{1, …, n}`; bit `i − 1` stands for index `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub u32);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(0)
    }

    /// From 1-based indices.
    pub fn from_indices(indices: &[usize]) -> Self {
        MultiIndex(indices.iter().fold(0, |m, &i| m | 1 << (i - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 >> (i - 1) & 1 == 1
    }

    /// Ascending 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `[φ⁰] ∧ [φ̄⁰] ∧ φ^I ∧ φ̄^J`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoframeMonomial {
    pub has_phi0: bool,
    pub has_phibar0: bool,
    pub i: MultiIndex,
    pub j: MultiIndex,
}

impl CoframeMonomial {
    pub fn new(has_phi0: bool, has_phibar0: bool, i: MultiIndex, j: MultiIndex) -> Self {
        CoframeMonomial {
            has_phi0,
            has_phibar0,
            i,
            j,
        }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (
            self.i.len() + usize::from(self.has_phi0),
            self.j.len() + usize::from(self.has_phibar0),
        )
    }

    pub fn degree(&self) -> usize {
        let (p, q) = self.bidegree();
        p + q
    }

    fn to_mask(self, n: usize) -> u64 {
        u64::from(self.has_phi0)
            | u64::from(self.has_phibar0) << 1
            | u64::from(self.i.0) << 2
            | u64::from(self.j.0) << (2 + n)
    }

    fn from_mask(mask: u64, n: usize) -> Self {
        let low = (1u64 << n) - 1;
        CoframeMonomial {
            has_phi0: mask & 1 == 1,
            has_phibar0: mask >> 1 & 1 == 1,
            i: MultiIndex((mask >> 2 & low) as u32),
            j: MultiIndex((mask >> (2 + n) & low) as u32),
        }
    }

    fn render(&self) -> String {
        let mut gens = Vec::new();
        if self.has_phi0 {
            gens.push("phi0".to_string());
        }
        if self.has_phibar0 {
            gens.push("phibar0".to_string());
        }
        gens.extend(self.i.indices().iter().map(|i| format!("phi{i}")));
        gens.extend(self.j.indices().iter().map(|j| format!("phibar{j}")));
        gens.join("^")
    }
}

/// One stored term of an [`InvariantForm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTerm {
    pub coeff: Poly,
    pub character: QVec,
    pub monomial: CoframeMonomial,
}

/// `(−1)^{#{(a, b) : a ∈ A, b ∈ B, a > b}}`, or `None` when `A ∩ B ≠ ∅`.
fn wedge_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> bit >> 1).count_ones();
    }
    Some(inversions % 2 == 1)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Del,
    Dbar,
}

/// Formal sum of terms, merged on `(character, monomial)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    n: usize,
    d: usize,
    terms: BTreeMap<(QVec, u64), Poly>,
}

impl InvariantForm {
    pub fn zero(n: usize, d: usize) -> Self {
        assert!(n <= MAX_FORM_N, "n = {n} exceeds the form engine limit {MAX_FORM_N}");
        InvariantForm {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// The constant function 1.
    pub fn one(n: usize, d: usize) -> Self {
        Self::zero(n, d).with_term(Poly::one(), QVec::zero(d), CoframeMonomial::default())
    }

    /// `coeff · f_c · monomial`.
    pub fn term(n: usize, d: usize, coeff: Poly, character: QVec, monomial: CoframeMonomial) -> Self {
        Self::zero(n, d).with_term(coeff, character, monomial)
    }

    /// The function `f_c`.
    pub fn character(n: usize, character: QVec) -> Self {
        let d = character.dim();
        Self::term(n, d, Poly::one(), character, CoframeMonomial::default())
    }

    pub fn phi0(n: usize, d: usize) -> Self {
        Self::generator(n, d, 0)
    }

    pub fn phibar0(n: usize, d: usize) -> Self {
        Self::generator(n, d, 1)
    }

    /// `φ^i`, `1 ≤ i ≤ n`.
    pub fn phi(n: usize, d: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "index {i} out of range 1..={n}");
        Self::generator(n, d, 1 + i)
    }

    /// `φ̄^i`, `1 ≤ i ≤ n`.
    pub fn phibar(n: usize, d: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "index {i} out of range 1..={n}");
        Self::generator(n, d, 1 + n + i)
    }

    fn generator(n: usize, d: usize, bit: usize) -> Self {
        let mut f = Self::zero(n, d);
        f.add_raw(QVec::zero(d), 1 << bit, Poly::one());
        f
    }

    fn with_term(mut self, coeff: Poly, character: QVec, monomial: CoframeMonomial) -> Self {
        assert_eq!(character.dim(), self.d, "character dimension");
        assert!(
            u64::from(monomial.i.0 | monomial.j.0) >> self.n == 0,
            "monomial uses indices beyond n = {}",
            self.n
        );
        let mask = monomial.to_mask(self.n);
        self.add_raw(character, mask, coeff);
        self
    }

    fn add_raw(&mut self, character: QVec, mask: u64, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let key = (character, mask);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis_dim(&self) -> usize {
        self.d
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

    /// Terms in canonical order (character, then monomial mask).
    pub fn terms(&self) -> Vec<FormTerm> {
        self.terms
            .iter()
            .map(|((c, mask), p)| FormTerm {
                coeff: p.clone(),
                character: c.clone(),
                monomial: CoframeMonomial::from_mask(*mask, self.n),
            })
            .collect()
    }

    /// The bidegree shared by all terms; `None` for the zero form, an error
    /// for forms of mixed bidegree.
    pub fn bidegree(&self) -> Result<Option<(usize, usize)>> {
        let mut found = None;
        for &(_, mask) in self.terms.keys() {
            let b = CoframeMonomial::from_mask(mask, self.n).bidegree();
            match found {
                None => found = Some(b),
                Some(prev) if prev != b => {
                    return Err(Error::NotInDomain(format!(
                        "form has mixed bidegrees {prev:?} and {b:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// Total degree shared by all terms; an error on mixed degrees.
    pub fn degree(&self) -> Result<Option<usize>> {
        let mut found = None;
        for &(_, mask) in self.terms.keys() {
            let k = mask.count_ones() as usize;
            match found {
                None => found = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::NotInDomain(format!(
                        "form has mixed degrees {prev} and {k}"
                    )))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    fn check_compatible(&self, other: &InvariantForm) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        Ok(())
    }

    fn check_lambda(&self, lambda: &LambdaSpec) -> Result<()> {
        if lambda.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: lambda.n(),
            });
        }
        if lambda.basis_dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: lambda.basis_dim(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, p: &Poly) -> InvariantForm {
        let mut out = Self::zero(self.n, self.d);
        for ((c, mask), q) in &self.terms {
            out.add_raw(c.clone(), *mask, q * p);
        }
        out
    }

    pub fn try_add(&self, other: &InvariantForm) -> Result<InvariantForm> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for ((c, mask), p) in &other.terms {
            out.add_raw(c.clone(), *mask, p.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &InvariantForm) -> Result<InvariantForm> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.d);
        for ((ca, ma), pa) in &self.terms {
            for ((cb, mb), pb) in &other.terms {
                let Some(negative) = wedge_sign(*ma, *mb) else {
                    continue;
                };
                let coeff = pa * pb;
                out.add_raw(ca + cb, ma | mb, if negative { -&coeff } else { coeff });
            }
        }
        Ok(out)
    }

    /// `self ∧ self ∧ …` (`k` factors); `k = 0` gives 1.
    pub fn wedge_power(&self, k: u32) -> Result<InvariantForm> {
        (0..k).try_fold(Self::one(self.n, self.d), |acc, _| acc.wedge(self))
    }

    /// Image of a generator under `∂` or `∂̄`, as `coeff · φ_a ∧ φ_b`.
    fn generator_image(&self, lambda: &LambdaSpec, bit: usize, part: Part) -> Option<(Poly, usize, usize)> {
        let n = self.n;
        if bit < 2 {
            return None;
        }
        let (index, barred) = if bit < 2 + n { (bit - 1, false) } else { (bit - 1 - n, true) };
        let l = lambda.lambdas()[index - 1].to_poly();
        if l.is_zero() {
            return None;
        }
        let u = Poly::u();
        Some(match part {
            // ∂̄φ^i = λ_i u φ^i ∧ φ̄⁰, ∂̄φ̄^i = −λ_i u φ̄⁰ ∧ φ̄^i
            Part::Dbar if !barred => (&l * &u, bit, 1),
            Part::Dbar => (-&(&l * &u), 1, bit),
            // ∂φ^i = λ_i (u − 1) φ⁰ ∧ φ^i, same for φ̄^i
            Part::Del => (&l * &(&u - &Poly::one()), 0, bit),
        })
    }

    fn derivation(&self, lambda: &LambdaSpec, part: Part) -> Result<InvariantForm> {
        self.check_lambda(lambda)?;
        let mut out = Self::zero(self.n, self.d);
        let u = Poly::u();
        for ((c, mask), p) in &self.terms {
            // Derivative of the coefficient function f_c.
            if !c.is_zero() {
                let (factor, bit) = match part {
                    Part::Dbar => (&u * &c.to_poly(), 1),
                    Part::Del => (&(&u - &Poly::one()) * &c.to_poly(), 0),
                };
                if let Some(negative) = wedge_sign(1 << bit, *mask) {
                    let coeff = &factor * p;
                    out.add_raw(c.clone(), mask | 1 << bit, if negative { -&coeff } else { coeff });
                }
            }
            // Leibniz over the generators of the monomial.
            let mut rest = *mask;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let Some((factor, a, b)) = self.generator_image(lambda, bit, part) else {
                    continue;
                };
                let below = mask & ((1u64 << bit) - 1);
                let above = mask & !((1u64 << (bit + 1)) - 1);
                let pair = (1u64 << a) | (1u64 << b);
                let Some(s1) = wedge_sign(below, pair) else { continue };
                let Some(s2) = wedge_sign(below | pair, above) else { continue };
                let s0 = a > b;
                let s3 = below.count_ones() % 2 == 1;
                let negative = s0 ^ s1 ^ s2 ^ s3;
                let coeff = &factor * p;
                out.add_raw(c.clone(), below | pair | above, if negative { -&coeff } else { coeff });
            }
        }
        Ok(out)
    }

    /// `∂̄`, using `∂̄ f_c = u c f_c φ̄⁰`.
    pub fn dbar(&self, lambda: &LambdaSpec) -> Result<InvariantForm> {
        self.derivation(lambda, Part::Dbar)
    }

    /// `∂`, using `∂ f_c = (u − 1) c f_c φ⁰`.
    pub fn del(&self, lambda: &LambdaSpec) -> Result<InvariantForm> {
        self.derivation(lambda, Part::Del)
    }

    pub fn d(&self, lambda: &LambdaSpec) -> Result<InvariantForm> {
        self.del(lambda)?.try_add(&self.dbar(lambda)?)
    }

    /// Complex conjugation: `f_c ↦ f_{−c}`, `φ ↔ φ̄`, coefficients through
    /// `u ↦ 1 − u`.
    pub fn conjugate(&self) -> InvariantForm {
        let n = self.n;
        let swap = |bit: usize| -> usize {
            match bit {
                0 => 1,
                1 => 0,
                b if b < 2 + n => b + n,
                b => b - n,
            }
        };
        let mut out = Self::zero(n, self.d);
        for ((c, mask), p) in &self.terms {
            let images: Vec<usize> = (0..2 + 2 * n)
                .filter(|b| mask >> b & 1 == 1)
                .map(swap)
                .collect();
            let mut inversions = 0;
            for x in 0..images.len() {
                for y in x + 1..images.len() {
                    if images[x] > images[y] {
                        inversions += 1;
                    }
                }
            }
            let new_mask = images.iter().fold(0u64, |m, &b| m | 1 << b);
            let coeff = p.conjugate();
            out.add_raw(-c, new_mask, if inversions % 2 == 1 { -&coeff } else { coeff });
        }
        out
    }

    /// For a single-term `other` with constant coefficient, the polynomial
    /// `κ` with `self = κ · other`, if there is one.
    pub fn polynomial_multiple_of(&self, other: &InvariantForm) -> Option<Poly> {
        if self.n != other.n || self.d != other.d || other.terms.len() != 1 || self.terms.len() != 1 {
            return None;
        }
        let (key, q) = other.terms.iter().next()?;
        let p = self.terms.get(key)?;
        let c = q.as_constant().filter(|c| !c.is_zero())?;
        Some(p.scale(&c.recip()))
    }
}

impl Add for &InvariantForm {
    type Output = InvariantForm;
    fn add(self, rhs: &InvariantForm) -> InvariantForm {
        self.try_add(rhs).expect("forms over different manifolds")
    }
}

impl Sub for &InvariantForm {
    type Output = InvariantForm;
    fn sub(self, rhs: &InvariantForm) -> InvariantForm {
        self.try_add(&-rhs).expect("forms over different manifolds")
    }
}

impl Neg for &InvariantForm {
    type Output = InvariantForm;
    fn neg(self) -> InvariantForm {
        self.scale(&Poly::from_int(-1))
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((c, mask), p) in &self.terms {
            let text = p.to_string();
            if p.len() > 1 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({text})")?;
            } else if let Some(rest) = text.strip_prefix('-').filter(|_| !first) {
                write!(f, " - {rest}")?;
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{text}")?;
            }
            first = false;
            if !c.is_zero() {
                write!(f, " * f[c={c}]")?;
            }
            if *mask != 0 {
                write!(f, " * {}", CoframeMonomial::from_mask(*mask, self.n).render())?;
            }
        }
        Ok(())
    }
}

/// `ψ = φ⁰ ∧ φ¹ ∧ … ∧ φⁿ`, trivializing the canonical bundle.
pub fn canonical_psi(lambda: &LambdaSpec) -> InvariantForm {
    let (n, d) = (lambda.n(), lambda.basis_dim());
    let all = MultiIndex(((1u64 << n) - 1) as u32);
    InvariantForm::term(
        n,
        d,
        Poly::one(),
        QVec::zero(d),
        CoframeMonomial::new(true, false, all, MultiIndex::empty()),
    )
}

/// `ω = Σ_{i=0}^{n} φ^i ∧ φ̄^i`; `ωⁿ` is closed.
pub fn balanced_omega(lambda: &LambdaSpec) -> InvariantForm {
    let (n, d) = (lambda.n(), lambda.basis_dim());
    let mut omega = InvariantForm::zero(n, d);
    omega = &omega
        + &InvariantForm::phi0(n, d)
            .wedge(&InvariantForm::phibar0(n, d))
            .expect("same manifold");
    for i in 1..=n {
        let t = InvariantForm::phi(n, d, i)
            .wedge(&InvariantForm::phibar(n, d, i))
            .expect("same manifold");
        omega = &omega + &t;
    }
    omega
}
