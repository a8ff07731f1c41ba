//! Lifts of automorphisms `F(z, w) = (Az + E(w) + h, tw + σ)`, written in
//! the coordinates `P` that diagonalize the lattice action: `A = P A′ P⁻¹`,
//! `h = P(x₁ + τ x₂)`. Only specs with every `λ_i ≠ 0` are handled.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ManifoldSpec, TauSpec};
use crate::scalars::rational::{as_integer, format_rational, serde_q, serde_z};
use crate::scalars::snf::smith_normal_form;
use crate::scalars::{IntMatrix, Rational};

/// `(β, α) ∈ Γ` with `β = P(β₁ + τβ₂)` and `α = a₁ + a₂τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "serde_z::vec")]
    pub beta1: Vec<BigInt>,
    #[serde(with = "serde_z::vec")]
    pub beta2: Vec<BigInt>,
    pub a1: i64,
    pub a2: i64,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            beta1: vec![BigInt::zero(); n],
            beta2: vec![BigInt::zero(); n],
            a1: 0,
            a2: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a1 == 0 && self.a2 == 0 && self.beta1.iter().chain(&self.beta2).all(Zero::is_zero)
    }
}

/// `E(w)` component `c · e^{(2πi m + λ_i) w}` on coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EMode {
    pub i: usize,
    #[serde(with = "serde_z")]
    pub m: BigInt,
    #[serde(with = "serde_z")]
    pub k: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutCandidate {
    pub t: i64,
    #[serde(rename = "A_prime")]
    pub a_prime: IntMatrix,
    #[serde(with = "serde_q::vec")]
    pub x1: Vec<Rational>,
    #[serde(with = "serde_q::vec")]
    pub x2: Vec<Rational>,
    #[serde(default)]
    pub e_modes: Vec<EMode>,
    /// Carried through unchecked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<serde_json::Value>,
}

impl AutCandidate {
    /// `t = 1`, `x = 0`, no exponential modes.
    pub fn linear(t: i64, a_prime: IntMatrix) -> Self {
        let n = a_prime.rows();
        AutCandidate {
            t,
            a_prime,
            x1: vec![Rational::zero(); n],
            x2: vec![Rational::zero(); n],
            e_modes: Vec::new(),
            sigma: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(1, IntMatrix::identity(n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum AutViolation {
    /// (i)
    TNotUnit { t: i64 },
    /// (ii)
    NotIntertwining,
    /// (iii)
    NotUnimodular {
        #[serde(with = "serde_z")]
        det: BigInt,
    },
    /// (iv), for the real (`part = 1`) or τ (`part = 2`) coordinate.
    TranslationNotIntegral { part: u8 },
    /// (v)
    EModeMismatch { i: usize, expected: Option<(String, String)> },
}

impl fmt::Display for AutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutViolation::TNotUnit { t } => write!(f, "(i) t = {t} is not 1 or -1"),
            AutViolation::NotIntertwining => write!(f, "(ii) M^t A' != A' M"),
            AutViolation::NotUnimodular { det } => write!(f, "(iii) det A' = {det}, not 1 or -1"),
            AutViolation::TranslationNotIntegral { part } => {
                write!(f, "(iv) (I - M) x{part} is not integral")
            }
            AutViolation::EModeMismatch { i, expected: None } => {
                write!(f, "(v) no exponential mode exists on coordinate {i}")
            }
            AutViolation::EModeMismatch { i, expected: Some((m, k)) } => {
                write!(f, "(v) exponential mode on coordinate {i} must be (m, k) = ({m}, {k})")
            }
        }
    }
}

fn lattice_matrix(s: &ManifoldSpec) -> Result<&IntMatrix> {
    s.lattice.as_ref().map(|l| &l.m).ok_or(Error::MissingLattice)
}

/// `M`, after checking the standing hypothesis that no `λ_i` vanishes.
fn hypotheses(s: &ManifoldSpec) -> Result<&IntMatrix> {
    if let Some(i) = s.lambdas().iter().position(|l| l.is_zero()) {
        return Err(Error::OutsideAutHypotheses(i + 1));
    }
    let m = lattice_matrix(s)?;
    if m.rows() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: m.rows(),
        });
    }
    Ok(m)
}

fn m_pow(m: &IntMatrix, k: i64) -> Result<IntMatrix> {
    m.pow(k)?
        .ok_or_else(|| Error::NotSpecialLinear(m.det().map_or_else(|e| e.to_string(), |d| d.to_string())))
}

/// `(I − N) x`.
fn one_minus_apply(nm: &IntMatrix, x: &[Rational]) -> Vec<Rational> {
    let nx = nm.mul_vec_rational(x);
    x.iter().zip(nx).map(|(a, b)| a - b).collect()
}

fn all_integral(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_integer)
}

/// `(m, k′)` with `(t λ_i, m, k′)` a rational multiple of `(c, h, k)`; `None`
/// when no such integers exist or τ is generic.
pub fn e_mode_space(s: &ManifoldSpec, t: i64, i: usize) -> Result<Option<(BigInt, BigInt)>> {
    let li = s.lambda.lambda(i)?;
    if li.is_zero() {
        return Err(Error::OutsideAutHypotheses(i));
    }
    let TauSpec::Special(sp) = &s.tau else {
        return Ok(None);
    };
    let tl = li.scale(&Rational::from_integer(BigInt::from(t)));
    let Some(r) = tl.proportionality(&sp.c_ref)? else {
        return Ok(None);
    };
    let m = &r * Rational::from_integer(sp.h.clone());
    let k = &r * Rational::from_integer(sp.k.clone());
    Ok(as_integer(&m).zip(as_integer(&k)))
}

/// Every violated condition; an empty list means the candidate verifies.
pub fn verify_candidate(s: &ManifoldSpec, c: &AutCandidate) -> Result<Vec<AutViolation>> {
    let m = hypotheses(s)?;
    let n = s.n();
    for len in [c.a_prime.rows(), c.a_prime.cols(), c.x1.len(), c.x2.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let mut out = Vec::new();
    if c.t != 1 && c.t != -1 {
        out.push(AutViolation::TNotUnit { t: c.t });
    } else if &m_pow(m, c.t)? * &c.a_prime != &c.a_prime * m {
        out.push(AutViolation::NotIntertwining);
    }
    let det = c.a_prime.det()?;
    if !det.abs().is_one() {
        out.push(AutViolation::NotUnimodular { det });
    }
    for (part, x) in [(1u8, &c.x1), (2, &c.x2)] {
        if !all_integral(&one_minus_apply(m, x)) {
            out.push(AutViolation::TranslationNotIntegral { part });
        }
    }
    for e in &c.e_modes {
        let expected = if c.t == 1 || c.t == -1 {
            e_mode_space(s, c.t, e.i)?
        } else {
            None
        };
        if expected.as_ref() != Some(&(e.m.clone(), e.k.clone())) {
            out.push(AutViolation::EModeMismatch {
                i: e.i,
                expected: expected.map(|(m, k)| (m.to_string(), k.to_string())),
            });
        }
    }
    Ok(out)
}

fn require_verified(s: &ManifoldSpec, c: &AutCandidate) -> Result<()> {
    let v = verify_candidate(s, c)?;
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::UnverifiedCandidate(v.iter().map(ToString::to_string).collect()))
    }
}

/// `F ∘ g ∘ F⁻¹` for a verified candidate `F`.
pub fn deck_conjugate(s: &ManifoldSpec, c: &AutCandidate, g: &GroupElement) -> Result<GroupElement> {
    require_verified(s, c)?;
    let m = lattice_matrix(s)?;
    let n = s.n();
    if g.beta1.len() != n || g.beta2.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.beta1.len().min(g.beta2.len()),
        });
    }
    let power = m_pow(m, c.t * g.a1)?;
    let part = |beta: &[BigInt], x: &[Rational]| -> Result<Vec<BigInt>> {
        let shift = one_minus_apply(&power, x);
        c.a_prime
            .mul_vec(beta)
            .into_iter()
            .zip(shift)
            .map(|(b, s)| {
                let v = Rational::from_integer(b) + s;
                as_integer(&v).ok_or_else(|| Error::NonIntegral(format_rational(&v)))
            })
            .collect()
    };
    Ok(GroupElement {
        beta1: part(&g.beta1, &c.x1)?,
        beta2: part(&g.beta2, &c.x2)?,
        a1: c.t * g.a1,
        a2: c.t * g.a2,
    })
}

/// The deck transformation of `g` as a candidate: `A′ = M^{a₁}`, `x = β`.
pub fn deck_candidate(s: &ManifoldSpec, g: &GroupElement) -> Result<AutCandidate> {
    let m = lattice_matrix(s)?;
    let to_q = |v: &[BigInt]| v.iter().cloned().map(Rational::from_integer).collect();
    Ok(AutCandidate {
        t: 1,
        a_prime: m_pow(m, g.a1)?,
        x1: to_q(&g.beta1),
        x2: to_q(&g.beta2),
        e_modes: Vec::new(),
        sigma: Some(serde_json::json!([g.a1, g.a2])),
    })
}

/// Powers tried by [`as_deck_element`] in each direction.
const DECK_POWER_LIMIT: i64 = 256;

/// The element of `Γ` whose deck transformation has the same `(t, A′, x)`,
/// with `a₂ = 0` since σ is not tracked.
pub fn as_deck_element(s: &ManifoldSpec, c: &AutCandidate) -> Result<Option<GroupElement>> {
    let m = hypotheses(s)?;
    if c.t != 1 || !c.e_modes.is_empty() {
        return Ok(None);
    }
    let to_z = |v: &[Rational]| -> Option<Vec<BigInt>> { v.iter().map(as_integer).collect() };
    let (Some(beta1), Some(beta2)) = (to_z(&c.x1), to_z(&c.x2)) else {
        return Ok(None);
    };
    let target_size = c.a_prime.max_abs_entry();
    let inverse = m_pow(m, -1)?;
    for (step, sign) in [(m.clone(), 1i64), (inverse, -1)] {
        let mut power = IntMatrix::identity(s.n());
        for k in 0..=DECK_POWER_LIMIT {
            if power == c.a_prime {
                return Ok(Some(GroupElement {
                    beta1,
                    beta2,
                    a1: sign * k,
                    a2: 0,
                }));
            }
            if k > 2 && power.max_abs_entry() > &target_size * 4 + 4 {
                break;
            }
            power = &power * &step;
        }
    }
    Ok(None)
}

/// `F₁ ∘ F₂`. σ is dropped.
pub fn compose_candidates(c1: &AutCandidate, c2: &AutCandidate) -> Result<AutCandidate> {
    if !c1.e_modes.is_empty() || !c2.e_modes.is_empty() {
        return Err(Error::AffineOnly);
    }
    if c1.a_prime.rows() != c2.a_prime.rows() {
        return Err(Error::DimensionMismatch {
            expected: c1.a_prime.rows(),
            found: c2.a_prime.rows(),
        });
    }
    let affine = |x1: &[Rational], x2: &[Rational]| -> Vec<Rational> {
        c1.a_prime
            .mul_vec_rational(x2)
            .into_iter()
            .zip(x1)
            .map(|(a, b)| a + b)
            .collect()
    };
    Ok(AutCandidate {
        t: c1.t * c2.t,
        a_prime: &c1.a_prime * &c2.a_prime,
        x1: affine(&c1.x1, &c2.x1),
        x2: affine(&c1.x2, &c2.x2),
        e_modes: Vec::new(),
        sigma: None,
    })
}

/// `F⁻¹(z, w) = (A⁻¹z − A⁻¹h, tw − tσ)`. σ is dropped.
pub fn invert_candidate(c: &AutCandidate) -> Result<AutCandidate> {
    if !c.e_modes.is_empty() {
        return Err(Error::AffineOnly);
    }
    let inv = c
        .a_prime
        .inverse()?
        .ok_or_else(|| Error::UnverifiedCandidate(vec!["A' is not invertible over Z".into()]))?;
    let neg = |x: &[Rational]| -> Vec<Rational> { inv.mul_vec_rational(x).into_iter().map(|v| -v).collect() };
    Ok(AutCandidate {
        t: c.t,
        x1: neg(&c.x1),
        x2: neg(&c.x2),
        a_prime: inv,
        e_modes: Vec::new(),
        sigma: None,
    })
}

/// Admissible translations modulo `Γ′`: two copies of `ℤⁿ / (I − M) ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetGroup {
    /// Invariant factors of `I − M`, for one copy.
    #[serde(with = "serde_z::vec")]
    pub factors: Vec<BigInt>,
    #[serde(with = "serde_z")]
    pub order: BigInt,
    /// Generators `V e_j / d_j` of the solutions of `(I − M) x ∈ ℤⁿ` modulo
    /// `ℤⁿ`, for the factors `d_j > 1`.
    #[serde(skip)]
    pub generators: Vec<(BigInt, Vec<Rational>)>,
}

fn reduce_mod_one(v: Vec<Rational>) -> Vec<Rational> {
    v.into_iter().map(|x| crate::scalars::rational::frac(&x)).collect()
}

impl CosetGroup {
    /// One representative `x` in `[0, 1)ⁿ` per class of a single copy.
    pub fn representatives(&self) -> Vec<Vec<Rational>> {
        let n = self.factors.len();
        let mut reps = vec![vec![Rational::zero(); n]];
        for (d, g) in &self.generators {
            let d = d.to_u64().unwrap_or(u64::MAX);
            let mut next = Vec::new();
            for r in &reps {
                for j in 0..d {
                    let jq = Rational::from_integer(BigInt::from(j));
                    let v = r.iter().zip(g).map(|(a, b)| a + &jq * b).collect();
                    next.push(reduce_mod_one(v));
                }
            }
            reps = next;
        }
        reps
    }
}

impl fmt::Display for CosetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        let one = format!("({})", factors.join(","));
        write!(f, "order {}, factors {one}×{one}", self.order)
    }
}

pub fn h_coset_group(s: &ManifoldSpec) -> Result<CosetGroup> {
    let m = lattice_matrix(s)?;
    let n = m.require_square()?;
    let a = &IntMatrix::identity(n) - m;
    let det = a.det()?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let snf = smith_normal_form(&a);
    let factors: Vec<BigInt> = snf.invariant_factors().into_iter().map(|d| d.abs()).collect();
    let generators = factors
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(j, d)| {
            let col = (0..n)
                .map(|i| Rational::new(snf.v[(i, j)].clone(), d.clone()))
                .collect();
            (d.clone(), reduce_mod_one(col))
        })
        .collect();
    Ok(CosetGroup {
        factors,
        order: &det * &det,
        generators,
    })
}

/// Default cap on the number of matrices scanned by [`commutant_search`].
pub const SEARCH_CAP: u128 = 50_000_000;

/// Every `A′` with entries in `[−bound, bound]`, `M^t A′ = A′ M` and
/// `det A′ = ±1`, in row-major lexicographic order.
pub fn commutant_search(s: &ManifoldSpec, t: i64, bound: u32) -> Result<Vec<IntMatrix>> {
    commutant_search_with_cap(s, t, bound, SEARCH_CAP)
}

pub fn commutant_search_with_cap(s: &ManifoldSpec, t: i64, bound: u32, cap: u128) -> Result<Vec<IntMatrix>> {
    if t != 1 && t != -1 {
        return Err(Error::NotInDomain(format!("t = {t} is not 1 or -1")));
    }
    let m = lattice_matrix(s)?;
    let n = m.require_square()?;
    let width = 2 * bound as u128 + 1;
    let size = (0..n * n).try_fold(1u128, |acc, _| acc.checked_mul(width));
    let size = match size {
        Some(v) if v <= cap => v,
        other => {
            return Err(Error::SearchTooLarge {
                size: other.unwrap_or(u128::MAX),
                cap,
            })
        }
    };
    let small = |a: &IntMatrix| -> Result<Vec<i128>> {
        a.entries()
            .iter()
            .map(|x| {
                x.to_i128()
                    .ok_or_else(|| Error::NotInDomain("matrix entries exceed 128-bit range".into()))
            })
            .collect()
    };
    let left = small(&m_pow(m, t)?)?;
    let right = small(m)?;
    let b = bound as i128;
    let mut a = vec![-b; n * n];
    let mut out = Vec::new();
    for step in 0..size {
        if step > 0 {
            // Odometer increment, last entry fastest.
            for slot in a.iter_mut().rev() {
                if *slot < b {
                    *slot += 1;
                    break;
                }
                *slot = -b;
            }
        }
        let intertwines = (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs: i128 = (0..n).map(|k| left[i * n + k] * a[k * n + j]).sum();
                let rhs: i128 = (0..n).map(|k| a[i * n + k] * right[k * n + j]).sum();
                lhs == rhs
            })
        });
        if !intertwines {
            continue;
        }
        let rows: Vec<Vec<BigInt>> = a.chunks(n).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let candidate = IntMatrix::from_rows(rows)?;
        if candidate.det()?.abs().is_one() {
            out.push(candidate);
        }
    }
    Ok(out)
}
