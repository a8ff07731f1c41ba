//! Manifold specs from matrices `M ∈ SL(n, ℤ)`: eigenvalue logarithms as
//! rational vectors over an independent basis, and lattice checks.
//!
//! Eigenvalues are indexed as follows: for each quadratic factor
//! `x² − tx + 1` (by ascending `t`) the larger root then the smaller, then
//! the roots of the remaining factor of degree ≥ 3 in descending order,
//! then every eigenvalue 1.

mod upoly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LambdaSpec, ManifoldSpec, TauSpec};
use crate::scalars::linalg::rref;
use crate::scalars::rational::serde_z;
use crate::scalars::{IntMatrix, QVec, Rational};
use crate::tau::{same_fiber, Triple};

/// The action of `ρ(1)` on the lattice, in the coordinates that diagonalize
/// it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    #[serde(rename = "M")]
    pub m: IntMatrix,
    /// Integer vectors `v` with `Π μ_i^{v_i} = 1`, claimed by the user.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "relations_serde")]
    pub certified_relations: Vec<Vec<BigInt>>,
}

mod relations_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "serde_z::vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Row> = v.iter().map(|r| Row(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

impl LatticeSpec {
    pub fn new(m: IntMatrix) -> Self {
        LatticeSpec {
            m,
            certified_relations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharFactor {
    /// `x − 1`, contributing `λ = 0`.
    One,
    /// `x² − tx + 1` with `t > 2`.
    Quadratic {
        #[serde(with = "serde_z")]
        trace: BigInt,
    },
    /// The squarefree remainder of degree ≥ 3, with only positive real roots.
    Higher {
        #[serde(with = "serde_z::vec")]
        coeffs: Vec<BigInt>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    /// Some relation rests on a floating-point check.
    FloatCertified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    /// `det(xI − M)`, constant term first.
    #[serde(with = "serde_z::vec")]
    pub char_poly: Vec<BigInt>,
    pub factors: Vec<CharFactor>,
    pub basis_dim: usize,
    pub lambdas: Vec<QVec>,
    pub exactness: Exactness,
    /// Approximate eigenvalues in index order, for display.
    pub eigenvalues: Vec<f64>,
}

impl fmt::Display for EigenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis dimension {}", self.basis_dim)?;
        for (i, (l, mu)) in self.lambdas.iter().zip(&self.eigenvalues).enumerate() {
            writeln!(f, "lambda_{} = {l}   (eigenvalue {mu:.12})", i + 1)?;
        }
        f.write_str(match self.exactness {
            Exactness::Exact => "exact",
            Exactness::FloatCertified => "float-certified",
        })
    }
}

/// `det(xI − M)` divided by the factors found, with the eigenvalue index of
/// each root.
struct Factorization {
    factors: Vec<CharFactor>,
    /// For each eigen index: `ln μ`.
    logs: Vec<f64>,
    /// Exact relations among eigen indices, as integer rows.
    relations: Vec<Vec<BigInt>>,
    has_higher: bool,
}

fn unit_row(n: usize, entries: &[(usize, BigInt)]) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); n];
    for (i, v) in entries {
        row[*i] += v;
    }
    row
}

/// `trace(μ^a)` for the larger root `μ` of `x² − tx + 1`, `a = 0, 1, …`.
struct TraceSeq {
    t: BigInt,
    prev: BigInt,
    cur: BigInt,
    exponent: u64,
}

impl TraceSeq {
    fn new(t: &BigInt) -> Self {
        TraceSeq {
            t: t.clone(),
            prev: BigInt::from(2),
            cur: t.clone(),
            exponent: 1,
        }
    }

    fn advance(&mut self) {
        let next = &self.t * &self.cur - &self.prev;
        self.prev = std::mem::replace(&mut self.cur, next);
        self.exponent += 1;
    }
}

/// Positive `(a, b)` with `μ₁^a = μ₂^b` when both units lie in the same
/// real quadratic field.
fn same_field_relation(t1: &BigInt, t2: &BigInt) -> Option<(u64, u64)> {
    let four = BigInt::from(4);
    let prod = (t1 * t1 - &four) * (t2 * t2 - &four);
    let root = prod.sqrt();
    if &root * &root != prod {
        return None;
    }
    // Units > 1 of norm 1 in one field are powers of a common unit; equal
    // powers have equal traces, and the trace determines such a unit.
    let (mut s1, mut s2) = (TraceSeq::new(t1), TraceSeq::new(t2));
    for _ in 0..10_000 {
        match s1.cur.cmp(&s2.cur) {
            std::cmp::Ordering::Equal => return Some((s1.exponent, s2.exponent)),
            std::cmp::Ordering::Less => s1.advance(),
            std::cmp::Ordering::Greater => s2.advance(),
        }
    }
    None
}

fn factorize(m: &IntMatrix) -> Result<(Vec<BigInt>, Factorization)> {
    let n = m.require_square()?;
    let det = m.det()?;
    if !det.is_one() {
        return Err(Error::NotSpecialLinear(det.to_string()));
    }
    let char_poly = m.char_poly()?;
    let mut rest = upoly::from_ints(&char_poly);

    let mut ones = 0usize;
    let x_minus = |r: i64| vec![Rational::from_integer(BigInt::from(-r)), Rational::one()];
    loop {
        let (q, r) = upoly::divrem(&rest, &x_minus(1));
        if !r.is_empty() || upoly::degree(&rest) == 0 {
            break;
        }
        rest = q;
        ones += 1;
    }
    if upoly::divrem(&rest, &x_minus(-1)).1.is_empty() && upoly::degree(&rest) > 0 {
        return Err(Error::NonPositiveSpectrum("-1 is an eigenvalue".into()));
    }

    // Quadratic factors x² − tx + e, e = ±1 (the constant term is a unit).
    let mut quadratics: Vec<BigInt> = Vec::new();
    if upoly::degree(&rest) >= 2 {
        let bound: BigInt = upoly::cauchy_bound(&rest).ceil().to_integer() * 2;
        let limit = bound
            .to_i64()
            .filter(|&b| b <= 1_000_000)
            .ok_or_else(|| Error::UnsupportedCharPoly("coefficients too large to search for quadratic factors".into()))?;
        for t in -limit..=limit {
            for e in [1i64, -1] {
                let quad = vec![
                    Rational::from_integer(BigInt::from(e)),
                    Rational::from_integer(BigInt::from(-t)),
                    Rational::one(),
                ];
                loop {
                    if upoly::degree(&rest) < 2 {
                        break;
                    }
                    let (q, r) = upoly::divrem(&rest, &quad);
                    if !r.is_empty() {
                        break;
                    }
                    if e != 1 || t <= 2 {
                        return Err(Error::NonPositiveSpectrum(format!(
                            "factor x^2 - ({t})x + ({e}) has roots that are not real and positive"
                        )));
                    }
                    rest = q;
                    quadratics.push(BigInt::from(t));
                }
            }
        }
    }

    let mut factors: Vec<CharFactor> = quadratics
        .iter()
        .map(|t| CharFactor::Quadratic { trace: t.clone() })
        .collect();
    let mut logs = Vec::with_capacity(n);
    let mut relations = Vec::new();
    let mut pair_index = Vec::new();
    for t in &quadratics {
        let tf = t.to_f64().unwrap_or(f64::INFINITY);
        let big = (tf + (tf * tf - 4.0).sqrt()) / 2.0;
        let i = logs.len();
        pair_index.push(i);
        logs.push(big.ln());
        logs.push(-big.ln());
        relations.push(unit_row(n, &[(i, BigInt::one()), (i + 1, BigInt::one())]));
    }
    for a in 0..quadratics.len() {
        for b in a + 1..quadratics.len() {
            if let Some((ea, eb)) = same_field_relation(&quadratics[a], &quadratics[b]) {
                relations.push(unit_row(
                    n,
                    &[(pair_index[a], BigInt::from(ea)), (pair_index[b], -BigInt::from(eb))],
                ));
            }
        }
    }

    let mut has_higher = false;
    let deg = upoly::degree(&rest);
    if deg >= 1 {
        if deg < 3 {
            return Err(Error::NonPositiveSpectrum(
                "a factor of degree at most 2 has roots that are not real and positive".into(),
            ));
        }
        if !upoly::is_squarefree(&rest) {
            return Err(Error::UnsupportedCharPoly(
                "repeated irreducible factors of degree 3 or more".into(),
            ));
        }
        let seq = upoly::sturm_sequence(&rest);
        if upoly::count_positive_roots(&seq) != deg {
            return Err(Error::NonPositiveSpectrum(
                "a factor of degree 3 or more has non-real or negative roots".into(),
            ));
        }
        has_higher = true;
        let start = logs.len();
        for r in upoly::positive_roots(&rest, 64) {
            logs.push(r.ln());
        }
        // All roots positive with product 1: their logarithms sum to zero.
        relations.push(unit_row(
            n,
            &(start..logs.len()).map(|i| (i, BigInt::one())).collect::<Vec<_>>(),
        ));
        let coeffs = rest.iter().map(|c| c.to_integer()).collect();
        factors.push(CharFactor::Higher { coeffs });
    }
    for _ in 0..ones {
        let i = logs.len();
        logs.push(0.0);
        relations.push(unit_row(n, &[(i, BigInt::one())]));
        factors.push(CharFactor::One);
    }
    debug_assert_eq!(logs.len(), n);
    Ok((
        char_poly,
        Factorization {
            factors,
            logs,
            relations,
            has_higher,
        },
    ))
}

/// Relative tolerance of the floating-point check on certified relations.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-12;

pub fn analyze_integer_matrix(m: &IntMatrix) -> Result<EigenReport> {
    analyze_lattice(&LatticeSpec::new(m.clone()))
}

/// As [`analyze_integer_matrix`], also merging the certified relations.
pub fn analyze_lattice(lattice: &LatticeSpec) -> Result<EigenReport> {
    let (char_poly, fac) = factorize(&lattice.m)?;
    let n = fac.logs.len();
    let mut relations = fac.relations;
    for (index, v) in lattice.certified_relations.iter().enumerate() {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let terms: Vec<f64> = v
            .iter()
            .zip(&fac.logs)
            .map(|(c, l)| c.to_f64().unwrap_or(f64::INFINITY) * l)
            .collect();
        let residual = terms.iter().sum::<f64>().abs();
        let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
        if residual.is_nan() || residual > CERTIFICATE_TOLERANCE * scale {
            return Err(Error::BadCertificate { index, residual });
        }
        relations.push(v.clone());
    }
    let exactness = if fac.has_higher || !lattice.certified_relations.is_empty() {
        Exactness::FloatCertified
    } else {
        Exactness::Exact
    };

    let lambdas = lambdas_from_relations(n, &relations, &fac.logs);
    let basis_dim = lambdas.first().map_or(1, QVec::dim);
    Ok(EigenReport {
        char_poly,
        factors: fac.factors,
        basis_dim,
        lambdas,
        exactness,
        eigenvalues: fac.logs.iter().map(|l| l.exp()).collect(),
    })
}

/// Coordinates of the eigen indices on the kernel of the relations, the
/// earliest free indices serving as basis symbols (sign-flipped so each is a
/// positive real). At least one coordinate is kept.
fn lambdas_from_relations(n: usize, relations: &[Vec<BigInt>], logs: &[f64]) -> Vec<QVec> {
    // Reverse the columns so that pivots fall on the latest indices.
    let rows: Vec<Vec<Rational>> = relations
        .iter()
        .map(|r| r.iter().rev().cloned().map(Rational::from_integer).collect())
        .collect();
    let (reduced, pivots_rev) = if rows.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(rows)
    };
    let pivots: Vec<usize> = pivots_rev.iter().map(|&c| n - 1 - c).collect();
    let free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let d = free.len().max(1);
    let mut coords = vec![vec![Rational::zero(); d]; n];
    for (j, &f) in free.iter().enumerate() {
        coords[f][j] = Rational::one();
    }
    // Pivot variable x_p = −Σ_{free f} row[f] · x_f.
    for (row, &p) in reduced.iter().zip(&pivots) {
        for (j, &f) in free.iter().enumerate() {
            coords[p][j] = -row[n - 1 - f].clone();
        }
    }
    for (j, &f) in free.iter().enumerate() {
        if logs[f] < 0.0 {
            for c in coords.iter_mut() {
                c[j] = -c[j].clone();
            }
        }
    }
    coords.into_iter().map(QVec::new).collect()
}

pub fn build_spec(m: &IntMatrix, tau: TauSpec) -> Result<ManifoldSpec> {
    build_spec_from_lattice(LatticeSpec::new(m.clone()), tau)
}

pub fn build_spec_from_lattice(lattice: LatticeSpec, tau: TauSpec) -> Result<ManifoldSpec> {
    let report = analyze_lattice(&lattice)?;
    let spec = ManifoldSpec {
        lambda: LambdaSpec::new(report.basis_dim, report.lambdas),
        tau,
        lattice: Some(lattice),
    };
    spec.require_valid()?;
    Ok(spec)
}

/// Whether `M^{a1}` is integral, i.e. `ρ(α)` maps the lattice into itself.
pub fn verify_lattice_preserved(m: &IntMatrix, a1: i64) -> Result<bool> {
    Ok(m.pow(a1)?.is_some())
}

/// Equal matrices and equal moduli (special moduli up to rescaling of the
/// triple).
pub fn specs_isomorphic(s1: &ManifoldSpec, s2: &ManifoldSpec) -> Result<bool> {
    let (Some(l1), Some(l2)) = (&s1.lattice, &s2.lattice) else {
        return Err(Error::MissingLattice);
    };
    if l1.m != l2.m {
        return Ok(false);
    }
    Ok(match (&s1.tau, &s2.tau) {
        (TauSpec::Generic, TauSpec::Generic) => true,
        (TauSpec::Special(a), TauSpec::Special(b)) => same_fiber(&Triple::from(a), &Triple::from(b)),
        _ => false,
    })
}
