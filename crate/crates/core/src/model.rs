//! Manifold specs, their validation, and the kernel / fixed locus of
//! the action ρ.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::{self, LatticeSpec};
use crate::error::{Error, Result};
use crate::scalars::linalg::rank;
use crate::scalars::QVec;

/// The weights `λ_1, …, λ_n` as rational vectors over `b_1, …, b_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSpec {
    basis_dim: usize,
    lambdas: Vec<QVec>,
}

impl LambdaSpec {
    /// No checks are made here; see [`validate_spec`].
    pub fn new(basis_dim: usize, lambdas: Vec<QVec>) -> Self {
        LambdaSpec { basis_dim, lambdas }
    }

    /// One row per `λ_i`.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let basis_dim = rows.first().map_or(0, |r| r.len());
        LambdaSpec::new(basis_dim, rows.iter().map(|r| QVec::from_ints(r)).collect())
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn basis_dim(&self) -> usize {
        self.basis_dim
    }

    pub fn lambdas(&self) -> &[QVec] {
        &self.lambdas
    }

    /// `λ_i` for `1 ≤ i ≤ n`.
    pub fn lambda(&self, i: usize) -> Result<&QVec> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(&self.lambdas[i - 1])
    }

    pub fn sum(&self) -> QVec {
        self.lambdas
            .iter()
            .fold(QVec::zero(self.basis_dim), |acc, l| &acc + l)
    }

    pub fn is_torus(&self) -> bool {
        self.lambdas.iter().all(QVec::is_zero)
    }
}

/// τ with `Re τ / |τ|² ∈ ℚ`, written as `τ(c, h, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialTau {
    pub c_ref: QVec,
    #[serde(with = "crate::scalars::rational::serde_z")]
    pub h: BigInt,
    #[serde(with = "crate::scalars::rational::serde_z")]
    pub k: BigInt,
    /// User assertion that `c_ref · k > 0`; checked whenever the sign of
    /// `c_ref` is determined by its coordinates.
    pub ck_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSpec {
    /// `Re τ / |τ|² ∉ ℚ`, by declaration.
    Generic,
    Special(SpecialTau),
}

impl TauSpec {
    pub fn special(c_ref: QVec, h: i64, k: i64) -> Self {
        TauSpec::Special(SpecialTau {
            c_ref,
            h: h.into(),
            k: k.into(),
            ck_positive: true,
        })
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, TauSpec::Generic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub lambda: LambdaSpec,
    pub tau: TauSpec,
    pub lattice: Option<LatticeSpec>,
}

impl ManifoldSpec {
    pub fn new(lambda: LambdaSpec, tau: TauSpec) -> Self {
        ManifoldSpec {
            lambda,
            tau,
            lattice: None,
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.n()
    }

    pub fn basis_dim(&self) -> usize {
        self.lambda.basis_dim()
    }

    pub fn lambdas(&self) -> &[QVec] {
        self.lambda.lambdas()
    }

    /// Fails with [`Error::InvalidSpec`] listing every violation.
    pub fn require_valid(&self) -> Result<()> {
        let report = validate_spec(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(
                report.violations.iter().map(ToString::to_string).collect(),
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyLambda,
    LambdaDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    LambdaSumNonzero {
        sum: QVec,
    },
    TauDimension {
        expected: usize,
        found: usize,
    },
    TauKZero,
    TauCZero,
    TauSignNotAsserted,
    TauSignContradiction,
    LatticeSize {
        expected: usize,
        found: String,
    },
    LatticeInconsistent {
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLambda => write!(f, "n must be at least 1"),
            Violation::LambdaDimension {
                index,
                expected,
                found,
            } => write!(f, "lambda_{index} has {found} coordinates, expected {expected}"),
            Violation::LambdaSumNonzero { sum } => write!(
                f,
                "sum of lambda nonzero ({sum}); G admits a lattice only if it is unimodular, which forces sum lambda_i = 0"
            ),
            Violation::TauDimension { expected, found } => {
                write!(f, "tau c has {found} coordinates, expected {expected}")
            }
            Violation::TauKZero => write!(f, "special tau requires k != 0"),
            Violation::TauCZero => write!(f, "special tau requires c != 0"),
            Violation::TauSignNotAsserted => write!(f, "special tau requires c*k > 0"),
            Violation::TauSignContradiction => {
                write!(f, "c*k > 0 contradicts the sign of c and k")
            }
            Violation::LatticeSize { expected, found } => {
                write!(f, "lattice matrix is {found}, expected {expected}x{expected}")
            }
            Violation::LatticeInconsistent { reason } => {
                write!(f, "lattice inconsistent with lambdas: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Non-fatal remarks, e.g. basis symbols no `λ_i` uses.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_spec(s: &ManifoldSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = s.basis_dim();
    if s.n() == 0 {
        report.violations.push(Violation::EmptyLambda);
    }
    let mut dims_ok = true;
    for (i, l) in s.lambdas().iter().enumerate() {
        if l.dim() != d {
            dims_ok = false;
            report.violations.push(Violation::LambdaDimension {
                index: i + 1,
                expected: d,
                found: l.dim(),
            });
        }
    }
    if dims_ok {
        let sum = s.lambda.sum();
        if !sum.is_zero() {
            report.violations.push(Violation::LambdaSumNonzero { sum });
        }
        for j in 0..d {
            if s.lambdas().iter().all(|l| l.coords()[j].is_zero()) {
                report
                    .warnings
                    .push(format!("basis symbol b{} is not used by any lambda", j + 1));
            }
        }
    }

    if let TauSpec::Special(t) = &s.tau {
        if t.c_ref.dim() != d {
            report.violations.push(Violation::TauDimension {
                expected: d,
                found: t.c_ref.dim(),
            });
        }
        if t.k.is_zero() {
            report.violations.push(Violation::TauKZero);
        }
        if t.c_ref.is_zero() {
            report.violations.push(Violation::TauCZero);
        }
        if !t.ck_positive {
            report.violations.push(Violation::TauSignNotAsserted);
        } else if let Some(sign) = t.c_ref.definite_sign() {
            if !t.k.is_zero() && (sign > 0) != t.k.is_positive() {
                report.violations.push(Violation::TauSignContradiction);
            }
        }
    }

    if let Some(lattice) = &s.lattice {
        let m = &lattice.m;
        if !m.is_square() || m.rows() != s.n() {
            report.violations.push(Violation::LatticeSize {
                expected: s.n(),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        } else if dims_ok {
            if let Some(reason) = lattice_inconsistency(s, lattice) {
                report
                    .violations
                    .push(Violation::LatticeInconsistent { reason });
            }
        }
    }
    report
}

/// The lattice and the declared weights must satisfy the same ℚ-linear
/// relations: equal column spaces of the `n × d` coordinate matrices.
fn lattice_inconsistency(s: &ManifoldSpec, lattice: &LatticeSpec) -> Option<String> {
    let analyzed = match construct::analyze_lattice(lattice) {
        Ok(r) => r,
        Err(e) => return Some(e.to_string()),
    };
    let rows = |ls: &[QVec]| -> Vec<Vec<_>> { ls.iter().map(|l| l.coords().to_vec()).collect() };
    let ours = rows(s.lambdas());
    let theirs = rows(&analyzed.lambdas);
    let joint: Vec<Vec<_>> = ours
        .iter()
        .zip(&theirs)
        .map(|(a, b)| a.iter().chain(b).cloned().collect())
        .collect();
    let (r1, r2, r3) = (rank(&ours), rank(&theirs), rank(&joint));
    if r1 == r2 && r2 == r3 {
        None
    } else {
        Some(format!(
            "the eigenvalue logarithms of M satisfy different rational relations than the declared lambdas (ranks {r1}, {r2}, joint {r3})"
        ))
    }
}

/// Kernel of `ρ_τ : ℂ → GL(n, ℂ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// All of ℂ (every `λ_i = 0`, a torus).
    AllOfC,
    /// The real line `τ·ℝ`.
    TauLine,
}

pub fn rho_kernel(s: &ManifoldSpec) -> KernelKind {
    if s.lambda.is_torus() {
        KernelKind::AllOfC
    } else {
        KernelKind::TauLine
    }
}

/// 1-based indices spanning `Fix(ρ_τ(w))` for any `w ∉ ker ρ_τ`.
pub fn rho_fixed_locus(s: &ManifoldSpec) -> Result<BTreeSet<usize>> {
    if s.lambda.is_torus() {
        return Err(Error::RhoTrivial);
    }
    Ok(s.lambdas()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_zero())
        .map(|(i, _)| i + 1)
        .collect())
}

/// Always 0: the canonical bundle is trivialized by the holomorphic form
/// `φ⁰ ∧ φ¹ ∧ … ∧ φⁿ`, which is re-checked to be closed.
pub fn kodaira_dimension(s: &ManifoldSpec) -> Result<i32> {
    s.require_valid()?;
    let psi = crate::forms::canonical_psi(&s.lambda);
    let dpsi = psi.d(&s.lambda)?;
    if !dpsi.is_zero() {
        return Err(Error::InvalidSpec(vec![format!(
            "d(psi) = {dpsi} is nonzero"
        )]));
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn spec(rows: &[&[i64]], tau: TauSpec) -> ManifoldSpec {
        ManifoldSpec::new(LambdaSpec::from_ints(rows), tau)
    }

    #[test]
    fn validate_examples() {
        assert!(validate_spec(&spec(&[&[1], &[-1]], TauSpec::Generic)).is_valid());
        let bad = validate_spec(&spec(&[&[1], &[1]], TauSpec::Generic));
        assert!(matches!(bad.violations[..], [Violation::LambdaSumNonzero { .. }]));
        assert!(bad.violations[0].to_string().contains("sum of lambda nonzero"));
        let k0 = validate_spec(&spec(&[&[1], &[-1]], TauSpec::special(QVec::from_ints(&[1]), 0, 0)));
        assert!(k0.violations.contains(&Violation::TauKZero));
    }

    #[test]
    fn validate_lists_every_violation() {
        let mut s = spec(&[&[1], &[1]], TauSpec::special(QVec::from_ints(&[0, 0]), 1, 0));
        s.lambda = LambdaSpec::new(1, vec![QVec::from_ints(&[1]), QVec::from_ints(&[1])]);
        let r = validate_spec(&s);
        assert!(r.violations.len() >= 3, "{:?}", r.violations);
    }

    #[test]
    fn sign_contradiction_detected() {
        let s = spec(&[&[1], &[-1]], TauSpec::special(QVec::from_ints(&[1]), 0, -1));
        assert!(validate_spec(&s)
            .violations
            .contains(&Violation::TauSignContradiction));
        // Indefinite sign: accepted on assertion.
        let s = ManifoldSpec::new(
            LambdaSpec::from_ints(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            TauSpec::special(QVec::from_ints(&[1, -1]), 0, -1),
        );
        assert!(validate_spec(&s).is_valid());
    }

    #[test]
    fn dead_basis_symbol_is_a_warning() {
        let r = validate_spec(&spec(&[&[0], &[0]], TauSpec::Generic));
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(rho_kernel(&spec(&[&[0], &[0]], TauSpec::Generic)), KernelKind::AllOfC);
        assert_eq!(rho_kernel(&spec(&[&[1], &[-1]], TauSpec::Generic)), KernelKind::TauLine);
        assert_eq!(
            rho_kernel(&spec(&[&[1], &[0], &[-1]], TauSpec::Generic)),
            KernelKind::TauLine
        );
    }

    #[test]
    fn fixed_locus_examples() {
        assert!(rho_fixed_locus(&spec(&[&[1], &[-1]], TauSpec::Generic))
            .unwrap()
            .is_empty());
        assert_eq!(
            rho_fixed_locus(&spec(&[&[1], &[0], &[-1]], TauSpec::Generic)).unwrap(),
            BTreeSet::from([2])
        );
        assert_eq!(
            rho_fixed_locus(&spec(&[&[0], &[0]], TauSpec::Generic)),
            Err(Error::RhoTrivial)
        );
    }

    #[test]
    fn kodaira_examples() {
        assert_eq!(kodaira_dimension(&spec(&[&[1], &[-1]], TauSpec::Generic)), Ok(0));
        assert_eq!(kodaira_dimension(&spec(&[&[0], &[0]], TauSpec::Generic)), Ok(0));
        assert_eq!(kodaira_dimension(&spec(&[&[1], &[2], &[-3]], TauSpec::Generic)), Ok(0));
        let mut frac = spec(&[&[1], &[-1]], TauSpec::Generic);
        frac.lambda = LambdaSpec::new(1, vec![QVec::new(vec![rat(1, 2)]), QVec::new(vec![rat(-1, 2)])]);
        assert_eq!(kodaira_dimension(&frac), Ok(0));
        assert!(kodaira_dimension(&spec(&[&[1], &[1]], TauSpec::Generic)).is_err());
    }
}
