//! Cohomological invariants computed from the admissible characters
//! `c_IJ = Σ_{i∈I} λ_i + Σ_{j∈J} λ_j`.

mod analyzer;
mod betti;
mod generators;
mod pkahler;

use num_bigint::BigInt;
use num_integer::Integer;

pub use analyzer::{
    admissible_character_set, albanese_verdict, ddbar_lemma, deformation_dimension,
    frolicher_degenerates, hodge_table, AdmissibleCharacters, AlbaneseReport, AlbaneseVerdict,
    Analyzer, Deformations, FrolicherVerdict, HodgeTable, RealizedCharacter, DEFAULT_MAX_N,
    HARD_MAX_N,
};
pub use betti::{betti_numbers, ce_betti_oracle, ce_betti_oracle_with, MAX_ORACLE_N};
pub use generators::{dolbeault_generators, Family, GeneratorDescriptor};
pub use pkahler::{pkahler_status, PKahlerReport, PKahlerVerdict, PKahlerWitness};

use crate::error::{Error, Result};
use crate::model::{LambdaSpec, TauSpec};
use crate::scalars::rational::Rational;
use crate::scalars::QVec;

/// `c_IJ` for 1-based index lists.
pub fn character_of(i: &[usize], j: &[usize], lambda: &LambdaSpec) -> Result<QVec> {
    let mut c = QVec::zero(lambda.basis_dim());
    for &k in i.iter().chain(j) {
        c = &c + lambda.lambda(k)?;
    }
    Ok(c)
}

/// `gcd(h, k)` of a special modulus; positive because `k ≠ 0`.
fn tau_gcd(h: &BigInt, k: &BigInt) -> BigInt {
    h.gcd(k)
}

/// Whether `f_c` is invariant under `Λ_τ`.
pub fn is_admissible(c: &QVec, tau: &TauSpec) -> bool {
    if c.is_zero() {
        return true;
    }
    match tau {
        TauSpec::Generic => false,
        TauSpec::Special(t) => match c.proportionality(&t.c_ref) {
            Ok(Some(r)) => (r * Rational::from_integer(tau_gcd(&t.h, &t.k))).is_integer(),
            _ => false,
        },
    }
}

fn require_dims(c: &QVec, tau: &TauSpec) -> Result<()> {
    if let TauSpec::Special(t) = tau {
        if t.c_ref.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: t.c_ref.dim(),
                found: c.dim(),
            });
        }
    }
    Ok(())
}

/// [`is_admissible`] with a dimension check.
pub fn try_is_admissible(c: &QVec, tau: &TauSpec) -> Result<bool> {
    require_dims(c, tau)?;
    Ok(is_admissible(c, tau))
}
