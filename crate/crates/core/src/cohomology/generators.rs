//! Explicit generators of Dolbeault cohomology: the four shapes
//! `f·φ^I∧φ̄^J`, `f·φ⁰∧φ^I∧φ̄^J`, `f·φ̄⁰∧φ^I∧φ̄^J`, `f·φ⁰∧φ̄⁰∧φ^I∧φ̄^J`
//! with `f = f_{c_IJ}` and `c_IJ` admissible.

use std::fmt;

use serde::Serialize;

use super::analyzer::Analyzer;
use crate::error::{Error, Result};
use crate::forms::{CoframeMonomial, InvariantForm, MultiIndex};
use crate::model::ManifoldSpec;
use crate::scalars::{Poly, QVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Plain,
    Phi0,
    PhiBar0,
    Both,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Plain, Family::Phi0, Family::PhiBar0, Family::Both];

    fn extra(self) -> (bool, bool) {
        match self {
            Family::Plain => (false, false),
            Family::Phi0 => (true, false),
            Family::PhiBar0 => (false, true),
            Family::Both => (true, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDescriptor {
    pub family: Family,
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub character: QVec,
}

impl GeneratorDescriptor {
    pub fn monomial(&self) -> CoframeMonomial {
        let (phi0, phibar0) = self.family.extra();
        CoframeMonomial::new(phi0, phibar0, self.i, self.j)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.monomial().bidegree()
    }

    pub fn to_form(&self, n: usize) -> InvariantForm {
        InvariantForm::term(
            n,
            self.character.dim(),
            Poly::one(),
            self.character.clone(),
            self.monomial(),
        )
    }
}

impl fmt::Display for GeneratorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} I={} J={} c={}",
            self.family, self.i, self.j, self.character
        )
    }
}

/// Generators of `H^{p,q}`: by family, then `I` and `J` by ascending mask.
pub fn dolbeault_generators(s: &ManifoldSpec, p: usize, q: usize) -> Result<Vec<GeneratorDescriptor>> {
    let analyzer = Analyzer::new(s)?;
    let n = s.n();
    if p > n + 1 || q > n + 1 {
        return Err(Error::OutOfRange {
            p: p.max(q),
            max: n + 1,
        });
    }
    let sums = analyzer.subset_sums();
    let mut out = Vec::new();
    for family in Family::ALL {
        let (phi0, phibar0) = family.extra();
        let (Some(a), Some(b)) = (p.checked_sub(usize::from(phi0)), q.checked_sub(usize::from(phibar0))) else {
            continue;
        };
        if a > n || b > n {
            continue;
        }
        for i in (0u32..1 << n).filter(|m| m.count_ones() as usize == a) {
            for j in (0u32..1 << n).filter(|m| m.count_ones() as usize == b) {
                if analyzer.pair_admissible(i, j) {
                    out.push(GeneratorDescriptor {
                        family,
                        i: MultiIndex(i),
                        j: MultiIndex(j),
                        character: &sums[i as usize] + &sums[j as usize],
                    });
                }
            }
        }
    }
    Ok(out)
}
