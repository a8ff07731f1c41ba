//! Counting admissible pairs `(I, J)` without visiting all `4ⁿ` of them.
//!
//! Every subset sum `v = Σ_{i∈I} λ_i` gets a key such that `v₁ + v₂` is
//! admissible exactly when the keys of `v₁` and `v₂` are opposite. For a
//! generic modulus the key is `v` itself. For `τ(c, h, k)` write
//! `v = t + r·c` with `t` vanishing on the first nonzero coordinate of `c`;
//! the key is `(t, frac(r·gcd(h, k)))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::tau_gcd;
use crate::error::{Error, Result};
use crate::forms::MultiIndex;
use crate::model::{ManifoldSpec, TauSpec};
use crate::scalars::rational::{frac, Rational};
use crate::scalars::QVec;

/// Default cap on `n` for the subset enumeration.
pub const DEFAULT_MAX_N: usize = 16;
/// Above this, subset masks no longer fit the form engine.
pub const HARD_MAX_N: usize = 30;

type Key = (QVec, Rational);

fn neg_key(k: &Key) -> Key {
    (-&k.0, frac(&-&k.1))
}

/// Subset sums of the weights, classified for admissibility.
pub struct Analyzer<'a> {
    spec: &'a ManifoldSpec,
    sums: Vec<QVec>,
    keys: Vec<Key>,
    /// `r` of the decomposition `v = t + r·c_ref` (special τ only).
    ratios: Vec<Rational>,
    /// Masks per key, ascending.
    groups: HashMap<Key, Vec<u32>>,
    /// `admissible[a][b]` = #{(I, J) : |I| = a, |J| = b, c_IJ admissible}.
    admissible: Vec<Vec<u64>>,
}

impl<'a> Analyzer<'a> {
    pub fn new(spec: &'a ManifoldSpec) -> Result<Self> {
        Self::with_cap(spec, DEFAULT_MAX_N)
    }

    /// `cap` is clamped to [`HARD_MAX_N`].
    pub fn with_cap(spec: &'a ManifoldSpec, cap: usize) -> Result<Self> {
        spec.require_valid()?;
        let n = spec.n();
        let cap = cap.min(HARD_MAX_N);
        if n > cap {
            return Err(Error::TooLarge { n, cap });
        }
        let lambdas = spec.lambdas();
        let mut sums = Vec::with_capacity(1 << n);
        sums.push(QVec::zero(spec.basis_dim()));
        for mask in 1usize..1 << n {
            let low = mask.trailing_zeros() as usize;
            let v = &sums[mask & (mask - 1)] + &lambdas[low];
            sums.push(v);
        }

        let (keys, ratios): (Vec<Key>, Vec<Rational>) = match &spec.tau {
            TauSpec::Generic => sums
                .iter()
                .map(|v| ((v.clone(), Rational::zero()), Rational::zero()))
                .unzip(),
            TauSpec::Special(t) => {
                let g = Rational::from_integer(tau_gcd(&t.h, &t.k));
                let j = t
                    .c_ref
                    .coords()
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("validated: c_ref is nonzero");
                let cj = &t.c_ref.coords()[j];
                sums.iter()
                    .map(|v| {
                        let r = &v.coords()[j] / cj;
                        let rest = v - &t.c_ref.scale(&r);
                        ((rest, frac(&(&r * &g))), r)
                    })
                    .unzip()
            }
        };

        let mut groups: HashMap<Key, Vec<u32>> = HashMap::new();
        for (mask, k) in keys.iter().enumerate() {
            groups.entry(k.clone()).or_default().push(mask as u32);
        }

        let mut admissible = vec![vec![0u64; n + 1]; n + 1];
        let histogram = |masks: &[u32]| {
            let mut h = vec![0u64; n + 1];
            for m in masks {
                h[m.count_ones() as usize] += 1;
            }
            h
        };
        for (k, masks) in &groups {
            let Some(partners) = groups.get(&neg_key(k)) else {
                continue;
            };
            let (ha, hb) = (histogram(masks), histogram(partners));
            for a in 0..=n {
                for b in 0..=n {
                    admissible[a][b] += ha[a] * hb[b];
                }
            }
        }

        Ok(Analyzer {
            spec,
            sums,
            keys,
            ratios,
            groups,
            admissible,
        })
    }

    pub fn spec(&self) -> &ManifoldSpec {
        self.spec
    }

    pub(crate) fn subset_sums(&self) -> &[QVec] {
        &self.sums
    }

    /// `A(a, b)`; zero outside `0 ≤ a, b ≤ n`.
    pub fn admissible_count(&self, a: i64, b: i64) -> u64 {
        let n = self.spec.n() as i64;
        if a < 0 || b < 0 || a > n || b > n {
            return 0;
        }
        self.admissible[a as usize][b as usize]
    }

    /// Whether `c_IJ` is admissible, for subset masks `I`, `J`.
    pub fn pair_admissible(&self, i: u32, j: u32) -> bool {
        self.keys[j as usize] == neg_key(&self.keys[i as usize])
    }

    pub fn hodge_number(&self, p: usize, q: usize) -> u64 {
        let (p, q) = (p as i64, q as i64);
        self.admissible_count(p, q)
            + self.admissible_count(p - 1, q)
            + self.admissible_count(p, q - 1)
            + self.admissible_count(p - 1, q - 1)
    }

    pub fn hodge_table(&self) -> HodgeTable {
        let n = self.spec.n();
        let h = (0..=n + 1)
            .map(|p| (0..=n + 1).map(|q| self.hodge_number(p, q)).collect())
            .collect();
        HodgeTable { n, h }
    }

    /// The first admissible pair with nonzero character, `J` outer and `I`
    /// inner, both by ascending mask.
    pub fn frolicher(&self) -> FrolicherVerdict {
        if self.spec.tau.is_generic() {
            return FrolicherVerdict {
                degenerates: true,
                witness: None,
            };
        }
        let mut exact: HashMap<&QVec, usize> = HashMap::new();
        for v in &self.sums {
            *exact.entry(v).or_default() += 1;
        }
        for (j, vj) in self.sums.iter().enumerate() {
            let target = -vj;
            let group = &self.groups[&neg_key(&self.keys[j])];
            if group.len() <= exact.get(&target).copied().unwrap_or(0) {
                continue;
            }
            let i = group
                .iter()
                .copied()
                .find(|&i| self.sums[i as usize] != target)
                .expect("group larger than its zero-character part");
            return FrolicherVerdict {
                degenerates: false,
                witness: Some((MultiIndex(i), MultiIndex(j as u32))),
            };
        }
        FrolicherVerdict {
            degenerates: true,
            witness: None,
        }
    }

    pub fn admissible_characters(&self) -> AdmissibleCharacters {
        let TauSpec::Special(t) = &self.spec.tau else {
            return AdmissibleCharacters::ZeroOnly;
        };
        let g = tau_gcd(&t.h, &t.k);
        let gq = Rational::from_integer(g.clone());
        // Per key: distinct r with the least mask realizing it.
        let mut by_key: HashMap<&Key, BTreeMap<&Rational, u32>> = HashMap::new();
        for (k, masks) in &self.groups {
            let entry = by_key.entry(k).or_default();
            for &m in masks {
                entry.entry(&self.ratios[m as usize]).or_insert(m);
            }
        }
        let mut best: BTreeMap<BigInt, (u32, u32)> = BTreeMap::new();
        for (k, rs) in &by_key {
            let Some(partners) = by_key.get(&neg_key(k)) else {
                continue;
            };
            for (r1, &i) in rs {
                for (r2, &j) in partners {
                    let m = (*r1 + *r2) * &gq;
                    debug_assert!(m.is_integer());
                    let m = m.to_integer();
                    let cand = (j, i);
                    best.entry(m)
                        .and_modify(|w| {
                            if cand < *w {
                                *w = cand
                            }
                        })
                        .or_insert(cand);
                }
            }
        }
        let realized = best
            .into_iter()
            .map(|(m, (j, i))| RealizedCharacter {
                character: t.c_ref.scale(&Rational::new(m.clone(), g.clone())),
                m,
                witness_i: MultiIndex(i),
                witness_j: MultiIndex(j),
            })
            .collect();
        AdmissibleCharacters::Cyclic {
            c_ref: t.c_ref.clone(),
            gcd: g,
            realized,
        }
    }

    pub fn deformations(&self) -> Deformations {
        let n = self.spec.n();
        let h1n = self.hodge_number(1, n);
        let unobstructed = self.frolicher().degenerates;
        let closed_form = unobstructed.then(|| {
            let ls = self.spec.lambdas();
            let zeros = ls.iter().filter(|l| l.is_zero()).count() as u64;
            let mut equal = 0u64;
            for a in 0..n {
                for b in a + 1..n {
                    if ls[a] == ls[b] {
                        equal += 1;
                    }
                }
            }
            1 + n as u64 + 2 * zeros + 2 * equal
        });
        Deformations {
            h1n,
            unobstructed,
            closed_form,
        }
    }

    pub fn albanese(&self) -> AlbaneseReport {
        let admissible = (0..self.spec.n())
            .filter(|&i| self.pair_admissible(1 << i, 0))
            .count() as u64;
        let h10 = 1 + admissible;
        debug_assert_eq!(h10, self.hodge_number(1, 0));
        AlbaneseReport {
            h10,
            albanese_is_projection: if h10 == 1 {
                AlbaneseVerdict::Yes
            } else {
                AlbaneseVerdict::Unknown
            },
        }
    }
}

/// `h^{p,q}` for `0 ≤ p, q ≤ n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeTable {
    pub n: usize,
    pub h: Vec<Vec<u64>>,
}

impl HodgeTable {
    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.h[p][q]
    }

    /// `Σ_{p+q=k} h^{p,q}` for `k = 0, …, 2n + 2`.
    pub fn degree_sums(&self) -> Vec<u64> {
        let m = self.n + 1;
        (0..=2 * m)
            .map(|k| {
                (0..=m)
                    .filter(|&p| k >= p && k - p <= m)
                    .map(|p| self.h[p][k - p])
                    .sum()
            })
            .collect()
    }

    /// Failures of `h^{p,q} = h^{q,p}`, `h^{p,q} = h^{n+1−p,n+1−q}` and
    /// `h^{0,0} = h^{n+1,n+1} = 1`.
    pub fn symmetry_violations(&self) -> Vec<String> {
        let m = self.n + 1;
        let mut out = Vec::new();
        for p in 0..=m {
            for q in 0..=m {
                if self.h[p][q] != self.h[q][p] {
                    out.push(format!("h^{{{p},{q}}} != h^{{{q},{p}}}"));
                }
                if self.h[p][q] != self.h[m - p][m - q] {
                    out.push(format!("h^{{{p},{q}}} != h^{{{},{}}}", m - p, m - q));
                }
            }
        }
        if self.h[0][0] != 1 || self.h[m][m] != 1 {
            out.push("corner Hodge numbers differ from 1".into());
        }
        out
    }
}

impl fmt::Display for HodgeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.n + 1;
        let width = self
            .h
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        write!(f, "{:>5}", "p\\q")?;
        for q in 0..=m {
            write!(f, " {q:>width$}")?;
        }
        writeln!(f)?;
        for p in 0..=m {
            write!(f, "{p:>5}")?;
            for q in 0..=m {
                write!(f, " {:>width$}", self.h[p][q])?;
            }
            writeln!(f)?;
        }
        let sums: Vec<String> = self.degree_sums().iter().map(ToString::to_string).collect();
        write!(f, "degree sums: {}", sums.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrolicherVerdict {
    pub degenerates: bool,
    /// An admissible `(I, J)` with `c_IJ ≠ 0`.
    pub witness: Option<(MultiIndex, MultiIndex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedCharacter {
    /// `c_IJ = m · c_ref / gcd(h, k)`.
    pub m: BigInt,
    pub character: QVec,
    pub witness_i: MultiIndex,
    pub witness_j: MultiIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibleCharacters {
    /// Only the zero character.
    ZeroOnly,
    /// `{m · c_ref / g}` for the listed `m`, ascending.
    Cyclic {
        c_ref: QVec,
        gcd: BigInt,
        realized: Vec<RealizedCharacter>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deformations {
    /// `h^{1,n}`.
    pub h1n: u64,
    pub unobstructed: bool,
    /// `1 + n + 2#{λ_i = 0} + 2#{i < j : λ_i = λ_j}` when unobstructed.
    pub closed_form: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlbaneseVerdict {
    Yes,
    Unknown,
}

impl fmt::Display for AlbaneseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlbaneseVerdict::Yes => "yes",
            AlbaneseVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlbaneseReport {
    pub h10: u64,
    pub albanese_is_projection: AlbaneseVerdict,
}

pub fn hodge_table(s: &ManifoldSpec) -> Result<HodgeTable> {
    Ok(Analyzer::new(s)?.hodge_table())
}

pub fn frolicher_degenerates(s: &ManifoldSpec) -> Result<FrolicherVerdict> {
    Ok(Analyzer::new(s)?.frolicher())
}

/// Equivalent to degeneration of the Frölicher spectral sequence at `E₁`.
pub fn ddbar_lemma(s: &ManifoldSpec) -> Result<bool> {
    Ok(frolicher_degenerates(s)?.degenerates)
}

pub fn admissible_character_set(s: &ManifoldSpec) -> Result<AdmissibleCharacters> {
    Ok(Analyzer::new(s)?.admissible_characters())
}

pub fn deformation_dimension(s: &ManifoldSpec) -> Result<Deformations> {
    Ok(Analyzer::new(s)?.deformations())
}

pub fn albanese_verdict(s: &ManifoldSpec) -> Result<AlbaneseReport> {
    Ok(Analyzer::new(s)?.albanese())
}

impl RealizedCharacter {
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
}

impl AdmissibleCharacters {
    /// The realized multiples `m`; `[0]` when only the zero character occurs.
    pub fn multiples(&self) -> Vec<BigInt> {
        match self {
            AdmissibleCharacters::ZeroOnly => vec![BigInt::zero()],
            AdmissibleCharacters::Cyclic { realized, .. } => {
                realized.iter().map(|r| r.m.clone()).collect()
            }
        }
    }
}
