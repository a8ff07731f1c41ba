//! De Rham Betti numbers through the Chevalley–Eilenberg complex of the Lie
//! algebra with basis `e⁰, f⁰, e^i, f^i` and
//! `de^i = −λ_i (e⁰ − q f⁰) ∧ e^i`, `df^i = −λ_i (e⁰ − q f⁰) ∧ f^i`.
//!
//! Each monomial `ω` in the `e^i, f^i` with weight `w` satisfies
//! `dω = −w η ∧ ω` for `η = e⁰ − q f⁰`, so only weight-zero monomials
//! survive: `b_k = Z(k) + 2Z(k−1) + Z(k−2)` where `Z(j)` counts weight-zero
//! monomials of degree `j`. [`ce_betti_oracle`] recomputes the same numbers
//! from ranks of the full differential.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::analyzer::Analyzer;
use crate::error::{Error, Result};
use crate::model::ManifoldSpec;
use crate::scalars::{QVec, Rational};

/// Largest `n` accepted by the oracle (`2n + 2 = 12` generators).
pub const MAX_ORACLE_N: usize = 5;

/// `b_0, …, b_{2n+2}` from the weight-zero count.
pub fn betti_numbers(s: &ManifoldSpec) -> Result<Vec<u64>> {
    Ok(Analyzer::new(s)?.betti_numbers())
}

impl Analyzer<'_> {
    pub fn betti_numbers(&self) -> Vec<u64> {
        let n = self.spec().n();
        let sums = self.subset_sums();
        let mut by_vector: HashMap<&QVec, Vec<u64>> = HashMap::new();
        for (mask, v) in sums.iter().enumerate() {
            by_vector.entry(v).or_insert_with(|| vec![0; n + 1])[(mask as u32).count_ones() as usize] += 1;
        }
        let mut z = vec![0u64; 2 * n + 1];
        for (v, hist) in &by_vector {
            let Some(partner) = by_vector.get(&-*v) else {
                continue;
            };
            for a in 0..=n {
                for b in 0..=n {
                    z[a + b] += hist[a] * partner[b];
                }
            }
        }
        let zget = |j: i64| -> u64 {
            if j < 0 || j as usize >= z.len() {
                0
            } else {
                z[j as usize]
            }
        };
        (0..=2 * n as i64 + 2)
            .map(|k| zget(k) + 2 * zget(k - 1) + zget(k - 2))
            .collect()
    }
}

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn reduce(z: &BigInt) -> u64 {
    z.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below P")
}

fn rational_mod(r: &Rational) -> Result<u64> {
    let den = reduce(r.denom());
    if den == 0 {
        return Err(Error::NotInDomain(format!(
            "denominator of {r} vanishes modulo the evaluation prime"
        )));
    }
    Ok(mul_mod(reduce(r.numer()), inv_mod(den)))
}

fn rank_mod(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = inv_mod(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = (*x + P - mul_mod(f, y)) % P;
            }
        }
        rank += 1;
    }
    rank
}

/// Ranks of `d : Λ^k → Λ^{k+1}` at one point `(q, b)` modulo `P`.
fn differential_ranks(n: usize, lambda_values: &[u64], q: u64) -> Vec<usize> {
    let gens = 2 * n + 2;
    // Generator bits: e⁰ = 0, f⁰ = 1, e^i = 1 + i, f^i = 1 + n + i.
    let weight = |bit: usize| -> Option<u64> {
        match bit {
            0 | 1 => None,
            b if b < 2 + n => Some(lambda_values[b - 2]),
            b => Some(lambda_values[b - 2 - n]),
        }
    };
    let by_degree: Vec<Vec<u32>> = (0..=gens)
        .map(|k| (0u32..1 << gens).filter(|m| m.count_ones() as usize == k).collect())
        .collect();
    let index: Vec<HashMap<u32, usize>> = by_degree
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();

    (0..gens)
        .map(|k| {
            let mut rows = vec![vec![0u64; by_degree[k].len()]; by_degree[k + 1].len()];
            for (col, &mask) in by_degree[k].iter().enumerate() {
                for bit in 0..gens {
                    if mask >> bit & 1 == 0 {
                        continue;
                    }
                    let Some(l) = weight(bit) else { continue };
                    // d(gen) = −λ e⁰∧gen + qλ f⁰∧gen. The derivation sign
                    // (−1)^{#below gen} and the cost of moving e⁰ or f⁰ down
                    // to its slot leave (−1)^{#generators below it}.
                    for (front, coeff) in [(0usize, (P - l) % P), (1usize, mul_mod(q, l))] {
                        if coeff == 0 || mask >> front & 1 == 1 {
                            continue;
                        }
                        let negative = (mask & ((1 << front) - 1)).count_ones() % 2 == 1;
                        let target = mask | 1 << front;
                        let row = index[k + 1][&target];
                        let v = if negative { (P - coeff) % P } else { coeff };
                        rows[row][col] = (rows[row][col] + v) % P;
                    }
                }
            }
            rank_mod(rows)
        })
        .collect()
}

/// Betti numbers from ranks of the full Chevalley–Eilenberg differential at
/// random points, with a fixed seed.
pub fn ce_betti_oracle(s: &ManifoldSpec) -> Result<Vec<u64>> {
    ce_betti_oracle_with(s, 3, 0x5eed)
}

/// As [`ce_betti_oracle`] with `points ≥ 3` evaluation points; ranks are the
/// maxima over the points.
pub fn ce_betti_oracle_with(s: &ManifoldSpec, points: usize, seed: u64) -> Result<Vec<u64>> {
    s.require_valid()?;
    let n = s.n();
    if n > MAX_ORACLE_N {
        return Err(Error::TooLarge {
            n,
            cap: MAX_ORACLE_N,
        });
    }
    let gens = 2 * n + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = vec![0usize; gens];
    for _ in 0..points.max(3) {
        let b: Vec<u64> = (0..s.basis_dim()).map(|_| rng.gen_range(1..P)).collect();
        let q = rng.gen_range(1..P);
        let mut lambda_values = Vec::with_capacity(n);
        for l in s.lambdas() {
            let mut v = 0u64;
            for (c, bj) in l.coords().iter().zip(&b) {
                if !c.is_zero() {
                    v = (v + mul_mod(rational_mod(c)?, *bj)) % P;
                }
            }
            lambda_values.push(v);
        }
        for (k, r) in differential_ranks(n, &lambda_values, q).into_iter().enumerate() {
            best[k] = best[k].max(r);
        }
    }
    let binom = |m: usize, k: usize| -> u64 { (0..k).fold(1u64, |acc, i| acc * (m - i) as u64 / (i + 1) as u64) };
    Ok((0..=gens)
        .map(|k| {
            let rank_out = if k < gens { best[k] } else { 0 };
            let rank_in = if k > 0 { best[k - 1] } else { 0 };
            binom(gens, k) - rank_out as u64 - rank_in as u64
        })
        .collect())
}
