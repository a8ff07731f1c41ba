//! Univariate polynomials over ℚ, coefficients from the constant term up.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalars::rational::{to_f64, Rational};

pub type UPoly = Vec<Rational>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn from_ints(c: &[BigInt]) -> UPoly {
    trim(c.iter().cloned().map(Rational::from_integer).collect())
}

/// Degree; the zero polynomial reports 0.
pub fn degree(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn eval(p: &UPoly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &UPoly) -> UPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero").clone();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().expect("nonempty") / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic greatest common divisor.
pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &lead;
        }
    }
    x
}

pub fn is_squarefree(p: &UPoly) -> bool {
    degree(&gcd(p, &derivative(p))) == 0
}

pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![trim(p.clone()), derivative(p)];
    while !seq.last().expect("nonempty").is_empty() {
        let n = seq.len();
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq.pop();
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn changes_at(seq: &[UPoly], x: &Rational) -> usize {
    sign_changes(seq.iter().map(|p| sign(&eval(p, x))))
}

fn changes_at_infinity(seq: &[UPoly]) -> usize {
    sign_changes(seq.iter().map(|p| p.last().map_or(0, sign)))
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[UPoly], a: &Rational, b: &Rational) -> usize {
    changes_at(seq, a) - changes_at(seq, b)
}

/// Number of distinct real roots in `(0, ∞)`.
pub fn count_positive_roots(seq: &[UPoly]) -> usize {
    changes_at(seq, &Rational::zero()) - changes_at_infinity(seq)
}

/// `1 + max |a_i / a_n|`, exceeding every root's absolute value.
pub fn cauchy_bound(p: &UPoly) -> Rational {
    let lead = p.last().expect("nonzero polynomial").abs();
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Positive real roots of a squarefree `p`, in descending order, each refined
/// by exact bisection until the bracket is narrower than `2^{-bits}` relative
/// to the Cauchy bound.
pub fn positive_roots(p: &UPoly, bits: u32) -> Vec<f64> {
    let seq = sturm_sequence(p);
    let two = Rational::from_integer(BigInt::from(2));
    let mut stack = vec![(Rational::zero(), cauchy_bound(p))];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match count_roots(&seq, &a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let mid = (&a + &b) / &two;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    let mut roots: Vec<f64> = isolated
        .into_iter()
        .map(|(mut a, mut b)| {
            for _ in 0..bits {
                let mid = (&a + &b) / &two;
                if count_roots(&seq, &a, &mid) == 1 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            to_f64(&((a + b) / &two))
        })
        .collect();
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::int;

    fn p(c: &[i64]) -> UPoly {
        from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn division() {
        // (x^2 - 3x + 1)(x - 1) = x^3 - 4x^2 + 4x - 1
        let (q, r) = divrem(&p(&[-1, 4, -4, 1]), &p(&[-1, 1]));
        assert_eq!(q, p(&[1, -3, 1]));
        assert!(r.is_empty());
        assert_eq!(eval(&p(&[1, -3, 1]), &int(2)), int(-1));
    }

    #[test]
    fn squarefree_and_roots() {
        assert!(!is_squarefree(&p(&[1, -2, 1])));
        assert!(is_squarefree(&p(&[1, -3, 1])));
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let f = p(&[-6, 11, -6, 1]);
        assert_eq!(count_positive_roots(&sturm_sequence(&f)), 3);
        let roots = positive_roots(&f, 60);
        for (r, e) in roots.iter().zip([3.0, 2.0, 1.0]) {
            assert!((r - e).abs() < 1e-12);
        }
        // x^2 + 1 has none.
        assert_eq!(count_positive_roots(&sturm_sequence(&p(&[1, 0, 1]))), 0);
    }
}
