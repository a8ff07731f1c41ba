use nakamura::automorphisms::{commutant_search, h_coset_group, verify_candidate, AutCandidate};
use nakamura::construct::build_spec;
use nakamura::cohomology::{betti_numbers, frolicher_degenerates, hodge_table, is_admissible};
use nakamura::forms::{CoframeMonomial, InvariantForm, MultiIndex};
use nakamura::scalars::rational::rat;
use nakamura::scalars::smith_normal_form;
use nakamura::tau::{canonical_triple, same_fiber, Triple};
use nakamura::{IntMatrix, LambdaSpec, ManifoldSpec, Poly, QVec, TauSpec};
use proptest::prelude::*;

fn lambdas(max_n: usize) -> impl Strategy<Value = LambdaSpec> {
    (1..=max_n, 1usize..=2).prop_flat_map(|(n, d)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, d), n - 1).prop_map(move |rows| {
            let mut v: Vec<QVec> = rows.iter().map(|r| QVec::from_ints(r)).collect();
            let sum = v.iter().fold(QVec::zero(d), |a, l| &a + l);
            v.push(-&sum);
            LambdaSpec::new(d, v)
        })
    })
}

fn manifold(max_n: usize) -> impl Strategy<Value = ManifoldSpec> {
    (lambdas(max_n), any::<bool>(), 0usize..4, -2i64..=2, 1i64..=3, -3i64..=3).prop_map(
        |(l, special, pick, scale, k, h)| {
            let tau = if special {
                let nonzero: Vec<&QVec> = l.lambdas().iter().filter(|x| !x.is_zero()).collect();
                let c = if nonzero.is_empty() || scale == 0 {
                    QVec::unit(l.basis_dim(), 0)
                } else {
                    nonzero[pick % nonzero.len()].scale(&rat(scale, 1))
                };
                let k = match c.definite_sign() {
                    Some(s) => i64::from(s) * k,
                    None => k,
                };
                TauSpec::special(c, h, k)
            } else {
                TauSpec::Generic
            };
            ManifoldSpec::new(l, tau)
        },
    )
}

fn form(n: usize, d: usize) -> impl Strategy<Value = InvariantForm> {
    let full = (1u32 << n) - 1;
    (
        any::<bool>(),
        any::<bool>(),
        0..=full,
        0..=full,
        -3i64..=3,
        -2i64..=2,
        prop::collection::vec(-2i64..=2, d),
    )
        .prop_map(move |(a, b, i, j, c0, cu, ch)| {
            let coeff = &Poly::from_int(c0) + &Poly::u().scale(&rat(cu, 1));
            InvariantForm::term(
                n,
                d,
                coeff,
                QVec::from_ints(&ch),
                CoframeMonomial::new(a, b, MultiIndex(i), MultiIndex(j)),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hodge_matches_enumeration(s in manifold(4)) {
        let t = hodge_table(&s).unwrap();
        let n = s.n();
        let sum = |m: u32| (0..n).filter(|i| m >> i & 1 == 1)
            .fold(QVec::zero(s.basis_dim()), |a, i| &a + &s.lambdas()[i]);
        let mut h = vec![vec![0u64; n + 2]; n + 2];
        for i in 0u32..1 << n {
            for j in 0u32..1 << n {
                if is_admissible(&(&sum(i) + &sum(j)), &s.tau) {
                    let (a, b) = (i.count_ones() as usize, j.count_ones() as usize);
                    h[a][b] += 1;
                    h[a + 1][b] += 1;
                    h[a][b + 1] += 1;
                    h[a + 1][b + 1] += 1;
                }
            }
        }
        prop_assert_eq!(&t.h, &h);
        prop_assert!(t.symmetry_violations().is_empty());
    }

    #[test]
    fn frolicher_iff_sums_equal_betti(s in manifold(4)) {
        let sums = hodge_table(&s).unwrap().degree_sums();
        let b = betti_numbers(&s).unwrap();
        prop_assert!(sums.iter().zip(&b).all(|(x, y)| x >= y));
        prop_assert_eq!(frolicher_degenerates(&s).unwrap().degenerates, sums == b);
    }

    #[test]
    fn generic_tau_always_degenerates(l in lambdas(4)) {
        let s = ManifoldSpec::new(l, TauSpec::Generic);
        prop_assert!(frolicher_degenerates(&s).unwrap().degenerates);
    }

    #[test]
    fn differentials_square_to_zero(a in form(3, 2), l in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2)) {
        let mut rows: Vec<QVec> = l.iter().map(|r| QVec::from_ints(r)).collect();
        let sum = rows.iter().fold(QVec::zero(2), |x, y| &x + y);
        rows.push(-&sum);
        let lam = LambdaSpec::new(2, rows);
        prop_assert!(a.d(&lam).unwrap().d(&lam).unwrap().is_zero());
        prop_assert!(a.dbar(&lam).unwrap().dbar(&lam).unwrap().is_zero());
        prop_assert!(a.del(&lam).unwrap().del(&lam).unwrap().is_zero());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.d(&lam).unwrap().conjugate(), a.conjugate().d(&lam).unwrap());
    }

    #[test]
    fn canonical_triple_is_fixed_and_in_fiber(c in prop::collection::vec(1i64..=4, 1..=2), h in -6i64..=6, k in 1i64..=6, m in 1i64..=5) {
        let t = Triple::new(QVec::from_ints(&c).scale(&rat(m, 1)), h * m, k * m);
        let canon = canonical_triple(&t).unwrap();
        prop_assert!(same_fiber(&t, &canon));
        prop_assert_eq!(canonical_triple(&canon).unwrap(), canon.clone());
        prop_assert_eq!(num_integer::Integer::gcd(&canon.h, &canon.k), num_bigint::BigInt::from(1));
    }

    #[test]
    fn smith_form_reconstructs(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 3)) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = IntMatrix::from_i64(&refs);
        let f = smith_normal_form(&m);
        prop_assert_eq!(&(&f.u * &m) * &f.v, f.d.clone());
        prop_assert!(f.u.det().unwrap().magnitude() == &num_bigint::BigUint::from(1u8));
        prop_assert!(f.v.det().unwrap().magnitude() == &num_bigint::BigUint::from(1u8));
        let d = f.invariant_factors();
        for w in d.windows(2) {
            if !num_traits::Zero::is_zero(&w[0]) {
                prop_assert!((&w[1] % &w[0]).sign() == num_bigint::Sign::NoSign);
            }
        }
    }

    #[test]
    fn hyperbolic_lattices(p in 1i64..=3, q in 1i64..=3) {
        let m = IntMatrix::from_i64(&[&[1 + p * q, p], &[q, 1]]);
        let s = build_spec(&m, TauSpec::Generic).unwrap();
        s.require_valid().unwrap();
        let det = (2 - (2 + p * q)).unsigned_abs();
        prop_assert_eq!(h_coset_group(&s).unwrap().order, num_bigint::BigInt::from(det * det));
        for t in [1, -1] {
            for a in commutant_search(&s, t, 2).unwrap() {
                prop_assert!(verify_candidate(&s, &AutCandidate::linear(t, a)).unwrap().is_empty());
            }
        }
    }
}
