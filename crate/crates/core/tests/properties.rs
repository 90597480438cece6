use hepta::ansatz::{det3, vandermonde_params, ParameterSet};
use hepta::combinatorics::{permutation_sign, Move, Side};
use hepta::linalg::Matrix;
use hepta::relations::{embed, transport};
use hepta::scalars::{is_canonical, FieldConfig, Scalar};
use proptest::prelude::*;

const P: u64 = 10007;

fn field_strategy() -> impl Strategy<Value = FieldConfig> {
    prop_oneof![Just(FieldConfig::Rational), Just(FieldConfig::Prime { p: P })]
}

fn scalar(field: FieldConfig) -> impl Strategy<Value = Scalar> {
    (-60i64..=60, 1i64..=60).prop_map(move |(n, d)| Scalar::from_fraction(field, n, d).unwrap())
}

fn triple_of(field: FieldConfig) -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    (scalar(field), scalar(field), scalar(field))
}

fn params(n: usize) -> impl Strategy<Value = ParameterSet> {
    (field_strategy(), any::<u64>()).prop_map(move |(f, seed)| ParameterSet::random(f, n, seed).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((a, b, c) in field_strategy().prop_flat_map(triple_of)) {
        let f = a.field();
        let zero = Scalar::zero(f);
        let one = Scalar::one(f);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), one);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn rationals_stay_canonical(n in -1000i64..1000, d in 1i64..1000, m in -1000i64..1000, e in 1i64..1000) {
        let f = FieldConfig::Rational;
        let x = Scalar::from_fraction(f, n, d).unwrap();
        let y = Scalar::from_fraction(f, m, e).unwrap();
        for z in [&x + &y, &x - &y, &x * &y] {
            prop_assert!(is_canonical(z.as_rational().unwrap()));
        }
        let shown = x.to_string();
        prop_assert_eq!(Scalar::parse(f, &shown).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn det3_is_fully_antisymmetric(ps in params(7), i in 1u8..=7, j in 1u8..=7, k in 1u8..=7) {
        prop_assume!(i != j && j != k && i != k);
        let base = det3(i, j, k, &ps).unwrap();
        let perms = [[i, j, k], [j, k, i], [k, i, j], [j, i, k], [i, k, j], [k, j, i]];
        for p in perms {
            let sign = permutation_sign(&[
                position(&[i, j, k], p[0]),
                position(&[i, j, k], p[1]),
                position(&[i, j, k], p[2]),
            ]).unwrap();
            let d = det3(p[0], p[1], p[2], &ps).unwrap();
            let expected = if sign.value() > 0 { base.clone() } else { -&base };
            prop_assert_eq!(d, expected);
        }
    }

    #[test]
    fn vandermonde_product_formula(t in proptest::collection::btree_set(-40i64..40, 7)) {
        let f = FieldConfig::Rational;
        let t: Vec<Scalar> = t.into_iter().map(|v| Scalar::from_i64(f, v)).collect();
        let ps = vandermonde_params(f, t.clone()).unwrap();
        for (i, j, k) in [(1u8, 2u8, 3u8), (2, 5, 7), (7, 1, 4)] {
            let (ti, tj, tk) = (&t[i as usize - 1], &t[j as usize - 1], &t[k as usize - 1]);
            let expected = &(&(tj - ti) * &(tk - ti)) * &(tk - tj);
            prop_assert_eq!(det3(i, j, k, &ps).unwrap(), expected);
        }
    }

    #[test]
    fn transport_is_linear(ps in params(7), a in -9i64..9, b in -9i64..9, x in proptest::collection::vec(-20i64..20, 12)) {
        let f = ps.field();
        let q = |v: i64| Scalar::from_i64(f, v);
        let (r, s): (Vec<Scalar>, Vec<Scalar>) = (x[..6].iter().map(|&v| q(v)).collect(), x[6..].iter().map(|&v| q(v)).collect());
        let combo: Vec<Scalar> = r.iter().zip(&s).map(|(ri, si)| &(&q(a) * ri) + &(&q(b) * si)).collect();
        for side in [Side::Lhs, Side::Rhs] {
            let tr = transport(&r, Move::Heptagon, side, &ps).unwrap().final_row();
            let ts = transport(&s, Move::Heptagon, side, &ps).unwrap().final_row();
            let tc = transport(&combo, Move::Heptagon, side, &ps).unwrap().final_row();
            for k in 0..6 {
                prop_assert_eq!(&tc[k], &(&(&q(a) * &tr[k]) + &(&q(b) * &ts[k])));
            }
        }
    }

    #[test]
    fn embeddings_on_disjoint_positions_commute(v in proptest::collection::vec(-9i64..9, 18), split in 0usize..20) {
        let f = FieldConfig::Rational;
        let q = |k: i64| Scalar::from_i64(f, k);
        let m1 = Matrix::from_rows(f, v[..9].chunks(3).map(|c| c.iter().map(|&k| q(k)).collect()).collect()).unwrap();
        let m2 = Matrix::from_rows(f, v[9..].chunks(3).map(|c| c.iter().map(|&k| q(k)).collect()).collect()).unwrap();
        let all: [[usize; 3]; 20] = {
            let mut out = [[0; 3]; 20];
            let mut n = 0;
            for a in 1..=6 { for b in a + 1..=6 { for c in b + 1..=6 { out[n] = [a, b, c]; n += 1; } } }
            out
        };
        let pa = all[split];
        let pb: Vec<usize> = (1..=6).filter(|x| !pa.contains(x)).collect();
        let e1 = embed(&m1, &pa, 6).unwrap();
        let e2 = embed(&m2, &pb, 6).unwrap();
        prop_assert_eq!(e1.mul(&e2).unwrap(), e2.mul(&e1).unwrap());
    }

    #[test]
    fn permutation_sign_is_multiplicative(p in Just((1u8..=6).collect::<Vec<_>>()).prop_shuffle(), q in Just((1u8..=6).collect::<Vec<_>>()).prop_shuffle()) {
        let composed: Vec<u8> = q.iter().map(|&k| p[k as usize - 1]).collect();
        let sp = permutation_sign(&p).unwrap();
        let sq = permutation_sign(&q).unwrap();
        prop_assert_eq!(permutation_sign(&composed).unwrap(), sp.compose(sq));
        let mut swapped = p.clone();
        swapped.swap(0, 5);
        prop_assert_eq!(permutation_sign(&swapped).unwrap().value(), -sp.value());
    }
}

fn position(base: &[u8; 3], v: u8) -> u8 {
    base.iter().position(|&b| b == v).unwrap() as u8 + 1
}
