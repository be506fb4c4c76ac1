mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use qpflow_core::{IntMatrix, RatMatrix};

fn spans(basis: &IntMatrix, m: &IntMatrix) -> bool {
    let inv = basis.to_rational().inverse().unwrap();
    (&inv * &m.to_rational()).is_integral()
}

fn cayley_hamilton(m: &IntMatrix) -> IntMatrix {
    let n = m.dim();
    let mut acc = IntMatrix::scalar(n, 0.into());
    let mut power = IntMatrix::identity(n);
    for c in m.charpoly() {
        acc = &acc + &(&IntMatrix::scalar(n, c) * &power);
        power = &power * m;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hnf_is_idempotent(m in prop_oneof![nonsingular(2, 20), nonsingular(3, 9), nonsingular(4, 5)]) {
        let h = m.hnf().unwrap();
        prop_assert_eq!(h.hnf().unwrap(), h.clone());
        for i in 0..h.dim() {
            prop_assert!(h.get(i, i).is_positive());
            for j in 0..h.dim() {
                if i > j {
                    prop_assert_eq!(h.get(i, j), &BigInt::from(0));
                } else if j > i {
                    prop_assert!(!h.get(i, j).is_negative() && h.get(i, j) < h.get(i, i));
                }
            }
        }
    }

    #[test]
    fn hnf_spans_the_same_lattice(m in prop_oneof![nonsingular(2, 20), nonsingular(3, 9)]) {
        let h = m.hnf().unwrap();
        prop_assert!(spans(&h, &m));
        prop_assert!(spans(&m, &h));
        prop_assert_eq!(h.det().abs(), m.det().abs());
    }

    #[test]
    fn hnf_is_a_lattice_invariant(m in nonsingular(3, 6), u in nonsingular(3, 2).prop_filter("unimodular", |u| u.is_unimodular())) {
        prop_assert_eq!((&m * &u).hnf().unwrap(), m.hnf().unwrap());
    }

    #[test]
    fn inverse_round_trip(m in prop_oneof![nonsingular(2, 30), nonsingular(3, 12), nonsingular(4, 6)]) {
        let r = m.to_rational();
        let inv = r.inverse().unwrap();
        prop_assert_eq!(&r * &inv, RatMatrix::identity(m.dim()));
        prop_assert_eq!(&inv * &r, RatMatrix::identity(m.dim()));
        prop_assert_eq!(inv.det() * r.det(), q(1, 1));
    }

    #[test]
    fn adjugate_identity(m in prop_oneof![square(2, 15), square(3, 8)]) {
        prop_assert_eq!(&m * &m.adjugate(), IntMatrix::scalar(m.dim(), m.det()));
    }

    #[test]
    fn cayley_hamilton_holds(m in prop_oneof![square(2, 30), square(3, 12)]) {
        prop_assert!(cayley_hamilton(&m).entries().all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn det_is_multiplicative(a in square(3, 9), b in square(3, 9)) {
        prop_assert_eq!((&a * &b).det(), a.det() * b.det());
    }

    #[test]
    fn order_mod_is_least_period(m in nonsingular(2, 10), d in 2i64..12) {
        let d = BigInt::from(d);
        prop_assume!(num_integer::Integer::gcd(&m.det(), &d) == BigInt::from(1));
        let t = m.order_mod(&d).unwrap();
        let reduce = |x: &IntMatrix| IntMatrix::from_fn(2, |i, j| num_integer::Integer::mod_floor(x.get(i, j), &d));
        prop_assert!(reduce(&m.pow(t)).is_identity());
        for s in 1..t {
            prop_assert!(!reduce(&m.pow(s)).is_identity());
        }
    }
}
