#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use qpflow_core::{FieldElement, IntMatrix, NumberField, Rational, TorusFlowSpec};

pub const SQUAREFREE: [i64; 12] = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19];

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

pub fn square(n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-range..=range, n), n).prop_map(|rows| int_matrix(&rows))
}

pub fn nonsingular(n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    square(n, range).prop_filter("singular", |m| m.det() != BigInt::from(0))
}

pub fn unimodular2(range: i64) -> impl Strategy<Value = IntMatrix> {
    square(2, range).prop_filter("not unimodular", |m| m.is_unimodular())
}

pub fn rational(range: i64) -> impl Strategy<Value = Rational> {
    (-range..=range, 1..=range).prop_map(|(n, d)| q(n, d))
}

pub fn element(field: Arc<NumberField>, range: i64) -> impl Strategy<Value = FieldElement> {
    let n = field.degree();
    prop::collection::vec(rational(range), n).prop_map(move |c| field.element(c).unwrap())
}

pub fn quadratic_field() -> impl Strategy<Value = Arc<NumberField>> {
    prop::sample::select(SQUAREFREE.to_vec()).prop_map(|d| NumberField::quadratic(d).unwrap())
}

/// A degree-2 flow with integer frequency coordinates in `[-range, range]`.
pub fn quadratic_flow(range: i64) -> impl Strategy<Value = TorusFlowSpec> {
    (quadratic_field(), prop::collection::vec(-range..=range, 4)).prop_filter_map("not a basis", |(f, c)| {
        TorusFlowSpec::from_int_coords(&f, &[&c[0..2], &c[2..4]]).ok()
    })
}

pub fn sqrt2() -> Arc<NumberField> {
    NumberField::quadratic(2).unwrap()
}

pub fn cube_root2() -> Arc<NumberField> {
    NumberField::new(vec![(-2).into(), 0.into(), 0.into(), 1.into()], None).unwrap()
}

/// Symmetries of a degree-2 flow with entries in `[-bound, bound]`, predicted
/// from the unit group: `+-eps^k` realized by `matrix_from_multiplier`, with
/// `eps^|k| <= 2 bound` since every eigenvalue of such a matrix is at most
/// `2 bound` in absolute value.
pub fn predicted_symmetries(flow: &TorusFlowSpec, bound: i64) -> Vec<(IntMatrix, FieldElement)> {
    let group = flow.multiplier_group(None).unwrap();
    let eps = group.generator().expect("real quadratic unit groups have rank one").clone();
    let limit = flow.field().from_ints(&[2 * bound, 0]);
    let mut powers = vec![flow.field().one()];
    loop {
        let next = powers.last().unwrap() * &eps;
        if next.cmp_real(&limit).unwrap() == std::cmp::Ordering::Greater {
            break;
        }
        powers.push(next);
    }
    let mut out = Vec::new();
    for (k, p) in powers.iter().enumerate() {
        let mut alphas = vec![p.clone()];
        if k > 0 {
            alphas.push(p.inv().unwrap());
        }
        for a in alphas {
            for alpha in [a.clone(), -&a] {
                if let Ok(m) = flow.matrix_from_multiplier(&alpha) {
                    if m.max_abs_entry() <= BigInt::from(bound) {
                        out.push((m, alpha));
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.entries().cmp(y.0.entries()));
    out
}

pub fn enumerated_symmetries(flow: &TorusFlowSpec, bound: u32) -> Vec<(IntMatrix, FieldElement)> {
    let mut out: Vec<_> = flow
        .enumerate_symmetries_bounded(bound)
        .unwrap()
        .into_iter()
        .map(|s| (s.matrix, s.multiplier))
        .collect();
    out.sort_by(|x, y| x.0.entries().cmp(y.0.entries()));
    out
}
