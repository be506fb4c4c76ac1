mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_integer::Roots;
use qpflow_core::lattice::fundamental_unit_real_quadratic;
use qpflow_core::semiconj::{lift_symmetry, push_flow, push_symmetry_power, subgroup_index_rank1};
use qpflow_core::sim::{
    check_semiconjugacy_orbits, check_symmetry_orbits, NumericAffine, NumericFlow, NumericSymmetry, SampleConfig,
    DEFAULT_TOL,
};
use qpflow_core::{
    full_pipeline, Error, IntMatrix, Lattice, NumberField, Order, SemiconjugacyMap, TorusFlowSpec, UnitGroup,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    /// The stated claim is false; every counterexample was checked exactly.
    Refuted(String),
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn example() -> (TorusFlowSpec, SemiconjugacyMap) {
    let f = sqrt2();
    let phi = TorusFlowSpec::from_int_coords(&f, &[&[1, 0], &[1, 1]]).unwrap();
    let v = SemiconjugacyMap::linear(IntMatrix::from_i64([[3, 1], [1, 2]])).unwrap();
    (phi, v)
}

fn criterion1() -> Check {
    let start = Instant::now();
    let (phi, v) = example();
    let f = phi.field().clone();
    let report = full_pipeline(&phi, &v, None, None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.psi.omega() == [f.from_ints(&[4, 1]), f.from_ints(&[3, 2])], "omega' differs")?;
    let eps = f.from_ints(&[1, 1]);
    ensure(report.m_phi.generator() == Some(&eps), "M_phi generator differs")?;
    ensure(report.m_psi.generator() == Some(&f.from_ints(&[7, 5])), "M_psi generator differs")?;
    ensure(report.m_psi.generator() == Some(&eps.pow(3).unwrap()), "M_psi generator is not eps^3")?;
    ensure(report.contained && report.index == Some(BigInt::from(3)), "index differs")?;
    ensure(report.covering_degree == BigInt::from(5), "covering degree differs")?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("omega' = (4+s2, 3+2s2), M_phi = <1+s2>, M_psi = <7+5s2>, index 3, degree 5 in {elapsed:?}"))
}

fn criterion2() -> Check {
    let (phi, v) = example();
    let r = phi.symmetry_from_matrix(&IntMatrix::from_i64([[0, 1], [1, 2]])).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let out = push_symmetry_power(&v, &phi, &r).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.k == 3, format!("k = {}", out.k))?;
    ensure(out.symmetry.matrix == IntMatrix::from_i64([[-1, 14], [-1, 15]]), "Q differs")?;
    let c1 = IntMatrix::from_i64([[-3, 14], [-1, 13]]).to_rational().scale(&q(1, 5));
    let c2 = IntMatrix::from_i64([[-1, 28], [-2, 31]]).to_rational().scale(&q(1, 5));
    ensure(out.rejected == vec![c1, c2], "C_1, C_2 differ")?;
    ensure(out.rejected.iter().all(|c| !c.is_integral()), "a rejected power is integral")?;
    ensure(elapsed < Duration::from_millis(100), format!("took {elapsed:?}"))?;
    Ok(format!("k = 3, Q = [[-1,14],[-1,15]], C_1 and C_2 non-integral, in {elapsed:?}"))
}

fn criterion3() -> Check {
    let (_, v) = example();
    let r = IntMatrix::from_i64([[0, 1], [1, 2]]);
    let q = IntMatrix::from_i64([[-1, 14], [-1, 15]]);
    ensure(v.matrix() * &r.pow(3) == &q * v.matrix(), "B_V B_R^3 != B_Q B_V")?;
    Ok(format!("B_V B_R^3 = B_Q B_V = {}", v.matrix() * &r.pow(3)))
}

fn criterion4() -> Check {
    let (phi, v) = example();
    let f = phi.field().clone();
    let psi = push_flow(&v, &phi).map_err(|e| e.to_string())?.target;
    for coords in [[1, 1], [3, 2]] {
        let alpha = f.from_ints(&coords);
        ensure(
            matches!(psi.matrix_from_multiplier(&alpha), Err(Error::NotRealizable(_))),
            format!("{alpha} is realizable on psi"),
        )?;
    }
    let u1 = f.from_ints(&[-1, 0]);
    let u2 = f.from_ints(&[15, 0]);
    ensure(&(&u1 * &f.from_ints(&[8, -5])) + &u2 == f.from_ints(&[7, 5]), "u_1 (8-5s2) + u_2 != 7+5s2")?;
    Ok("1+s2 and 3+2s2 not realizable on psi; 7+5s2 = -1(8-5s2) + 15".into())
}

/// 25 seeded random degree-2 flows and maps with entries in [-10, 10].
fn random_set() -> Vec<(TorusFlowSpec, SemiconjugacyMap)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    while out.len() < 25 {
        let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
        let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-10..=10)).collect();
        let m: Vec<i64> = (0..4).map(|_| rng.gen_range(-10..=10)).collect();
        let f = NumberField::quadratic(d).unwrap();
        let Ok(phi) = TorusFlowSpec::from_int_coords(&f, &[&c[0..2], &c[2..4]]) else {
            continue;
        };
        let Ok(v) = SemiconjugacyMap::linear(int_matrix(&[m[0..2].to_vec(), m[2..4].to_vec()])) else {
            continue;
        };
        out.push((phi, v));
    }
    out
}

fn criterion5(set: &[(TorusFlowSpec, SemiconjugacyMap)]) -> Check {
    let start = Instant::now();
    let mut nontrivial = 0;
    for (i, (phi, v)) in set.iter().enumerate() {
        let psi = push_flow(v, phi).map_err(|e| e.to_string())?.target;
        for (name, flow) in [("phi", phi), ("psi", &psi)] {
            let brute = enumerated_symmetries(flow, 20);
            ensure(brute == predicted_symmetries(flow, 20), format!("pair {i}: {name} enumeration differs"))?;
            nontrivial += brute.iter().filter(|(m, _)| !m.is_identity() && !(-m).is_identity()).count();
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    // the random set rarely has small nontrivial symmetries, so also run
    // flows with coordinates in [-2, 2]
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut extra = 0;
    let mut small = 0;
    while small < 25 {
        let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
        let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
        let f = NumberField::quadratic(d).unwrap();
        let Ok(flow) = TorusFlowSpec::from_int_coords(&f, &[&c[0..2], &c[2..4]]) else {
            continue;
        };
        small += 1;
        let brute = enumerated_symmetries(&flow, 20);
        ensure(brute == predicted_symmetries(&flow, 20), format!("small flow {c:?} in Q(sqrt {d}) differs"))?;
        extra += brute.iter().filter(|(m, _)| !m.is_identity() && !(-m).is_identity()).count();
    }
    Ok(format!(
        "50 flows agree ({nontrivial} symmetries besides +-I within the bound) in {elapsed:?}; 25 small flows agree ({extra} besides +-I)"
    ))
}

/// Checks that `g` is a multiplier of `psi` but not of `phi`, exactly and
/// numerically.
fn confirm_counterexample(phi: &TorusFlowSpec, v: &SemiconjugacyMap, psi: &TorusFlowSpec, g: &qpflow_core::FieldElement) -> bool {
    let Ok(bq) = psi.matrix_from_multiplier(g) else {
        return false;
    };
    let Ok(q) = psi.symmetry_from_matrix(&bq) else {
        return false;
    };
    let not_on_phi = matches!(phi.matrix_from_multiplier(g), Err(Error::NotRealizable(_)));
    let not_liftable = matches!(lift_symmetry(v, phi, &q), Err(Error::NotLiftable(_)));
    let residual = check_symmetry_orbits(&NumericSymmetry::from_symmetry(&q), &NumericFlow::from_spec(psi), &SampleConfig::default());
    // rounding grows with the size of the matrix entries
    let scale = qpflow_core::linalg::rational_to_f64(&bq.max_abs_entry().into()).max(1.0);
    bq.is_unimodular() && not_on_phi && not_liftable && residual < DEFAULT_TOL * scale
}

fn criterion6(set: &[(TorusFlowSpec, SemiconjugacyMap)]) -> Outcome {
    let mut counterexamples = Vec::new();
    for (i, (phi, v)) in set.iter().enumerate() {
        let report = match full_pipeline(phi, v, None, None) {
            Ok(r) => r,
            Err(e) => return Outcome::Fail(format!("pair {i}: {e}")),
        };
        for w in &report.containment {
            if w.matrix_on_source.is_none() {
                if !confirm_counterexample(phi, v, &report.psi, &w.multiplier) {
                    return Outcome::Fail(format!("pair {i}: containment failed without a verified counterexample"));
                }
                counterexamples.push(format!(
                    "pair {i}: omega = ({}, {}) in Q(sqrt {}), B_V = {}, M_psi generator {} not in M_phi",
                    phi.omega()[0],
                    phi.omega()[1],
                    -phi.field().defining_coeffs()[0].clone(),
                    v.matrix(),
                    w.multiplier
                ));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for chain in 0..100 {
        let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
        let (a, x, y) = (rng.gen_range(1..5i64), rng.gen_range(1..5i64), rng.gen_range(1..5i64));
        let f = NumberField::quadratic(d).unwrap();
        let order = Order::maximal_quadratic(&f).unwrap();
        let eps = fundamental_unit_real_quadratic(&order).unwrap();
        let group = |e: i64| UnitGroup::generated_by(&order, &[eps.pow(e).unwrap()]).unwrap();
        let (ga, gb, gc) = (group(a), group(a * x), group(a * x * y));
        let ac = subgroup_index_rank1(&ga, &gc);
        let ab = subgroup_index_rank1(&ga, &gb);
        let bc = subgroup_index_rank1(&gb, &gc);
        match (ac, ab, bc) {
            (Ok(ac), Ok(ab), Ok(bc)) if ac == &ab * &bc => {}
            _ => return Outcome::Fail(format!("tower identity fails on chain {chain}")),
        }
    }

    if counterexamples.is_empty() {
        Outcome::Pass("every M_psi generator realized on phi; tower identity on 100 chains".into())
    } else {
        Outcome::Refuted(format!(
            "{} of {} pairs have M_psi not inside M_phi (tower identity holds on 100 chains): {}",
            counterexamples.len(),
            set.len(),
            counterexamples.join("; ")
        ))
    }
}

fn criterion7() -> Check {
    let f2 = sqrt2();
    let z2 = Order::equation_order(&f2).map_err(|e| e.to_string())?;
    ensure(fundamental_unit_real_quadratic(&z2).unwrap() == f2.from_ints(&[1, 1]), "Z[s2] unit differs")?;

    let f3 = NumberField::quadratic(3).unwrap();
    let z3 = Order::equation_order(&f3).map_err(|e| e.to_string())?;
    // least y >= 1 with 3 y^2 +- 1 a square
    let (x, y) = (1i64..)
        .find_map(|y| {
            [3 * y * y - 1, 3 * y * y + 1]
                .into_iter()
                .find(|t| t.sqrt() * t.sqrt() == *t)
                .map(|t| (t.sqrt(), y))
        })
        .unwrap();
    ensure(fundamental_unit_real_quadratic(&z3).unwrap() == f3.from_ints(&[x, y]), "Z[s3] unit differs")?;
    ensure((x, y) == (2, 1), "Pell search")?;

    let sub = Order::new(Lattice::from_generators(&f2, &[f2.one(), f2.from_ints(&[0, 5])]).unwrap()).unwrap();
    ensure(
        fundamental_unit_real_quadratic(&sub).unwrap() == f2.from_ints(&[1, 1]).pow(3).unwrap(),
        "Z+5s2Z unit differs",
    )?;
    Ok("Z[s2] -> 1+s2, Z[s3] -> 2+s3 (Pell search agrees), Z+5s2Z -> (1+s2)^3 = 7+5s2".into())
}

fn criterion8() -> Check {
    let (phi, v) = example();
    let psi = push_flow(&v, &phi).map_err(|e| e.to_string())?.target;
    let (nphi, npsi) = (NumericFlow::from_spec(&phi), NumericFlow::from_spec(&psi));
    let cfg = SampleConfig { samples: 1000, t_max: 10.0, seed: 8 };
    let semi = check_semiconjugacy_orbits(&NumericAffine::from_map(&v), &nphi, &npsi, &cfg);
    let r = phi.symmetry_from_matrix(&IntMatrix::from_i64([[0, 1], [1, 2]])).unwrap();
    let sym = check_symmetry_orbits(&NumericSymmetry::from_symmetry(&r), &nphi, &cfg);
    let bad = NumericAffine::new(&IntMatrix::from_i64([[3, 1], [1, 3]]), None);
    let corrupted = check_semiconjugacy_orbits(&bad, &nphi, &npsi, &cfg);
    ensure(semi < DEFAULT_TOL, format!("semiconjugacy residual {semi:e}"))?;
    ensure(sym < DEFAULT_TOL, format!("symmetry residual {sym:e}"))?;
    ensure(corrupted > 1e-3, format!("corrupted residual {corrupted:e}"))?;
    Ok(format!(
        "residuals {semi:.1e} (map) and {sym:.1e} (symmetry); corrupted map {corrupted:.3}"
    ))
}

#[test]
fn acceptance() {
    let set = random_set();
    let outcomes = [
        criterion1().map_or_else(Outcome::Fail, Outcome::Pass),
        criterion2().map_or_else(Outcome::Fail, Outcome::Pass),
        criterion3().map_or_else(Outcome::Fail, Outcome::Pass),
        criterion4().map_or_else(Outcome::Fail, Outcome::Pass),
        criterion5(&set).map_or_else(Outcome::Fail, Outcome::Pass),
        criterion6(&set),
        criterion7().map_or_else(Outcome::Fail, Outcome::Pass),
        criterion8().map_or_else(Outcome::Fail, Outcome::Pass),
    ];
    // written to the raw handle so the lines show up without --nocapture
    let mut out = std::io::stdout().lock();
    let mut unexplained = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let _ = match o {
            Outcome::Pass(d) => writeln!(out, "criterion {}: PASS  {d}", i + 1),
            Outcome::Refuted(d) => writeln!(out, "criterion {}: FAIL  claim refuted by verified counterexample; {d}", i + 1),
            Outcome::Fail(d) => {
                unexplained.push(i + 1);
                writeln!(out, "criterion {}: FAIL  {d}", i + 1)
            }
        };
    }
    assert!(unexplained.is_empty(), "failing criteria: {unexplained:?}");
}
