//! The worked example over Q(sqrt 2): phi with omega = (1, 1 + sqrt 2) pushed
//! along V = [[3, 1], [1, 2]].  Every quantity is recomputed and compared with
//! its known value.

use std::fmt::Write as _;

use num_bigint::BigInt;
use qpflow_core::semiconj::{lift_symmetry, push_flow, push_symmetry_power};
use qpflow_core::sim::{check_semiconjugacy_orbits, check_symmetry_orbits, NumericAffine, NumericFlow, NumericSymmetry, SampleConfig};
use qpflow_core::{full_pipeline, Error, IntMatrix, NumberField, Rational, SemiconjugacyMap, TorusFlowSpec};
use serde_json::{json, Value};

use crate::{json as j, CliError, Options, Output, EXIT_MISMATCH};

fn show(e: &qpflow_core::FieldElement) -> String {
    e.as_poly().display_in("a")
}

struct Table {
    rows: Vec<Value>,
    text: String,
    failed: usize,
}

impl Table {
    fn check(&mut self, what: &str, expected: impl ToString, actual: impl ToString) {
        let (e, a) = (expected.to_string(), actual.to_string());
        let ok = e == a;
        if !ok {
            self.failed += 1;
        }
        let _ = writeln!(self.text, "{} {what}: expected {e}, got {a}", if ok { "ok  " } else { "FAIL" });
        self.rows.push(json!({"quantity": what, "expected": e, "actual": a, "ok": ok}));
    }
}

pub fn run(opts: &Options) -> Result<Output, CliError> {
    let k = NumberField::quadratic(2)?;
    let phi = TorusFlowSpec::from_int_coords(&k, &[&[1, 0], &[1, 1]])?;
    let v = SemiconjugacyMap::linear(IntMatrix::from_i64([[3, 1], [1, 2]]))?;
    let r = phi.symmetry_from_matrix(&IntMatrix::from_i64([[0, 1], [1, 2]]))?;
    let mut t = Table {
        rows: Vec::new(),
        text: String::new(),
        failed: 0,
    };

    let psi = push_flow(&v, &phi)?.target;
    let omega: Vec<String> = psi.omega().iter().map(show).collect();
    t.check("omega'", "(a + 4, 2a + 3)", format!("({})", omega.join(", ")));

    let report = full_pipeline(&phi, &v, None, None)?;
    t.check("covering degree", 5, &report.covering_degree);
    let gen = |g: &qpflow_core::UnitGroup| g.generator().map(show).unwrap_or_default();
    t.check("generator of M_phi", "a + 1", gen(&report.m_phi));
    t.check("generator of M_psi", "5a + 7", gen(&report.m_psi));
    let exp = report.containment.first().and_then(|w| w.exponent);
    t.check("exponent of M_psi generator", "(1, 3)", format!("{:?}", exp.unwrap_or((0, 0))));
    t.check(
        "index [M_phi : M_psi]",
        3,
        report.index.as_ref().map(BigInt::to_string).unwrap_or("none".into()),
    );

    let pushed = push_symmetry_power(&v, &phi, &r)?;
    t.check("least k", 3, pushed.k);
    t.check("Q", IntMatrix::from_i64([[-1, 14], [-1, 15]]), &pushed.symmetry.matrix);
    let fifth = |m: [[i64; 2]; 2]| IntMatrix::from_i64(m).to_rational().scale(&Rational::new(1.into(), 5.into()));
    let c = |i: usize| pushed.rejected.get(i).map(|m| m.to_string()).unwrap_or("none".into());
    t.check("C_1", fifth([[-3, 14], [-1, 13]]), c(0));
    t.check("C_2", fifth([[-1, 28], [-2, 31]]), c(1));
    let vr3 = v.matrix() * &r.matrix.pow(3);
    let qv = &pushed.symmetry.matrix * v.matrix();
    let target = IntMatrix::from_i64([[11, 27], [12, 29]]);
    t.check("B_V B_R^3", &target, &vr3);
    t.check("B_Q B_V", &target, &qv);

    let lifted = lift_symmetry(&v, &phi, &pushed.symmetry)?;
    t.check("lift of Q", IntMatrix::from_i64([[2, 5], [5, 12]]), &lifted.matrix);
    t.check("multiplier of the lift", "5a + 7", show(&lifted.multiplier));

    for (label, coords) in [("a + 1 on psi", [1, 1]), ("2a + 3 on psi", [3, 2])] {
        let got = match psi.matrix_from_multiplier(&k.from_ints(&coords)) {
            Err(Error::NotRealizable(_)) => "not realizable".to_string(),
            Ok(m) => format!("realized by {m}"),
            Err(e) => e.to_string(),
        };
        t.check(label, "not realizable", got);
    }
    let qm = &pushed.symmetry.matrix;
    t.check("trace of Q", 14, qm.get(0, 0) + qm.get(1, 1));
    t.check("det of Q", -1, pushed.symmetry.matrix.det());

    let mut value = json!({"command": "demo", "checks": t.rows.clone()});
    if opts.verify_sim {
        let cfg = SampleConfig {
            samples: opts.samples,
            t_max: 10.0,
            seed: opts.seed,
        };
        let (nphi, npsi) = (NumericFlow::from_spec(&phi), NumericFlow::from_spec(&psi));
        let semi = check_semiconjugacy_orbits(&NumericAffine::from_map(&v), &nphi, &npsi, &cfg);
        let sym_r = check_symmetry_orbits(&NumericSymmetry::from_symmetry(&r), &nphi, &cfg);
        let sym_q = check_symmetry_orbits(&NumericSymmetry::from_symmetry(&pushed.symmetry), &npsi, &cfg);
        for (what, res) in [("semiconjugacy V", semi), ("symmetry R on phi", sym_r), ("symmetry Q on psi", sym_q)] {
            let ok = res < opts.tol;
            if !ok {
                t.failed += 1;
            }
            let _ = writeln!(t.text, "{} residual of {what}: {res:e} (tol {:e})", if ok { "ok  " } else { "FAIL" }, opts.tol);
        }
        value["verify_sim"] = json!({
            "semiconjugacy": semi,
            "symmetry_phi": sym_r,
            "symmetry_psi": sym_q,
            "tol": opts.tol,
            "samples": opts.samples,
            "seed": opts.seed,
        });
    }
    value["mismatches"] = json!(t.failed);
    value["lift"] = j::symmetry(&lifted);
    let _ = writeln!(t.text, "{} mismatches", t.failed);
    let mut out = Output::ok(value, t.text);
    if t.failed > 0 {
        out.code = EXIT_MISMATCH;
    }
    Ok(out)
}
