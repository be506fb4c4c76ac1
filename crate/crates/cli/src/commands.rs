//! The subcommands, each turning a scenario into an [`Output`].

use std::fmt::Write as _;

use qpflow_core::semiconj::{lift_symmetry, push_flow, push_symmetry_power, verify_semiconjugacy};
use qpflow_core::sim::{
    check_semiconjugacy_orbits, check_symmetry_orbits, NumericAffine, NumericFlow, NumericSymmetry, SampleConfig,
};
use qpflow_core::{full_pipeline, FieldElement, NontrivialMultiplier, SemiconjugacyMap, Symmetry, TorusFlowSpec};
use serde_json::{json, Map, Value};

use crate::scenario::{Flow, Scenario, SymmetrySpec};
use crate::{json as j, CliError, Options, Output, EXIT_MATH};

fn show(e: &FieldElement) -> String {
    e.as_poly().display_in("a")
}

fn sample_config(opts: &Options) -> SampleConfig {
    SampleConfig {
        samples: opts.samples,
        t_max: 10.0,
        seed: opts.seed,
    }
}

fn residual_json(residual: f64, opts: &Options) -> Value {
    json!({
        "max_residual": residual,
        "tol": opts.tol,
        "samples": opts.samples,
        "seed": opts.seed,
        "pass": residual < opts.tol,
    })
}

fn header(sc: &Scenario) -> String {
    format!("field: a is a root of {}\n", sc.field.defining_poly().display_in("z"))
}

fn build_symmetry(flow: &TorusFlowSpec, spec: &SymmetrySpec) -> Result<Symmetry, CliError> {
    let matrix = crate::scenario::int_matrix(&spec.matrix)?;
    let mut s = flow.symmetry_from_matrix(&matrix)?;
    if let Some(c) = &spec.translation {
        s = s.with_translation(c.iter().map(|x| x.rational()).collect::<Result<_, _>>()?);
    }
    Ok(s)
}

/// Units of the image flow's ring obtained by pushing the source units.
fn pushed_units(v: &SemiconjugacyMap, phi: &Flow) -> Result<Vec<FieldElement>, CliError> {
    let mut out = Vec::new();
    for u in &phi.units {
        let r = phi.spec.symmetry_from_matrix(&phi.spec.matrix_from_multiplier(u)?)?;
        out.push(push_symmetry_power(v, &phi.spec, &r)?.symmetry.multiplier);
    }
    Ok(out)
}

fn units(flow: &Flow) -> Option<&[FieldElement]> {
    (!flow.units.is_empty()).then_some(flow.units.as_slice())
}

pub fn multipliers(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (name, flow) = sc.flow(opts.flow.as_deref())?;
    let ring = flow.spec.multiplier_ring()?;
    let group = flow.spec.multiplier_group(units(flow))?;
    let nontrivial = match flow.spec.has_nontrivial_multiplier(units(flow))? {
        NontrivialMultiplier::Yes(_) => "yes",
        NontrivialMultiplier::No => "no",
        NontrivialMultiplier::Unknown => "unknown",
    };
    let mut v = Map::new();
    v.insert("command".into(), json!("multipliers"));
    v.insert("flow".into(), json!(name));
    v.insert("frequencies".into(), j::flow(&flow.spec));
    v.insert("multiplier_ring".into(), j::order(&ring));
    v.insert("multiplier_group".into(), j::unit_group(&group));
    v.insert("nontrivial".into(), json!(nontrivial));

    let mut text = header(sc);
    let _ = writeln!(text, "flow {name}");
    let basis: Vec<String> = ring.lattice().basis().iter().map(show).collect();
    let _ = writeln!(text, "multiplier ring: Z-span of [{}]", basis.join(", "));
    let gens: Vec<String> = group.generators().iter().map(show).collect();
    let _ = writeln!(
        text,
        "multiplier group: +-1 x <{}> (rank {}, {})",
        gens.join(", "),
        group.rank(),
        j::completeness(group.completeness()).as_str().unwrap_or_default()
    );
    let _ = writeln!(text, "nontrivial multiplier: {nontrivial}");

    if let Some(bound) = opts.bound {
        let syms = flow.spec.enumerate_symmetries_bounded(bound)?;
        let _ = writeln!(text, "symmetries with entries in [-{bound}, {bound}]: {}", syms.len());
        for s in &syms {
            let _ = writeln!(text, "  {}  multiplier {}", s.matrix, show(&s.multiplier));
        }
        v.insert("bound".into(), json!(bound));
        v.insert("symmetries".into(), Value::Array(syms.iter().map(j::symmetry).collect()));
    }

    if opts.verify_sim {
        let nf = NumericFlow::from_spec(&flow.spec);
        let mut worst: f64 = 0.0;
        for g in group.generators() {
            let r = flow.spec.symmetry_from_matrix(&flow.spec.matrix_from_multiplier(g)?)?;
            worst = worst.max(check_symmetry_orbits(&NumericSymmetry::from_symmetry(&r), &nf, &sample_config(opts)));
        }
        let _ = writeln!(text, "numeric symmetry residual: {worst:e}");
        v.insert("verify_sim".into(), residual_json(worst, opts));
    }
    Ok(Output::ok(Value::Object(v), text))
}

pub fn push(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (fname, flow) = sc.flow(opts.flow.as_deref())?;
    let (mname, v) = sc.map(opts.map.as_deref())?;
    let psi_units = pushed_units(v, flow)?;
    let report = full_pipeline(
        &flow.spec,
        v,
        units(flow),
        (!psi_units.is_empty()).then_some(psi_units.as_slice()),
    )?;
    let containment: Vec<Value> = report
        .containment
        .iter()
        .map(|w| {
            json!({
                "multiplier": j::element(&w.multiplier),
                "matrix_on_source": w.matrix_on_source.as_ref().map(j::int_matrix).unwrap_or(Value::Null),
                "exponent": w.exponent.map(|(s, k)| json!({"sign": s, "power": k.to_string()})).unwrap_or(Value::Null),
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("command".into(), json!("push"));
    out.insert("flow".into(), json!(fname));
    out.insert("map".into(), json!(mname));
    out.insert("map_matrix".into(), j::int_matrix(v.matrix()));
    out.insert("source".into(), j::flow(&report.phi));
    out.insert("target".into(), j::flow(&report.psi));
    out.insert("covering_degree".into(), j::integer(&report.covering_degree));
    out.insert("m_phi".into(), j::unit_group(&report.m_phi));
    out.insert("m_psi".into(), j::unit_group(&report.m_psi));
    out.insert("containment".into(), Value::Array(containment));
    out.insert("contained".into(), json!(report.contained));
    out.insert("index".into(), report.index.as_ref().map(j::integer).unwrap_or(Value::Null));
    out.insert(
        "intersection_indices".into(),
        report
            .intersection_indices
            .as_ref()
            .map(|(a, b)| json!({"in_m_phi": a.to_string(), "in_m_psi": b.to_string()}))
            .unwrap_or(Value::Null),
    );
    out.insert("completeness".into(), j::completeness(report.completeness));

    let mut text = header(sc);
    let omega: Vec<String> = report.psi.omega().iter().map(show).collect();
    let _ = writeln!(text, "push {fname} along {mname}: omega' = ({})", omega.join(", "));
    let _ = writeln!(text, "covering degree: {}", report.covering_degree);
    let gens = |g: &qpflow_core::UnitGroup| g.generators().iter().map(show).collect::<Vec<_>>().join(", ");
    let _ = writeln!(text, "M_phi = +-1 x <{}>", gens(&report.m_phi));
    let _ = writeln!(text, "M_psi = +-1 x <{}>", gens(&report.m_psi));
    let _ = writeln!(text, "M_psi inside M_phi: {}", report.contained);
    match (&report.index, &report.intersection_indices) {
        (Some(i), _) => {
            let _ = writeln!(text, "index [M_phi : M_psi] = {i}");
        }
        (None, Some((a, b))) => {
            let _ = writeln!(text, "intersection I: [M_phi : I] = {a}, [M_psi : I] = {b}");
        }
        _ => {}
    }
    if opts.verify_sim {
        let r = check_semiconjugacy_orbits(
            &NumericAffine::from_map(v),
            &NumericFlow::from_spec(&report.phi),
            &NumericFlow::from_spec(&report.psi),
            &sample_config(opts),
        );
        let _ = writeln!(text, "numeric semiconjugacy residual: {r:e}");
        out.insert("verify_sim".into(), residual_json(r, opts));
    }
    Ok(Output::ok(Value::Object(out), text))
}

pub fn index(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (fname, flow) = sc.flow(opts.flow.as_deref())?;
    let (mname, v) = sc.map(opts.map.as_deref())?;
    let psi_units = pushed_units(v, flow)?;
    let report = full_pipeline(
        &flow.spec,
        v,
        units(flow),
        (!psi_units.is_empty()).then_some(psi_units.as_slice()),
    )?;
    let value = json!({
        "command": "index",
        "flow": fname,
        "map": mname,
        "contained": report.contained,
        "index": report.index.as_ref().map(j::integer).unwrap_or(Value::Null),
        "intersection_indices": report
            .intersection_indices
            .as_ref()
            .map(|(a, b)| json!({"in_m_phi": a.to_string(), "in_m_psi": b.to_string()}))
            .unwrap_or(Value::Null),
        "completeness": j::completeness(report.completeness),
    });
    let text = match (&report.index, &report.intersection_indices) {
        (Some(i), _) => format!("[M_phi : M_psi] = {i}\n"),
        (None, Some((a, b))) => format!("M_psi is not inside M_phi; [M_phi : I] = {a}, [M_psi : I] = {b}\n"),
        _ => "index needs rank-one multiplier groups\n".into(),
    };
    Ok(Output::ok(value, text))
}

pub fn lift_sym(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (fname, flow) = sc.flow(opts.flow.as_deref())?;
    let (mname, v) = sc.map(opts.map.as_deref())?;
    let (sname, spec) = sc.symmetry(opts.symmetry.as_deref())?;
    let psi = push_flow(v, &flow.spec)?.target;
    let q = build_symmetry(&psi, spec)?;
    let r = lift_symmetry(v, &flow.spec, &q)?;
    let value = json!({
        "command": "lift-sym",
        "flow": fname,
        "map": mname,
        "symmetry": sname,
        "on_target": j::symmetry(&q),
        "lifted": j::symmetry(&r),
    });
    let text = format!(
        "lift of {sname} along {mname}: {} with multiplier {}\n",
        r.matrix,
        show(&r.multiplier)
    );
    Ok(Output::ok(value, text))
}

pub fn push_sym(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (sname, spec) = sc.symmetry(opts.symmetry.as_deref())?;
    let (fname, flow) = sc.flow(opts.flow.as_deref().or(spec.flow.as_deref()))?;
    let (mname, v) = sc.map(opts.map.as_deref())?;
    let r = build_symmetry(&flow.spec, spec)?;
    let out = push_symmetry_power(v, &flow.spec, &r)?;
    let mut value = json!({
        "command": "push-sym",
        "flow": fname,
        "map": mname,
        "symmetry": sname,
        "k": out.k.to_string(),
        "search_bound": out.bound.to_string(),
        "pushed": j::symmetry(&out.symmetry),
        "rejected": out.rejected.iter().map(j::rat_matrix).collect::<Vec<_>>(),
        "identity_holds": &out.symmetry.matrix * v.matrix() == v.matrix() * &r.matrix.pow(out.k),
    });
    let mut text = format!(
        "least k = {} (search bound {}): Q = {} with multiplier {}\n",
        out.k,
        out.bound,
        out.symmetry.matrix,
        show(&out.symmetry.multiplier)
    );
    for (i, c) in out.rejected.iter().enumerate() {
        let _ = writeln!(text, "  C_{} = {} (not integral)", i + 1, c);
    }
    if opts.verify_sim {
        let psi = push_flow(v, &flow.spec)?.target;
        let res = check_symmetry_orbits(
            &NumericSymmetry::from_symmetry(&out.symmetry),
            &NumericFlow::from_spec(&psi),
            &sample_config(opts),
        );
        let _ = writeln!(text, "numeric symmetry residual on the image: {res:e}");
        value["verify_sim"] = residual_json(res, opts);
    }
    Ok(Output::ok(value, text))
}

pub fn verify(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let (fname, phi) = sc.nth_flow(opts.flow.as_deref(), 0)?;
    let (tname, psi) = sc.nth_flow(opts.target.as_deref(), 1)?;
    let (mname, v) = sc.map(opts.map.as_deref())?;
    let holds = verify_semiconjugacy(v, &phi.spec, &psi.spec);
    let mut value = json!({
        "command": "verify",
        "flow": fname,
        "target": tname,
        "map": mname,
        "semiconjugacy": holds,
    });
    let mut text = format!("{mname} semiconjugates {fname} to {tname}: {holds}\n");
    if opts.verify_sim {
        let res = check_semiconjugacy_orbits(
            &NumericAffine::from_map(v),
            &NumericFlow::from_spec(&phi.spec),
            &NumericFlow::from_spec(&psi.spec),
            &sample_config(opts),
        );
        let _ = writeln!(text, "numeric residual: {res:e}");
        value["verify_sim"] = residual_json(res, opts);
    }
    let mut out = Output::ok(value, text);
    if !holds {
        out.code = EXIT_MATH;
    }
    Ok(out)
}

/// Runs the scenario's `computations` list in order.
pub fn run(sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    let mut results = Vec::new();
    let mut text = String::new();
    let mut code = 0;
    for c in &sc.computations {
        let out = dispatch(c, sc, opts)?;
        text.push_str(&out.text);
        code = code.max(out.code);
        results.push(out.value);
    }
    Ok(Output {
        value: json!({"command": "run", "results": results}),
        text,
        code,
    })
}

pub fn dispatch(command: &str, sc: &Scenario, opts: &Options) -> Result<Output, CliError> {
    match command {
        "multipliers" => multipliers(sc, opts),
        "push" => push(sc, opts),
        "lift-sym" => lift_sym(sc, opts),
        "push-sym" => push_sym(sc, opts),
        "index" => index(sc, opts),
        "verify" => verify(sc, opts),
        other => Err(CliError::input(format!("unknown computation {other:?}"))),
    }
}
