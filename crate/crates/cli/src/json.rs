//! Canonical JSON: objects with sorted keys, exact numbers as strings.

use num_bigint::BigInt;
use qpflow_core::linalg::format_rational;
use qpflow_core::{Completeness, FieldElement, IntMatrix, Order, RatMatrix, Rational, Symmetry, TorusFlowSpec, UnitGroup};
use serde_json::{json, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn integer(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn element(e: &FieldElement) -> Value {
    json!({
        "coords": e.coords().iter().map(rational).collect::<Vec<_>>(),
        "display": e.as_poly().display_in("a"),
        "approx": format!("{:.12}", e.to_f64()),
    })
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(integer).collect())).collect())
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(rational).collect())).collect())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn flow(f: &TorusFlowSpec) -> Value {
    json!({
        "omega": f.omega().iter().map(element).collect::<Vec<_>>(),
        "scale": f.scale().map(rational).unwrap_or(Value::Null),
    })
}

pub fn completeness(c: Completeness) -> Value {
    Value::String(
        match c {
            Completeness::Complete => "complete",
            Completeness::VerifiedOnly => "verified_only",
        }
        .into(),
    )
}

pub fn unit_group(g: &UnitGroup) -> Value {
    json!({
        "rank": g.rank(),
        "torsion": ["1", "-1"],
        "generators": g.generators().iter().map(element).collect::<Vec<_>>(),
        "completeness": completeness(g.completeness()),
    })
}

pub fn order(o: &Order) -> Value {
    json!({
        "basis": o.lattice().basis().iter().map(element).collect::<Vec<_>>(),
    })
}

pub fn symmetry(s: &Symmetry) -> Value {
    json!({
        "matrix": int_matrix(&s.matrix),
        "multiplier": element(&s.multiplier),
        "translation": s.translation.as_deref().map(vector).unwrap_or(Value::Null),
    })
}

/// Pretty-printed canonical form, newline-terminated.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
