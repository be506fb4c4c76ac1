//! Scenario files: a field, flows, maps and symmetries in JSON.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use qpflow_core::{Error as CoreError, FieldElement, IntMatrix, NumberField, Rational, SemiconjugacyMap, TorusFlowSpec};
use serde::Deserialize;

use crate::CliError;

/// A JSON number or string holding an integer or `p/q`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<Rational, CliError> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => Rational::from_str(s.trim()).map_err(|_| CliError::input(format!("not a rational: {s:?}"))),
        }
    }

    pub fn integer(&self) -> Result<BigInt, CliError> {
        let q = self.rational()?;
        if !q.is_integer() {
            return Err(CliError::input(format!("not an integer: {}", q)));
        }
        Ok(q.to_integer())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// Ascending coefficients of a monic integer polynomial.
    pub poly: Vec<Num>,
    #[serde(default)]
    pub root_hint: Option<[Num; 2]>,
    #[serde(default)]
    pub assume_irreducible: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub name: String,
    /// Power-basis coordinates of each frequency.
    pub omega: Vec<Vec<Num>>,
    #[serde(default)]
    pub scale: Option<Num>,
    /// Known units (coordinates), used for fields of degree >= 3.
    #[serde(default)]
    pub units: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: String,
    pub matrix: Vec<Vec<Num>>,
    #[serde(default)]
    pub translation: Option<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpec {
    pub name: String,
    /// Flow the matrix acts on; for `lift-sym` this is ignored and the
    /// matrix is read as a symmetry of the image flow.
    #[serde(default)]
    pub flow: Option<String>,
    pub matrix: Vec<Vec<Num>>,
    #[serde(default)]
    pub translation: Option<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub field: FieldSpec,
    pub flows: Vec<FlowSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub symmetries: Vec<SymmetrySpec>,
    /// Commands run by `qpflow run`, in order.
    #[serde(default)]
    pub computations: Vec<String>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub field: Arc<NumberField>,
    pub flows: BTreeMap<String, Flow>,
    pub flow_order: Vec<String>,
    pub maps: BTreeMap<String, SemiconjugacyMap>,
    pub map_order: Vec<String>,
    pub symmetries: BTreeMap<String, SymmetrySpec>,
    pub symmetry_order: Vec<String>,
    pub computations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Flow {
    pub spec: TorusFlowSpec,
    pub units: Vec<FieldElement>,
}

fn input_error(context: &str, e: CoreError) -> CliError {
    match e {
        CoreError::NotSurjective => CliError::math(format!("{context}: {e}")),
        _ => CliError::input(format!("{context}: {e}")),
    }
}

pub fn element(field: &Arc<NumberField>, coords: &[Num]) -> Result<FieldElement, CliError> {
    let coords = coords.iter().map(Num::rational).collect::<Result<Vec<_>, _>>()?;
    field.element(coords).map_err(|e| input_error("field element", e))
}

pub fn int_matrix(rows: &[Vec<Num>]) -> Result<IntMatrix, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(Num::integer).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::new(rows).map_err(|e| input_error("matrix", e))
}

fn rationals(v: &Option<Vec<Num>>) -> Result<Option<Vec<Rational>>, CliError> {
    v.as_ref()
        .map(|v| v.iter().map(Num::rational).collect::<Result<Vec<_>, _>>())
        .transpose()
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid scenario: {e}")))?;
        Self::from_file(file)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self, CliError> {
        let coeffs = file.field.poly.iter().map(Num::integer).collect::<Result<Vec<_>, _>>()?;
        let hint = match &file.field.root_hint {
            Some([lo, hi]) => Some((lo.rational()?, hi.rational()?)),
            None => None,
        };
        let field = NumberField::with_assertion(coeffs, hint, file.field.assume_irreducible)
            .map_err(|e| input_error("field", e))?;
        let n = field.degree();

        let mut flows = BTreeMap::new();
        let mut flow_order = Vec::new();
        for f in &file.flows {
            let omega = f.omega.iter().map(|c| element(&field, c)).collect::<Result<Vec<_>, _>>()?;
            let scale = f.scale.as_ref().map(Num::rational).transpose()?;
            let spec = TorusFlowSpec::new(&field, omega, scale).map_err(|e| input_error(&format!("flow {}", f.name), e))?;
            let units = f.units.iter().map(|c| element(&field, c)).collect::<Result<Vec<_>, _>>()?;
            if flows.insert(f.name.clone(), Flow { spec, units }).is_some() {
                return Err(CliError::input(format!("duplicate flow name {:?}", f.name)));
            }
            flow_order.push(f.name.clone());
        }

        let mut maps = BTreeMap::new();
        let mut map_order = Vec::new();
        for m in &file.maps {
            let matrix = int_matrix(&m.matrix)?;
            if matrix.dim() != n {
                return Err(CliError::input(format!("map {}: matrix must be {n}x{n}", m.name)));
            }
            let map = SemiconjugacyMap::new(matrix, rationals(&m.translation)?)
                .map_err(|e| input_error(&format!("map {}", m.name), e))?;
            if maps.insert(m.name.clone(), map).is_some() {
                return Err(CliError::input(format!("duplicate map name {:?}", m.name)));
            }
            map_order.push(m.name.clone());
        }

        let mut symmetries = BTreeMap::new();
        let mut symmetry_order = Vec::new();
        for s in &file.symmetries {
            let matrix = int_matrix(&s.matrix)?;
            if matrix.dim() != n {
                return Err(CliError::input(format!("symmetry {}: matrix must be {n}x{n}", s.name)));
            }
            if let Some(c) = &s.translation {
                if c.len() != n {
                    return Err(CliError::input(format!("symmetry {}: translation must have {n} entries", s.name)));
                }
            }
            if let Some(flow) = &s.flow {
                if !flows.contains_key(flow) {
                    return Err(CliError::input(format!("symmetry {}: unknown flow {flow:?}", s.name)));
                }
            }
            if symmetries.insert(s.name.clone(), s.clone()).is_some() {
                return Err(CliError::input(format!("duplicate symmetry name {:?}", s.name)));
            }
            symmetry_order.push(s.name.clone());
        }

        Ok(Scenario {
            field,
            flows,
            flow_order,
            maps,
            map_order,
            symmetries,
            symmetry_order,
            computations: file.computations,
        })
    }

    fn pick<'a, T>(kind: &str, items: &'a BTreeMap<String, T>, order: &'a [String], name: Option<&str>) -> Result<(&'a str, &'a T), CliError> {
        let key = match name {
            Some(n) => n,
            None => order.first().ok_or_else(|| CliError::input(format!("scenario has no {kind}")))?.as_str(),
        };
        items
            .get_key_value(key)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| CliError::input(format!("unknown {kind} {key:?}")))
    }

    pub fn flow(&self, name: Option<&str>) -> Result<(&str, &Flow), CliError> {
        Self::pick("flow", &self.flows, &self.flow_order, name)
    }

    /// The `index`-th flow in file order when no name is given.
    pub fn nth_flow(&self, name: Option<&str>, index: usize) -> Result<(&str, &Flow), CliError> {
        match name {
            Some(_) => self.flow(name),
            None => {
                let key = self
                    .flow_order
                    .get(index)
                    .ok_or_else(|| CliError::input(format!("scenario needs at least {} flows", index + 1)))?;
                self.flow(Some(key))
            }
        }
    }

    pub fn map(&self, name: Option<&str>) -> Result<(&str, &SemiconjugacyMap), CliError> {
        Self::pick("map", &self.maps, &self.map_order, name)
    }

    pub fn symmetry(&self, name: Option<&str>) -> Result<(&str, &SymmetrySpec), CliError> {
        Self::pick("symmetry", &self.symmetries, &self.symmetry_order, name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        let n: Num = serde_json::from_str("\"-3/6\"").unwrap();
        assert_eq!(n.rational().unwrap(), Rational::new((-1).into(), 2.into()));
        assert!(n.integer().is_err());
        let n: Num = serde_json::from_str("7").unwrap();
        assert_eq!(n.integer().unwrap(), BigInt::from(7));
        let n: Num = serde_json::from_str("\"x\"").unwrap();
        assert_eq!(n.rational().unwrap_err().code, crate::EXIT_INPUT);
    }

    #[test]
    fn defaults_follow_file_order() {
        let sc = Scenario::parse(
            r#"{"field":{"poly":[-2,0,1],"root_hint":["-2","-1"]},
                "flows":[{"name":"b","omega":[[1,0],[0,1]]},{"name":"a","omega":[[1,0],[1,1]]}]}"#,
        )
        .unwrap();
        assert!(sc.field.generator().to_f64() < 0.0);
        assert_eq!(sc.flow(None).unwrap().0, "b");
        assert_eq!(sc.nth_flow(None, 1).unwrap().0, "a");
        assert!(sc.nth_flow(None, 2).is_err());
        assert!(sc.map(None).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        let base = r#"{"field":{"poly":[-2,0,1]},"flows":[{"name":"f","omega":[[1,0],[0,1]]}],"#;
        for tail in [
            r#""maps":[{"name":"V","matrix":[[1,0,0],[0,1,0],[0,0,1]]}]}"#,
            r#""symmetries":[{"name":"R","flow":"g","matrix":[[0,1],[1,2]]}]}"#,
            r#""maps":[{"name":"V","matrix":[[1,0],[0,1]]},{"name":"V","matrix":[[2,0],[0,1]]}]}"#,
        ] {
            let err = Scenario::parse(&format!("{base}{tail}")).unwrap_err();
            assert_eq!(err.code, crate::EXIT_INPUT, "{tail}");
        }
    }
}
