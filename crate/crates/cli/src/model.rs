//! Model files: JSON documents describing a measurement model, its conserved
//! quantity and optional observable and probe.
//!
//! ```json
//! {
//!   "n1": 2, "n2": 2,
//!   "ready_state": [[1, 0], [0, 0]],
//!   "unitary": [[[1, 0], [0, 0], [0, 0], [0, 0]], ...],
//!   "conserved": {"kind": "multiplicative", "LA": [...], "LB": [...]},
//!   "observable": [...], "probe": [...]
//! }
//! ```
//!
//! Complex numbers are `[re, im]`; matrices are arrays of rows.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;
use wayaudit_core::{
    ConservationKind, Conserved64, Error as CoreError, Model64, Operator64, StateVector64, Tolerances64,
};

use crate::json::Json;

/// Input problem tied to a named field of the model file or command line.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

type Result<T> = std::result::Result<T, InputError>;

#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: Model64,
    pub conserved: Conserved64,
    pub observable: Option<Operator64>,
    pub probe: Option<Operator64>,
}

impl LoadedModel {
    /// The file's observable, or the model's own `Σᵢ (i+1)|u(i)⟩⟨u(i)|`.
    pub fn observable_or_default(&self) -> Operator64 {
        self.observable.clone().unwrap_or_else(|| self.model.observable())
    }

    pub fn probe(&self) -> Result<&Operator64> {
        self.probe.as_ref().ok_or_else(|| InputError::new("probe", "the model file has no probe observable"))
    }
}

pub fn load_model(path: &Path) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new("model", format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| InputError::new("model", format!("parse error: {e}")))?;
    parse_model(&value)
}

pub fn parse_model(doc: &Value) -> Result<LoadedModel> {
    if !doc.is_object() {
        return Err(InputError::new("model", "expected a JSON object"));
    }
    let tol = Tolerances64::default();
    let n1 = dimension(doc, "n1")?;
    let n2 = dimension(doc, "n2")?;

    let basis = match doc.get("system_basis") {
        None | Some(Value::Null) => StateVector64::computational_basis(n1),
        Some(v) => {
            let rows = array(v, "system_basis", Some(n1))?;
            rows.iter()
                .enumerate()
                .map(|(k, row)| state(row, &format!("system_basis[{k}]"), n1))
                .collect::<Result<_>>()?
        }
    };
    let ready = state(required(doc, "ready_state")?, "ready_state", n2)?;
    let unitary = matrix(required(doc, "unitary")?, "unitary", n1 * n2)?;
    let model = Model64::new(basis, ready, unitary, &tol).map_err(|e| match e {
        CoreError::NotOrthonormal { .. } => InputError::new("system_basis", e.to_string()),
        other => InputError::new("unitary", other.to_string()),
    })?;

    let conserved = required(doc, "conserved")?;
    let kind = match required(conserved, "kind").map_err(|_| InputError::new("conserved.kind", "missing"))? {
        Value::String(s) if s == "multiplicative" => ConservationKind::Multiplicative,
        Value::String(s) if s == "additive" => ConservationKind::Additive,
        _ => return Err(InputError::new("conserved.kind", "expected \"multiplicative\" or \"additive\"")),
    };
    let la = hermitian(conserved.get("LA"), "conserved.LA", n1, &tol)?;
    let lb = hermitian(conserved.get("LB"), "conserved.LB", n2, &tol)?;
    let conserved = Conserved64::new(kind, la, lb, &tol).map_err(|e| InputError::new("conserved", e.to_string()))?;

    let optional = |key: &str, dim| match doc.get(key) {
        None | Some(Value::Null) => Ok(None),
        v => hermitian(v, key, dim, &tol).map(Some),
    };
    Ok(LoadedModel { observable: optional("observable", n1)?, probe: optional("probe", n2)?, model, conserved })
}

/// The model in file format; [`parse_model`] reads it back.
pub fn model_echo(m: &LoadedModel) -> Json {
    let q = &m.conserved;
    let mut pairs = vec![
        ("n1", Json::from(m.model.n1())),
        ("n2", Json::from(m.model.n2())),
        ("system_basis", Json::arr(m.model.system_basis().iter())),
        ("ready_state", m.model.ready_state().into()),
        ("unitary", m.model.interaction().into()),
        ("conserved", Json::obj([("kind", Json::from(q.kind.name())), ("LA", (&q.la).into()), ("LB", (&q.lb).into())])),
    ];
    if let Some(o) = &m.observable {
        pairs.push(("observable", o.into()));
    }
    if let Some(p) = &m.probe {
        pairs.push(("probe", p.into()));
    }
    Json::obj(pairs)
}

fn required<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).filter(|v| !v.is_null()).ok_or_else(|| InputError::new(key, "missing"))
}

fn dimension(doc: &Value, key: &str) -> Result<usize> {
    match required(doc, key)?.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(InputError::new(key, "expected a positive integer")),
    }
}

fn array<'a>(v: &'a Value, field: &str, len: Option<usize>) -> Result<&'a Vec<Value>> {
    let items = v.as_array().ok_or_else(|| InputError::new(field, "expected an array"))?;
    match len {
        Some(n) if items.len() != n => {
            Err(InputError::new(field, format!("expected {n} entries, found {}", items.len())))
        }
        _ => Ok(items),
    }
}

pub(crate) fn complex(v: &Value, field: &str) -> Result<Complex64> {
    let parts = v.as_array().ok_or_else(|| InputError::new(field, "expected a complex number [re, im]"))?;
    match parts.as_slice() {
        [re, im] => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(InputError::new(field, "complex parts must be numbers")),
        },
        _ => Err(InputError::new(field, format!("expected [re, im], found {} element(s)", parts.len()))),
    }
}

pub(crate) fn vector(v: &Value, field: &str, dim: usize) -> Result<Vec<Complex64>> {
    array(v, field, Some(dim))?.iter().enumerate().map(|(k, z)| complex(z, &format!("{field}[{k}]"))).collect()
}

fn state(v: &Value, field: &str, dim: usize) -> Result<StateVector64> {
    StateVector64::from_amplitudes(vector(v, field, dim)?).map_err(|e| InputError::new(field, e.to_string()))
}

fn matrix(v: &Value, field: &str, dim: usize) -> Result<Operator64> {
    let rows = array(v, field, Some(dim))?
        .iter()
        .enumerate()
        .map(|(i, row)| vector(row, &format!("{field}[{i}]"), dim))
        .collect::<Result<Vec<_>>>()?;
    Operator64::from_rows(rows).map_err(|e| InputError::new(field, e.to_string()))
}

fn hermitian(v: Option<&Value>, field: &str, dim: usize, tol: &Tolerances64) -> Result<Operator64> {
    let v = v.filter(|v| !v.is_null()).ok_or_else(|| InputError::new(field, "missing"))?;
    let a = matrix(v, field, dim)?;
    let residual = a.hermiticity_residual();
    if residual > tol.hermiticity {
        return Err(InputError::new(field, format!("not Hermitian (residual {residual:e})")));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn cnot_doc() -> Value {
        let o = [0, 0];
        let l = [1, 0];
        json!({
            "n1": 2, "n2": 2,
            "ready_state": [l, o],
            "unitary": [[l, o, o, o], [o, l, o, o], [o, o, o, l], [o, o, l, o]],
            "conserved": {"kind": "multiplicative", "LA": [[l, o], [o, [2, 0]]], "LB": [[l, o], [o, l]]},
        })
    }

    #[test]
    fn loads_cnot() {
        let m = parse_model(&cnot_doc()).unwrap();
        assert_eq!(m.model.interaction(), &Operator64::cnot());
        assert!(m.probe.is_none());
        assert_eq!(m.probe().unwrap_err().field, "probe");
    }

    #[test]
    fn echo_round_trips() {
        let mut doc = cnot_doc();
        doc["probe"] = json!([[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]);
        let m = parse_model(&doc).unwrap();
        let echoed: Value = serde_json::from_str(&model_echo(&m).to_canonical()).unwrap();
        let back = parse_model(&echoed).unwrap();
        assert_eq!(back.model, m.model);
        assert_eq!(back.conserved, m.conserved);
        assert_eq!(back.probe, m.probe);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let mut doc = cnot_doc();
        doc["unitary"][0][1] = json!([1, 0]);
        assert_eq!(parse_model(&doc).unwrap_err().field, "unitary");

        let mut doc = cnot_doc();
        doc["ready_state"][0] = json!([1]);
        let err = parse_model(&doc).unwrap_err();
        assert_eq!(err.field, "ready_state[0]");
        assert!(err.message.contains("[re, im]"));

        let mut doc = cnot_doc();
        doc["conserved"]["LA"][0][1] = json!([0, 1]);
        assert_eq!(parse_model(&doc).unwrap_err().field, "conserved.LA");

        let mut doc = cnot_doc();
        doc["n2"] = json!(3);
        assert_eq!(parse_model(&doc).unwrap_err().field, "ready_state");

        let mut doc = cnot_doc();
        doc["system_basis"] = json!([[[1, 0], [0, 0]], [[1, 0], [0, 0]]]);
        assert_eq!(parse_model(&doc).unwrap_err().field, "system_basis");
    }
}
