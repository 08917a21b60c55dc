//! Canonical JSON: sorted keys, two-space indentation, every float written
//! with 17 significant digits. Identical values always serialize to
//! identical bytes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use wayaudit_core::{Operator64, StateVector64};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn obj<K: Into<String>>(pairs: impl IntoIterator<Item = (K, Json)>) -> Self {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn arr<V: Into<Json>>(items: impl IntoIterator<Item = V>) -> Self {
        Json::Arr(items.into_iter().map(Into::into).collect())
    }

    pub fn get(&self, key: &str) -> Option<&Json> {
        match self {
            Json::Obj(map) => map.get(key),
            _ => None,
        }
    }

    fn is_container(&self) -> bool {
        matches!(self, Json::Arr(_) | Json::Obj(_))
    }

    fn is_flat(&self) -> bool {
        match self {
            Json::Arr(items) => items.len() <= 2 && !items.iter().any(Json::is_container),
            _ => !self.is_container(),
        }
    }

    /// Pretty canonical form, newline-terminated.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(x) => out.push_str(&format_float(*x).unwrap_or_else(|| "null".into())),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings always serialize")),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if items.iter().all(Json::is_flat) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, depth);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push(']');
            }
            Json::Obj(map) if map.is_empty() => out.push_str("{}"),
            Json::Obj(map) => {
                out.push('{');
                for (k, (key, value)) in map.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    indent(out, depth + 1);
                    out.push_str(&serde_json::to_string(key).expect("keys always serialize"));
                    out.push_str(": ");
                    value.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push('}');
            }
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// `{:.16e}` for finite values (negative zero folded to zero), `None` otherwise.
pub fn format_float(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Some(format!("{x:.16e}"))
}

impl From<bool> for Json {
    fn from(b: bool) -> Self {
        Json::Bool(b)
    }
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Json::Num(x)
    }
}

impl From<usize> for Json {
    fn from(n: usize) -> Self {
        Json::Int(n as i64)
    }
}

impl From<u64> for Json {
    fn from(n: u64) -> Self {
        Json::Int(n as i64)
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Self {
        Json::Str(s.to_owned())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Self {
        Json::Str(s)
    }
}

impl From<Complex64> for Json {
    fn from(z: Complex64) -> Self {
        Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

impl From<&StateVector64> for Json {
    fn from(v: &StateVector64) -> Self {
        Json::arr(v.amplitudes().iter().copied())
    }
}

impl From<&Operator64> for Json {
    fn from(a: &Operator64) -> Self {
        Json::arr(a.rows().map(|row| Json::arr(row.iter().copied())))
    }
}

/// Complex matrix given as rows.
pub fn matrix(rows: &[Vec<Complex64>]) -> Json {
    Json::arr(rows.iter().map(|row| Json::arr(row.iter().copied())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_significant_digits() {
        assert_eq!(format_float(1.0).unwrap(), "1.0000000000000000e0");
        assert_eq!(format_float(-0.0).unwrap(), "0.0000000000000000e0");
        assert_eq!(format_float(0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::NAN), None);
        let back: f64 = format_float(0.1).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn keys_are_sorted_and_scalar_arrays_inline() {
        let j = Json::obj([("b", Json::arr([1.0, 2.0])), ("a", Json::Null)]);
        assert_eq!(j.to_canonical(), "{\n  \"a\": null,\n  \"b\": [1.0000000000000000e0, 2.0000000000000000e0]\n}\n");
    }

    #[test]
    fn complex_rows_stay_on_one_line() {
        let j: Json = (&Operator64::identity(2)).into();
        let text = j.to_canonical();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains(
            "  [[1.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, 0.0000000000000000e0]],"
        ));
    }

    #[test]
    fn output_is_valid_json() {
        let j = Json::obj([
            ("m", (&Operator64::pauli_y()).into()),
            ("s", Json::from("quote \" and \\")),
            ("e", Json::Arr(vec![])),
            ("n", Json::from(f64::INFINITY)),
        ]);
        let v: serde_json::Value = serde_json::from_str(&j.to_canonical()).unwrap();
        assert_eq!(v["m"][0][1][1].as_f64(), Some(-1.0));
        assert!(v["n"].is_null());
    }
}
