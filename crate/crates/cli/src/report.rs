use serde_json::{json, Value};

use jetlie::exterior::VectorField;
use jetlie::symkernel::{scalar, Poly, Scalar};

/// Finished command output: exit code, text rendering and JSON rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn new(code: i32, text: String, json: Value) -> Report {
        Report { code, text, json }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string(&self.json).expect("json values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

pub fn rational(s: &Scalar) -> Value {
    Value::String(scalar::render(s))
}

pub fn rationals(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// `coord: expr; coord: expr`, the same syntax the parser reads.
pub fn field_text(v: &VectorField<Poly>) -> String {
    let names = v.chart().names();
    let parts: Vec<String> = v.components().map(|(i, c)| format!("{}: {}", names[i], c.render())).collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("; ")
    }
}

pub fn field_json(v: &VectorField<Poly>) -> Value {
    let names = v.chart().names();
    let mut m = serde_json::Map::new();
    for (i, c) in v.components() {
        m.insert(names[i].clone(), Value::String(c.render()));
    }
    Value::Object(m)
}

pub fn basis_json(fields: &[VectorField<Poly>]) -> Value {
    json!({ "dims": fields.len(), "basis": fields.iter().map(field_json).collect::<Vec<_>>() })
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.3e}")
}
