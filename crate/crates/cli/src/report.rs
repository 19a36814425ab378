//! Report serialization. Numbers are carried at full precision until
//! the final write, where every float is cut to the requested number of
//! significant digits.

use serde_json::{json, Map, Number, Value};
use teleportrix::teleport::Repetitions;
use teleportrix::Complex;

pub const MIN_PRECISION: i64 = 6;
pub const MAX_PRECISION: i64 = 17;

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    text.parse().unwrap_or(x)
}

pub fn complex(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn repetitions(r: Repetitions) -> Value {
    match r {
        Repetitions::Finite(v) => json!(v),
        Repetitions::Infinite => json!("Infinite"),
    }
}

fn round_value(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0), digits);
            if let Some(r) = Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_value(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_value(x, digits)),
        _ => {}
    }
}

/// Pretty JSON with a trailing newline.
pub fn render_json(mut v: Value, digits: usize) -> String {
    round_value(&mut v, digits);
    let mut out = serde_json::to_string_pretty(&v).expect("json values always serialize");
    out.push('\n');
    out
}

/// A CSV table with a fixed header.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
    digits: usize,
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Table {
    pub fn new(header: &'static [&'static str], digits: usize) -> Self {
        Table {
            header,
            rows: Vec::new(),
            digits,
        }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        let row = cells
            .into_iter()
            .map(|c| match c {
                Cell::Num(x) if x.is_finite() => round_sig(x, self.digits).to_string(),
                Cell::Num(_) => "Infinite".to_string(),
                Cell::Int(k) => k.to_string(),
                Cell::Bool(b) => b.to_string(),
                Cell::Text(s) => s,
                Cell::Empty => String::new(),
            })
            .collect();
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_significant_digits() {
        assert_eq!(round_sig(0.30000000000000004, 12), 0.3);
        assert_eq!(round_sig(123456.789, 6), 123457.0);
        assert_eq!(round_sig(-1.23456789e-20, 6), -1.23457e-20);
        assert_eq!(round_sig(0.0, 6), 0.0);
    }

    #[test]
    fn nested_floats_are_rounded_and_integers_kept() {
        let v = json!({ "a": [0.1 + 0.2, 3], "b": { "c": 2.0 / 3.0 } });
        let text = render_json(v, 6);
        assert!(text.contains("0.3"));
        assert!(text.contains("0.666667"));
        assert!(text.contains("3\n") || text.contains("3\r") || text.contains(" 3"));
    }

    #[test]
    fn csv_uses_lf_and_header() {
        let mut t = Table::new(&["x", "y"], 6);
        t.push(vec![Cell::Num(1.0 / 3.0), Cell::Bool(true)]);
        assert_eq!(t.render(), "x,y\n0.333333,true\n");
    }
}
