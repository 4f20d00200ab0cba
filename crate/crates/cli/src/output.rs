//! Number formatting shared by every command. Output goes through Rust's own
//! float formatting, so it never depends on the process locale.

use serde_json::{Map, Value};

use crate::config::Format;

/// `value` in scientific notation with `digits` significant digits.
pub fn sci(value: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), value)
}

/// `value` rounded to `digits` significant digits, as a JSON number.
pub fn rounded(value: f64, digits: usize) -> Value {
    let v: f64 = sci(value, digits).parse().unwrap_or(value);
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Named numeric columns with any number of rows.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self, digits: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| sci(v, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn records(&self, digits: usize) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| record(&self.columns, row, digits))
            .collect()
    }

    /// CSV text, or a JSON array of objects (a single object when
    /// `single` is set and there is exactly one row).
    pub fn render(&self, format: Format, digits: usize, single: bool) -> String {
        match format {
            Format::Csv => self.csv(digits),
            Format::Json => {
                let mut recs = self.records(digits);
                let value = if single && recs.len() == 1 {
                    recs.remove(0)
                } else {
                    Value::Array(recs)
                };
                json_text(&value)
            }
        }
    }
}

pub fn record(columns: &[&str], row: &[f64], digits: usize) -> Value {
    let map: Map<String, Value> = columns
        .iter()
        .zip(row)
        .map(|(c, &v)| (c.to_string(), rounded(v, digits)))
        .collect();
    Value::Object(map)
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
    s.push('\n');
    s
}
