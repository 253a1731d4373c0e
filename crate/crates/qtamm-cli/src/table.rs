//! Row-oriented output tables with stable CSV and JSON renderings.
//!
//! Floats are written with Rust's shortest round-trip formatting in both
//! encodings, so identical inputs produce byte-identical files.

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Table {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (h, cell) in self.headers.iter().zip(row) {
                    obj.insert(h.to_string(), json_value(cell));
                }
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Value::Array(rows))
            .expect("tables hold only serializable values");
        out.push('\n');
        out
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => Value::Number((*v).into()),
        Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(s) => Value::String(s.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_only_what_needs_it() {
        let mut t = Table::new(vec!["n", "value", "note"]);
        t.push(vec![0i64.into(), 0.5.into(), "plain".into()]);
        t.push(vec![1i64.into(), 2.5.into(), "a, b \"c\"".into()]);
        assert_eq!(
            t.render(Format::Csv),
            "n,value,note\n0,0.5,plain\n1,2.5,\"a, b \"\"c\"\"\"\n"
        );
    }

    #[test]
    fn json_mirrors_the_csv_records() {
        let mut t = Table::new(vec!["n", "value"]);
        t.push(vec![2i64.into(), 2.5.into()]);
        let parsed: Vec<serde_json::Value> =
            serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0]["n"], 2);
        assert_eq!(parsed[0]["value"], 2.5);
    }

    #[test]
    fn floats_keep_shortest_round_trip_form() {
        let mut t = Table::new(vec!["x"]);
        t.push(vec![0.1f64.into()]);
        t.push(vec![(1.0f64 / 3.0).into()]);
        let csv = t.render(Format::Csv);
        assert!(csv.contains("\n0.1\n"));
        assert!(csv.contains("\n0.3333333333333333\n"));
    }
}
