//! Locale-free text output.
//!
//! Numbers use the `%.15g` layout: 15 significant digits, trailing zeros
//! dropped, exponent form outside `[1e-4, 1e15)`. Both signed zeros print as
//! `0`, non-finite values as `nan`, `inf`, `-inf`.

use serde::Serialize;
use serde_json::Value;

use crate::manifest::RunManifest;

pub fn g15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (14 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => g15(*x),
            Cell::Int(n) => n.to_string(),
        }
    }
}

/// Column-named rows, rendered as CSV or as an array of JSON objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), serde_json::to_value(v).expect("cell")))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything a subcommand produces.
#[derive(Debug, Clone)]
pub struct Output {
    pub manifest: RunManifest,
    pub table: Table,
    /// JSON payload; a plain command emits `table` here.
    pub data: Value,
    pub warnings: Vec<String>,
}

impl Output {
    /// CSV body with the manifest as a `# `-prefixed block ahead of the header.
    pub fn csv_with_manifest(&self) -> String {
        let mut out = String::new();
        for line in self.manifest.to_json_pretty().lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.table.to_csv());
        out
    }

    pub fn csv(&self) -> String {
        self.table.to_csv()
    }

    pub fn json(&self) -> String {
        let mut doc = serde_json::Map::new();
        doc.insert("manifest".into(), self.manifest.to_value());
        doc.insert("data".into(), self.data.clone());
        render_json(&Value::Object(doc))
    }
}

/// Pretty JSON with a trailing newline. Objects are key-sorted maps, so
/// parsing and re-rendering reproduces the bytes.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g15() {
        let cases = [
            (0.0743957727703369, "0.0743957727703369"),
            (1.67332689560707, "1.67332689560707"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1e-05"),
            (1.234e-4, "0.0001234"),
            (123456789012345.0, "123456789012345"),
            (1e15, "1e+15"),
            (2.0f64.sqrt(), "1.4142135623731"),
            (1.0 / 3.0, "0.333333333333333"),
            (9.999999999999999e2, "1000"),
            (-0.0, "0"),
            (f64::NEG_INFINITY, "-inf"),
        ];
        for (x, want) in cases {
            assert_eq!(g15(x), want, "{x:e}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a", "K"]);
        t.push(vec![Cell::Num(0.5), Cell::Int(3)]);
        assert_eq!(t.to_csv(), "a,K\n0.5,3\n");
    }
}
