//! Self-describing data tables written as CSV (with `#` header lines) and a
//! JSON mirror.
//!
//! Floats are printed with 17 significant digits so that repeated runs can
//! be compared byte for byte.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Map};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Text(v.to_string())
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) => format_float(*v),
            Value::Int(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Num(v) if v.is_finite() => json!(v),
            Value::Num(v) => json!(format_float(*v)),
            Value::Int(v) => json!(v),
            Value::Text(s) => json!(s),
        }
    }
}

/// A table with ordered `key: value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub product: String,
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl DataTable {
    pub fn new(product: impl Into<String>, columns: &[&str]) -> Self {
        DataTable {
            product: product.into(),
            header: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.header.push((key.into(), value.into().csv()));
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# product: {}\n", self.product);
        for (k, v) in &self.header {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut header = Map::new();
        for (k, v) in &self.header {
            header.insert(k.clone(), json!(v));
        }
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(Value::json).collect()))
            .collect();
        json!({
            "product": self.product,
            "header": header,
            "columns": self.columns,
            "rows": rows,
        })
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> io::Result<Vec<PathBuf>> {
        let csv = dir.join(format!("{stem}.csv"));
        let js = dir.join(format!("{stem}.json"));
        fs::write(&csv, self.to_csv())?;
        let mut text = serde_json::to_string_pretty(&self.to_json()).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&js, text)?;
        Ok(vec![csv, js])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = DataTable::new("demo", &["n", "value"]);
        t.meta("x", 1.5);
        t.push(vec![1usize.into(), 0.1.into()]);
        t.push(vec![2usize.into(), f64::NAN.into()]);
        let csv = t.to_csv();
        assert_eq!(
            csv,
            "# product: demo\n# x: 1.5000000000000000e0\nn,value\n1,1.0000000000000001e-1\n2,nan\n"
        );
        let j = t.to_json();
        assert_eq!(j["rows"][1][1], "nan");
        assert_eq!(j["header"]["x"], "1.5000000000000000e0");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let v = 0.1 + 0.2;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }
}
