//! CSV and JSON emission. Numbers are written with 17 significant digits so
//! both formats round-trip f64 exactly and are byte-stable.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    /// Nested record; flattened into its own columns for CSV.
    Object(Vec<(String, Value)>),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

pub type Record = Vec<(String, Value)>;

/// Ordered records sharing one set of column names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn record<const N: usize>(fields: [(&str, Value); N]) -> Record {
    fields.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

fn flatten<'a>(fields: &'a [(String, Value)], out: &mut Vec<&'a Value>) {
    for (_, v) in fields {
        match v {
            Value::Object(inner) => flatten(inner, out),
            other => out.push(other),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Num(x) => format_number(*x),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => s.clone(),
        Value::Object(_) => unreachable!("objects are flattened"),
    }
}

pub fn write_csv<W: Write>(data: &Dataset, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&data.columns)?;
    let mut cells = Vec::new();
    for rec in &data.records {
        cells.clear();
        flatten(rec, &mut cells);
        out.write_record(cells.iter().map(|v| cell(v)))?;
    }
    out.flush()?;
    Ok(())
}

fn write_json_value<W: Write>(v: &Value, w: &mut W) -> Result<()> {
    match v {
        Value::Num(x) if x.is_finite() => write!(w, "{}", format_number(*x))?,
        Value::Num(_) => w.write_all(b"null")?,
        Value::Int(i) => write!(w, "{i}")?,
        Value::Text(s) => w.write_all(serde_json::to_string(s)?.as_bytes())?,
        Value::Object(fields) => write_json_object(fields, w)?,
    }
    Ok(())
}

fn write_json_object<W: Write>(fields: &[(String, Value)], w: &mut W) -> Result<()> {
    w.write_all(b"{")?;
    for (i, (k, v)) in fields.iter().enumerate() {
        if i > 0 {
            w.write_all(b", ")?;
        }
        w.write_all(serde_json::to_string(k)?.as_bytes())?;
        w.write_all(b": ")?;
        write_json_value(v, w)?;
    }
    w.write_all(b"}")?;
    Ok(())
}

pub fn write_json<W: Write>(data: &Dataset, mut w: W) -> Result<()> {
    if data.records.is_empty() {
        w.write_all(b"[]\n")?;
        return Ok(());
    }
    w.write_all(b"[\n")?;
    for (i, rec) in data.records.iter().enumerate() {
        w.write_all(b"  ")?;
        write_json_object(rec, &mut w)?;
        w.write_all(if i + 1 < data.records.len() {
            b",\n"
        } else {
            b"\n"
        })?;
    }
    w.write_all(b"]\n")?;
    w.flush()?;
    Ok(())
}

pub fn write<W: Write>(data: &Dataset, format: Format, w: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(data, w),
        Format::Json => write_json(data, w),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(data: &Dataset, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            write(data, format, &mut w).with_context(|| format!("cannot write {}", p.display()))?;
            w.flush()
                .with_context(|| format!("cannot write {}", p.display()))
        }
        None => write(data, format, io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let mut d = Dataset::new(["a", "b", "name"]);
        d.push(record([
            ("a", 0.1.into()),
            ("b", (-3i64).into()),
            ("name", "x,y".into()),
        ]));
        d.push(record([
            ("a", 1e-300.into()),
            ("b", 7i64.into()),
            ("name", "q\"t".into()),
        ]));
        d
    }

    #[test]
    fn csv_header_only_when_empty() {
        let mut buf = Vec::new();
        write_csv(
            &Dataset::new(["energy_mev", "theta_rad", "sigma_scaled"]),
            &mut buf,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "energy_mev,theta_rad,sigma_scaled\n"
        );
    }

    #[test]
    fn csv_quotes_and_precision() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("a,b,name\n1.0000000000000001e-1,-3,\"x,y\"\n"));
    }

    #[test]
    fn json_round_trips_exactly() {
        let mut d = Dataset::new(["v", "inputs"]);
        let vals = [
            0.1,
            1.0 / 3.0,
            6.02214076e23,
            -2.5e-300,
            1.2345678901234567e300,
        ];
        for v in vals {
            d.push(record([
                ("v", v.into()),
                ("inputs", Value::Object(record([("w", (v * 7.0).into())]))),
            ]));
        }
        let mut buf = Vec::new();
        write_json(&d, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = parsed.as_array().unwrap();
        for (rec, v) in arr.iter().zip(vals) {
            assert_eq!(rec["v"].as_f64().unwrap(), v);
            assert_eq!(rec["inputs"]["w"].as_f64().unwrap(), v * 7.0);
        }
    }

    #[test]
    fn json_empty_is_empty_array() {
        let mut buf = Vec::new();
        write_json(&Dataset::new(["a"]), &mut buf).unwrap();
        assert_eq!(buf, b"[]\n");
    }

    #[test]
    fn nested_objects_flatten_in_csv() {
        let mut d = Dataset::new(["formula", "theta_rad", "value"]);
        d.push(record([
            ("formula", "master".into()),
            ("inputs", Value::Object(record([("theta_rad", 0.5.into())]))),
            ("value", 2.0.into()),
        ]));
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "formula,theta_rad,value\nmaster,5.0000000000000000e-1,2.0000000000000000e0\n"
        );
    }
}
