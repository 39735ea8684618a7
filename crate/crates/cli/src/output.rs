//! CSV and JSON encodings of a [`Table`].
//!
//! CSV layout:
//!
//! ```text
//! # key=value key=value ...
//! col_a,col_b,...
//! 1.0000000000000000e0,...
//! # verdict name=value
//! ```
//!
//! Reals are written with 17 significant digits, which round-trips every
//! `f64`. JSON is a single object with `params`, `columns`, `rows` (array of
//! arrays) and `verdicts`.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pq_bernstein::{Cell, Table, VerdictValue};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format `{other}` (expected csv or json)"),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn format_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Real(x) => format_real(*x),
        Cell::Text(s) => s.clone(),
    }
}

fn format_verdict(v: &VerdictValue) -> String {
    match v {
        VerdictValue::Bool(b) => b.to_string(),
        VerdictValue::Real(x) => format_real(*x),
        VerdictValue::Text(s) => s.clone(),
    }
}

/// Header values are space separated, so embedded whitespace is replaced.
fn header_value(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join("_")
}

pub fn to_csv(table: &Table) -> Result<String> {
    let mut out = String::from("#");
    for (k, v) in &table.params {
        out.push(' ');
        out.push_str(&header_value(k));
        out.push('=');
        out.push_str(&header_value(v));
    }
    out.push('\n');

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(format_cell))?;
    }
    let body = writer.into_inner().context("flushing CSV rows")?;
    out.push_str(std::str::from_utf8(&body)?);

    for (k, v) in &table.verdicts {
        out.push_str(&format!(
            "# verdict {}={}\n",
            header_value(k),
            format_verdict(v)
        ));
    }
    Ok(out)
}

fn real_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_real(x))
    }
}

pub fn to_json(table: &Table) -> Result<String> {
    let params: Map<String, Value> = table
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|c| match c {
                        Cell::Int(i) => json!(i),
                        Cell::Real(x) => real_value(*x),
                        Cell::Text(s) => json!(s),
                    })
                    .collect(),
            )
        })
        .collect();
    let verdicts: Map<String, Value> = table
        .verdicts
        .iter()
        .map(|(k, v)| {
            let value = match v {
                VerdictValue::Bool(b) => json!(b),
                VerdictValue::Real(x) => real_value(*x),
                VerdictValue::Text(s) => json!(s),
            };
            (k.clone(), value)
        })
        .collect();
    let doc = json!({
        "params": params,
        "columns": table.columns,
        "rows": rows,
        "verdicts": verdicts,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

pub fn render(table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

/// Parameter header, column names and numeric rows read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub verdicts: Vec<(String, String)>,
}

impl ParsedCsv {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].parse().ok()).collect()
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn verdict(&self, key: &str) -> Option<&str> {
        self.verdicts
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn split_pairs(text: &str) -> Vec<(String, String)> {
    text.split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Verdict keys may carry curve labels such as `B[n=10;p=0.9;q=0.5]`; values never contain `=`.
fn split_verdict(text: &str) -> Option<(String, String)> {
    let (k, v) = text.trim().rsplit_once('=')?;
    Some((k.to_string(), v.to_string()))
}

pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .context("missing `# key=value` parameter header")?;
    let params = split_pairs(header);

    let mut verdicts = Vec::new();
    let mut body = String::new();
    for line in lines {
        if let Some(v) = line.strip_prefix("# verdict ") {
            verdicts.extend(split_verdict(v));
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let columns = reader.headers()?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
    Ok(ParsedCsv {
        params,
        columns,
        rows,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["n", "x", "name"]);
        t.param("rule", "half_harmonic")
            .param("definition", "a b  c");
        t.push_row(vec![
            Cell::Int(3),
            Cell::Real(0.1),
            Cell::Text("alpha".into()),
        ]);
        t.push_row(vec![
            Cell::Int(4),
            Cell::Real(-1.0 / 3.0),
            Cell::Text("beta".into()),
        ]);
        t.verdict("ok", true).verdict("label", "no-convergence");
        t
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&sample()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# rule=half_harmonic definition=a_b_c");
        assert_eq!(lines[1], "n,x,name");
        assert_eq!(lines[2], "3,1.0000000000000001e-1,alpha");
        assert_eq!(lines[4], "# verdict ok=true");
        assert_eq!(lines[5], "# verdict label=no-convergence");
    }

    #[test]
    fn csv_parses_back() {
        let parsed = parse_csv(&to_csv(&sample()).unwrap()).unwrap();
        assert_eq!(parsed.param("rule"), Some("half_harmonic"));
        assert_eq!(parsed.column("x").unwrap()[1], -1.0 / 3.0);
        assert_eq!(parsed.column("name"), None);
        assert_eq!(parsed.verdict("ok"), Some("true"));
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&to_json(&sample()).unwrap()).unwrap();
        assert_eq!(v["params"]["rule"], "half_harmonic");
        assert_eq!(v["columns"][2], "name");
        assert_eq!(v["rows"][1][0], 4);
        assert_eq!(v["rows"][1][1].as_f64().unwrap(), -1.0 / 3.0);
        assert_eq!(v["verdicts"]["ok"], true);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["params", "columns", "rows", "verdicts"]);
    }

    #[test]
    fn non_finite_values_are_spelled_out() {
        assert_eq!(format_real(f64::INFINITY), "inf");
        assert_eq!(format_real(f64::NAN), "NaN");
        assert_eq!("inf".parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
