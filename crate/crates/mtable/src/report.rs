//! Command output in three renderings.
//!
//! A [`Report`] is a flat summary record plus an optional table of rows.
//! JSON prints one object (the table under its own key), CSV prints the
//! table (or the summary as a single row when there is no table), text
//! prints `key: value` lines followed by the table.
//!
//! Integers are printed exactly; reals always with 10 fractional digits.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v.into())
    }
}

impl From<u128> for Field {
    fn from(v: u128) -> Self {
        Field::Int(v as i128)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v.into())
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i128)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Null, Into::into)
    }
}

/// Fixed 10-digit rendering of a real; `None` for NaN and infinities.
pub fn fixed10(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.10}"))
}

impl Field {
    fn plain(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(x) => fixed10(*x).unwrap_or_else(|| x.to_string()),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => number(&v.to_string()),
            Field::Real(x) => fixed10(*x).map_or(Value::Null, |s| number(&s)),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        }
    }
}

fn number(text: &str) -> Value {
    // arbitrary_precision keeps the literal digits
    Value::Number(text.parse::<Number>().expect("valid numeric literal"))
}

/// Ordered key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(Vec<(&'static str, Field)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Field>) {
        self.0.push((key, value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    fn json(&self) -> Map<String, Value> {
        self.0
            .iter()
            .map(|(k, v)| ((*k).to_owned(), v.json()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub key: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Row,
    pub table: Option<Table>,
    /// Any violation or failed check; maps to exit code 1.
    pub failed: bool,
}

impl Report {
    pub fn new(summary: Row) -> Self {
        Report {
            summary,
            table: None,
            failed: false,
        }
    }

    pub fn with_table(mut self, key: &'static str, columns: Vec<&'static str>, rows: Vec<Row>) -> Self {
        self.table = Some(Table { key, columns, rows });
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed |= failed;
        self
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => self.render_json(out),
            Format::Csv => self.render_csv(out),
            Format::Text => self.render_text(out),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut object = self.summary.json();
        if let Some(table) = &self.table {
            let rows = table.rows.iter().map(|r| Value::Object(r.json())).collect();
            object.insert(table.key.to_owned(), Value::Array(rows));
        }
        Value::Object(object)
    }

    fn render_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer(&mut *out, &self.to_json())?;
        writeln!(out)
    }

    fn render_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        match &self.table {
            Some(table) => {
                writer.write_record(&table.columns)?;
                for row in &table.rows {
                    writer.write_record(
                        table
                            .columns
                            .iter()
                            .map(|c| row.get(c).map(Field::plain).unwrap_or_default()),
                    )?;
                }
            }
            None => {
                writer.write_record(self.summary.0.iter().map(|(k, _)| *k))?;
                writer.write_record(self.summary.0.iter().map(|(_, v)| v.plain()))?;
            }
        }
        writer.flush()
    }

    fn render_text(&self, out: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.summary.0 {
            writeln!(out, "{key}: {}", value.plain())?;
        }
        if let Some(table) = &self.table {
            writeln!(out, "{} ({}):", table.key, table.rows.len())?;
            let cells: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    table
                        .columns
                        .iter()
                        .map(|c| r.get(c).map(Field::plain).unwrap_or_default())
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = table
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |items: Vec<&str>| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "  {}", line(table.columns.clone()))?;
            for row in &cells {
                writeln!(out, "  {}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(report: &Report, format: Format) -> String {
        let mut buf = Vec::new();
        report.render(format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn json_keeps_ten_digits() {
        let r = Report::new(Row::new().with("n", 100u64).with("m", 2906u64).with("density", 0.2906));
        assert_eq!(render(&r, Format::Json), "{\"n\":100,\"m\":2906,\"density\":0.2906000000}\n");
    }

    #[test]
    fn csv_uses_table_columns() {
        let rows = vec![Row::new().with("n", 10u64).with("m", 42u64).with("extra", true)];
        let r = Report::new(Row::new().with("count", 1usize)).with_table("rows", vec!["n", "m"], rows);
        assert_eq!(render(&r, Format::Csv), "n,m\n10,42\n");
    }

    #[test]
    fn non_finite_reals() {
        let r = Report::new(Row::new().with("x", f64::INFINITY));
        assert_eq!(render(&r, Format::Json), "{\"x\":null}\n");
    }
}
