//! A command result and its renderings.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command produced; `falsified` marks a failed identity check.
pub struct Report {
    pub json: Value,
    pub text: Option<String>,
    pub csv: Option<Table>,
    pub svg: Option<String>,
    pub falsified: bool,
}

impl Report {
    pub fn new<T: Serialize>(value: &T) -> Self {
        Report {
            json: serde_json::to_value(value).expect("reports serialize"),
            text: None,
            csv: None,
            svg: None,
            falsified: false,
        }
    }

    pub fn text(mut self, t: impl Into<String>) -> Self {
        self.text = Some(t.into());
        self
    }

    pub fn csv(mut self, t: Table) -> Self {
        self.csv = Some(t);
        self
    }

    pub fn falsified(mut self, f: bool) -> Self {
        self.falsified = f;
        self
    }

    pub fn render(&self, format: Format) -> Result<String, UsageError> {
        let unsupported = || UsageError(format!("this command has no {format:?} output").to_lowercase());
        match format {
            Format::Json => Ok(format!("{}\n", self.json)),
            Format::Text => self.text.as_ref().map(|t| format!("{}\n", t.trim_end())).ok_or_else(unsupported),
            Format::Svg => self.svg.clone().ok_or_else(unsupported),
            Format::Csv => {
                let table = self.csv.as_ref().ok_or_else(unsupported)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header).expect("in-memory write");
                for row in &table.rows {
                    w.write_record(row).expect("in-memory write");
                }
                Ok(String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"))
            }
        }
    }
}

/// `key: value` lines.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

pub fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}
