use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::checks::Check;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BasisRow {
    pub name: String,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub i: Option<i64>,
    pub j: i64,
    pub k: i64,
    pub h: usize,
    pub idempotent: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Term {
    pub name: String,
    /// Residue in `[0, p)`.
    pub coeff: u32,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProductRow {
    pub left: String,
    pub right: String,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRow {
    pub name: String,
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub p: u32,
    pub object: String,
    pub basis: Vec<BasisRow>,
    pub products: Vec<ProductRow>,
    pub checks: Vec<CheckRow>,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Report {
    pub fn new(command: &str, p: u32, object: String) -> Self {
        Report {
            p,
            object,
            basis: Vec::new(),
            products: Vec::new(),
            checks: Vec::new(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push_check(&mut self, c: &Check) {
        let name = if c.detail.is_empty() { c.name.clone() } else { format!("{} ({})", c.name, c.detail) };
        self.checks.push(CheckRow { name, status: c.status().to_string() });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status != "PASS")
    }

    /// JSON, or CSV of the basis; a report without a basis renders its checks as CSV.
    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                if self.basis.is_empty() && !self.checks.is_empty() {
                    for c in &self.checks {
                        w.serialize(c)?;
                    }
                } else {
                    if self.basis.is_empty() {
                        w.write_record(["name", "a", "b", "i", "j", "k", "h", "idempotent"])?;
                    }
                    for r in &self.basis {
                        w.serialize(r)?;
                    }
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
