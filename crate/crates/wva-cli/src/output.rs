//! CSV writing helpers. All floats go through the shortest round-trip
//! formatter so reruns with identical inputs produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Shortest decimal representation that parses back to the same f64.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

/// A CSV document accumulated in memory and written in one shot, so a
/// failing run never leaves a half-written file behind.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[CsvField<'_>]) {
        assert_eq!(
            fields.len(),
            self.columns,
            "row width does not match the header"
        );
        for (i, field) in fields.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            match field {
                CsvField::Str(s) => self.text.push_str(s),
                CsvField::Float(v) => {
                    let _ = write!(self.text, "{v}");
                }
                CsvField::Int(v) => {
                    let _ = write!(self.text, "{v}");
                }
                CsvField::Uint(v) => {
                    let _ = write!(self.text, "{v}");
                }
            }
        }
        self.text.push('\n');
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, &self.text)?;
        Ok(())
    }
}

pub enum CsvField<'a> {
    Str(&'a str),
    Float(f64),
    Int(i64),
    Uint(u64),
}
