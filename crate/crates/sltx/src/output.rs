//! Comma-separated tables with a `#`-prefixed provenance header.
//!
//! Floats are written as `{:.16e}` (17 significant digits), so every value
//! round-trips and repeated runs are byte-identical.

use std::io::{self, Write};

/// Tool version stamped into every header.
pub const TOOL_VERSION: &str = concat!("sltx ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Header lines after the version and digest (without the `#`).
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Trailing comment lines (without the `#`).
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the table for the given command and spec digest.
    pub fn write(&self, out: &mut impl Write, command: &str, digest: &str) -> io::Result<()> {
        writeln!(out, "# {TOOL_VERSION}")?;
        writeln!(out, "# command: {command}")?;
        writeln!(out, "# spec_digest: {digest}")?;
        for line in &self.header {
            writeln!(out, "# {line}")?;
        }
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        for line in &self.footer {
            writeln!(out, "# {line}")?;
        }
        Ok(())
    }

    pub fn to_string(&self, command: &str, digest: &str) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, command, digest).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }
}

/// A float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// An optional float; absent values are written as an empty field.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
