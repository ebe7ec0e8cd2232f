//! Rendering helpers. Every number goes through `sig9`/`round_sig9`, so TSV
//! and JSON output parse back to identical values.

use std::io::{self, Write};

use embcanon::format::{round_sig9, sig9};
use serde::Serialize;

/// Tab-separated writer with a single header line.
pub struct Tsv<W> {
    out: W,
    width: usize,
}

impl<W: Write> Tsv<W> {
    pub fn new(mut out: W, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "{}", header.join("\t"))?;
        Ok(Self {
            out,
            width: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        debug_assert_eq!(fields.len(), self.width);
        writeln!(self.out, "{}", fields.join("\t"))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

pub fn num(x: f64) -> String {
    sig9(x)
}

/// Serializes an f64 as its 9-significant-digit value.
pub fn ser_sig9<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig9(*x))
}

pub fn json<W: Write, T: Serialize>(mut out: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

/// Escapes characters that would break a markdown table cell.
pub fn md_cell(s: &str) -> String {
    s.replace('\\', "\\\\").replace('|', "\\|")
}
