//! CSV output helpers: buffered writing to a file or stdout with a fixed
//! float format (17 significant digits, round-trip exact).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};

pub enum OutputTarget {
    File(BufWriter<File>),
    Stdout(std::io::Stdout),
}

impl OutputTarget {
    pub fn open(path: &Option<PathBuf>) -> Result<Self> {
        Ok(match path {
            Some(p) => OutputTarget::File(BufWriter::new(
                File::create(p).with_context(|| format!("--out: create {}", p.display()))?,
            )),
            None => OutputTarget::Stdout(std::io::stdout()),
        })
    }

    pub fn line(&mut self, text: &str) -> Result<()> {
        match self {
            OutputTarget::File(w) => writeln!(w, "{text}")?,
            OutputTarget::Stdout(w) => writeln!(w, "{text}")?,
        }
        Ok(())
    }

    pub fn finish(&mut self) -> Result<()> {
        match self {
            OutputTarget::File(w) => w.flush()?,
            OutputTarget::Stdout(w) => w.flush()?,
        }
        Ok(())
    }
}

/// 17 significant digits in scientific notation; parses back exactly.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Quote a CSV field when it contains a comma or quote.
pub fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
