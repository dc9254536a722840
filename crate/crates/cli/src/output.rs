use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use emosc::config::format_system;
use emosc::{classify, PhysicalSystem};

use crate::error::CliError;

/// 17 significant digits; negative zero prints as zero.
pub fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// A CSV document with a `#`-prefixed header.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Self {
            text: format!("# emosc {command}\n"),
        }
    }

    pub fn system(mut self, s: &PhysicalSystem) -> Self {
        let _ = writeln!(self.text, "# configuration = {}", classify(s).name());
        for line in format_system(s).lines() {
            let _ = writeln!(self.text, "# {line}");
        }
        self
    }

    pub fn param(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        let _ = writeln!(self.text, "# {key} = {value}");
        self
    }

    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn columns(mut self, names: &[&str]) -> Self {
        self.text.push_str(&names.join(","));
        self.text.push('\n');
        self
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let cells: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        match out {
            Some(path) => std::fs::write(path, &self.text).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            }),
            None => std::io::stdout()
                .write_all(self.text.as_bytes())
                .map_err(|source| CliError::Write {
                    path: "stdout".into(),
                    source,
                }),
        }
    }
}
