//! Line-oriented regression corpus: `name | status | input | expected [| note]`.
//!
//! `input` is `strands : braid word` (the closure, orientation forgotten) or
//! `pd:FILE` relative to the corpus file; `-` for pending rows.

use std::path::Path;

use serde::Serialize;
use tielink::{Poly, VarSet};

use crate::input::Input;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Identified,
    Pending,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub line: usize,
    pub name: String,
    pub status: Status,
    pub input: Option<String>,
    pub expected: Poly,
    pub note: Option<String>,
}

pub fn parse(text: &str) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split(" | ").map(str::trim).collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(CliError::Parse(format!("line {line}: expected 4 or 5 fields separated by ` | `")));
        }
        let status = match fields[1] {
            "identified" => Status::Identified,
            "pending" => Status::Pending,
            s => return Err(CliError::Parse(format!("line {line}: unknown status `{s}`"))),
        };
        let input = (fields[2] != "-").then(|| fields[2].to_string());
        if status == Status::Identified && input.is_none() {
            return Err(CliError::Parse(format!("line {line}: identified row without input")));
        }
        let expected = Poly::parse(fields[3], &VarSet::azx()).map_err(|e| CliError::Parse(format!("line {line}: {e}")))?;
        rows.push(Row {
            line,
            name: fields[0].to_string(),
            status,
            input,
            expected,
            note: fields.get(4).map(|s| s.to_string()),
        });
    }
    Ok(rows)
}

impl Row {
    pub fn input(&self, base: &Path) -> Result<Input, CliError> {
        let spec = self.input.as_deref().expect("identified rows have input");
        let resolved = match spec.strip_prefix("pd:") {
            Some(p) => format!("pd:{}", base.join(p.trim()).display()),
            None => spec.to_string(),
        };
        Input::from_spec(&resolved).map_err(|e| CliError::Parse(format!("line {}: {e}", self.line)))
    }
}
