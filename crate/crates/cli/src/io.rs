use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use genround::{MetricSpace, Tree};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::failure::{CmdResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Output {
    pub format: Format,
    pub path: Option<PathBuf>,
}

type CsvWriter = csv::Writer<Vec<u8>>;

impl Output {
    /// Writes `value` as pretty JSON, or runs `table` to produce CSV.
    pub fn emit<S: Serialize>(&self, value: &S, table: impl FnOnce(&mut CsvWriter) -> csv::Result<()>) -> CmdResult {
        let bytes = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(value)?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                table(&mut w)?;
                w.into_inner().map_err(|e| Failure::invalid(e.to_string()))?
            }
        };
        self.write(&bytes)
    }

    pub fn write(&self, bytes: &[u8]) -> CmdResult {
        match &self.path {
            Some(p) => fs::write(p, bytes)?,
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

/// Reads an argument that is inline JSON, `-` for stdin, or a file path.
pub fn read_json(arg: &str) -> CmdResult<Value> {
    let text = if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::invalid(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

pub fn parse<T: DeserializeOwned>(arg: &str) -> CmdResult<T> {
    Ok(serde_json::from_value(read_json(arg)?)?)
}

pub enum Input {
    Space(MetricSpace),
    Tree(Tree),
}

impl Input {
    pub fn into_space(self) -> CmdResult<MetricSpace> {
        match self {
            Input::Space(s) => Ok(s),
            Input::Tree(t) => Ok(t.to_metric()?),
        }
    }
}

/// Tree JSON has `vertices`, space JSON has `dist`.
pub fn read_input(arg: &str) -> CmdResult<Input> {
    let v = read_json(arg)?;
    if v.get("vertices").is_some() {
        Ok(Input::Tree(serde_json::from_value(v)?))
    } else if v.get("dist").is_some() {
        Ok(Input::Space(serde_json::from_value(v)?))
    } else {
        Err(Failure::invalid("expected a tree {vertices, edges} or a space {labels, dist}"))
    }
}

pub fn read_tree(arg: &str) -> CmdResult<Tree> {
    match read_input(arg)? {
        Input::Tree(t) => Ok(t),
        Input::Space(_) => Err(Failure::invalid("expected a tree {vertices, edges}")),
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
