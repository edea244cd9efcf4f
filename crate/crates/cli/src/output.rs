//! Reading inputs and writing JSON reports and CSV tables.
//!
//! Reports are `{"config": …, "verdict": …, "report": …}`. CSV files start
//! with a `# config: …` comment line, then a header, then rows of numbers
//! printed with 17 significant digits.

use crate::config::RunConfig;
use crate::outcome::{Failure, Verdict};
use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Invalid)?;
    serde_json::from_str(&text)
        .with_context(|| format!("malformed JSON in {}", path.display()))
        .map_err(Failure::Invalid)
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    config: &'a RunConfig,
    verdict: &'static str,
    report: &'a R,
}

fn target(cfg: &RunConfig, stem: &str, ext: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(&cfg.out)
        .with_context(|| format!("cannot create output directory {}", cfg.out.display()))
        .map_err(Failure::Invalid)?;
    Ok(cfg.out.join(format!("{stem}.{ext}")))
}

fn write(path: &Path, text: String) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Invalid)
}

pub fn write_report<R: Serialize>(cfg: &RunConfig, stem: &str, verdict: Verdict, report: &R) -> Result<PathBuf, Failure> {
    let path = target(cfg, stem, "json")?;
    let env = Envelope { config: cfg, verdict: verdict.label(), report };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| Failure::Check(e.into()))?;
    text.push('\n');
    write(&path, text)?;
    Ok(path)
}

/// A numeric table with fixed columns.
pub struct Table {
    header: Vec<String>,
    body: String,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { header: columns.iter().map(|c| c.to_string()).collect(), body: String::new() }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        let cells: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(self.body, "{}", cells.join(","));
    }

    pub fn write(&self, cfg: &RunConfig, stem: &str) -> Result<PathBuf, Failure> {
        let path = target(cfg, stem, "csv")?;
        let config = serde_json::to_string(cfg).map_err(|e| Failure::Check(e.into()))?;
        write(&path, format!("# config: {config}\n{}\n{}", self.header.join(","), self.body))?;
        Ok(path)
    }
}
