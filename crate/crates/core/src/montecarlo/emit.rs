//! JSON and CSV output. Neither format contains wall-clock data, so equal
//! configs give byte-identical files.
//!
//! JSON: one object with `schema_version`, `config`, `aggregate` and `comparison`.
//!
//! CSV: header [`CSV_HEADER`], then one row per value:
//!
//! | section     | name             | key                                   | value |
//! |-------------|------------------|---------------------------------------|-------|
//! | `config`    | field name       | empty                                 | field value |
//! | `histogram` | statistic        | support point                         | count |
//! | `event`     | event            | `hits` or `total`                     | count |
//! | `check`     | check name       | `predicted`, `empirical`, `metric`, `statistic`, `samples`, `verdict` | value |
//! | `note`      | index            | empty                                 | text  |

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::{ExperimentResult, SCHEMA_VERSION};

pub const CSV_HEADER: [&str; 7] = ["schema_version", "preset", "seed", "section", "name", "key", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format {s:?} (expected csv or json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Consistency(format!("serialize: {e}")))
}

pub fn emit_json(res: &ExperimentResult, out: &mut impl Write) -> Result<()> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "config": to_value(&res.config)?,
        "aggregate": to_value(&res.aggregate)?,
        "comparison": to_value(&res.report)?,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}

/// One CSV row without the leading columns shared by every row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub schema_version: u32,
    pub preset: String,
    pub seed: u64,
    pub section: String,
    pub name: String,
    pub key: String,
    pub value: String,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let name = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&name, x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_rows(res: &ExperimentResult) -> Result<Vec<CsvRow>> {
    let preset = res.config.preset.to_string();
    let seed = res.config.seed;
    let mut rows = Vec::new();
    let mut push = |section: &str, name: &str, key: &str, value: String| {
        rows.push(CsvRow {
            schema_version: SCHEMA_VERSION,
            preset: preset.clone(),
            seed,
            section: section.into(),
            name: name.into(),
            key: key.into(),
            value,
        })
    };
    let mut cfg = Vec::new();
    flatten("", &to_value(&res.config)?, &mut cfg);
    for (k, v) in cfg {
        push("config", &k, "", v);
    }
    for (name, h) in &res.aggregate.histograms {
        for (k, c) in h {
            push("histogram", name, &k.to_string(), c.to_string());
        }
    }
    for (name, e) in &res.aggregate.events {
        push("event", name, "hits", e.hits.to_string());
        push("event", name, "total", e.total.to_string());
    }
    for c in &res.report.checks {
        push("check", &c.name, "predicted", opt(c.predicted));
        push("check", &c.name, "empirical", opt(c.empirical));
        push("check", &c.name, "metric", c.metric.to_string());
        push("check", &c.name, "statistic", c.statistic.to_string());
        push("check", &c.name, "samples", c.samples.map(|s| s.to_string()).unwrap_or_default());
        push("check", &c.name, "verdict", scalar(&to_value(&c.verdict)?));
    }
    for (i, n) in res.report.notes.iter().enumerate() {
        push("note", &i.to_string(), "", n.clone());
    }
    Ok(rows)
}

pub fn emit_csv(res: &ExperimentResult, out: &mut impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in csv_rows(res)? {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("csv: {other:?}")),
    }
}

/// Reads rows written by [`emit_csv`], checking the header.
pub fn parse_csv(input: impl Read) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse(format!("unexpected csv header {header:?}")));
    }
    r.deserialize().map(|x| x.map_err(csv_err)).collect()
}

/// Writes `res` to `path` in the given format.
pub fn emit(res: &ExperimentResult, format: OutputFormat, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        OutputFormat::Csv => emit_csv(res, &mut w)?,
        OutputFormat::Json => emit_json(res, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{run_experiment, ExperimentConfig, Preset};

    fn tiny() -> ExperimentResult {
        let mut c = ExperimentConfig::for_preset(Preset::E1);
        c.n = 3;
        c.m = Some(3);
        c.trials = 200;
        c.seed = 11;
        run_experiment(&c).unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let res = tiny();
        let mut buf = Vec::new();
        emit_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let rows = parse_csv(&buf[..]).unwrap();
        assert_eq!(rows, csv_rows(&res).unwrap());
        let total: u64 = rows
            .iter()
            .filter(|r| r.section == "histogram" && r.name == "corank")
            .map(|r| r.value.parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 200);
    }

    #[test]
    fn json_has_seed_and_version() {
        let res = tiny();
        let mut buf = Vec::new();
        emit_json(&res, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["config"]["seed"], 11);
        assert_eq!(v["comparison"]["seed"], 11);
        assert!(v.get("runtime").is_none());
        let mut again = Vec::new();
        emit_json(&tiny(), &mut again).unwrap();
        assert_eq!(buf, again);
    }
}
