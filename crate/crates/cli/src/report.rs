//! Versioned JSON reports and their CSV mirror.

use std::io::Write;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Settings;

pub const SCHEMA: &str = "cf-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Infeasible,
    Violation,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, status: Status, result: impl Serialize) -> anyhow::Result<Self> {
        Ok(Self {
            command: command.into(),
            status,
            result: serde_json::to_value(result)?,
        })
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Ok => 0,
            Status::Infeasible | Status::Violation => 2,
        }
    }

    pub fn to_json(&self, s: &Settings) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status,
            "seed": s.seed,
            "window": s.window,
            "grid": s.grid,
            "tolerance": {
                "algebraic": s.tol.algebraic,
                "spectral": s.tol.spectral,
                "grid": s.tol.grid,
            },
            "result": self.result,
        })
    }

    pub fn emit(&self, s: &Settings) -> anyhow::Result<()> {
        let doc = self.to_json(s);
        let text = serde_json::to_string_pretty(&doc)?;
        match &s.out {
            Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
            None => {
                let mut out = std::io::stdout().lock();
                writeln!(out, "{text}")?;
            }
        }
        if let Some(p) = &s.csv {
            let mut w = csv::Writer::from_path(p).with_context(|| format!("writing {}", p.display()))?;
            w.write_record(["path", "value"])?;
            for (k, v) in flatten(&doc) {
                w.write_record([k, v])?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

/// Scalar leaves of a JSON document as `(dotted.path, value)` rows.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    walk(v, String::new(), &mut rows);
    rows
}

fn walk(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, join(k), rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, join(&i.to_string()), rows)),
        Value::String(s) => rows.push((path, s.clone())),
        Value::Null => rows.push((path, String::new())),
        other => rows.push((path, other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_paths() {
        let rows = flatten(&json!({"a": {"b": [1, 2.5]}, "s": "x", "n": null}));
        assert_eq!(
            rows,
            vec![
                ("a.b.0".into(), "1".into()),
                ("a.b.1".into(), "2.5".into()),
                ("n".into(), String::new()),
                ("s".into(), "x".into()),
            ]
        );
    }
}
