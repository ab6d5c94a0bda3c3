use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::CliError;

pub const OUT_DIR_ENV: &str = "DIFFNORM_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }

    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One command's result: a table plus metadata, serialized as CSV with `#` lines or JSON.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// Extra JSON-only payload.
    pub detail: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, config: Value, columns: Vec<&'static str>) -> Self {
        Report { command, config, meta: vec![], columns, rows: vec![], detail: None }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# config: {}\n", self.config));
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert(c.to_string(), v.clone());
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        top.insert("config".into(), self.config.clone());
        top.insert("meta".into(), Value::Object(self.meta.iter().cloned().collect()));
        top.insert("records".into(), Value::Array(records));
        if let Some(d) = &self.detail {
            top.insert("detail".into(), d.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json rendering");
        s.push('\n');
        s
    }

    /// Writes to `out`, else to `$DIFFNORM_OUT_DIR/<command>.<ext>`, else to stdout.
    pub fn emit(&self, format: Format, out: Option<PathBuf>) -> Result<(), CliError> {
        let text = self.render(format);
        let path = out.or_else(|| {
            std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{}.{}", self.command, format.ext())))
        });
        match path {
            Some(p) => {
                if let Some(parent) = p.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
                    }
                }
                fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
            }
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => quote(s),
        other => quote(&other.to_string()),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON number for finite values, string otherwise ("inf", "nan").
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}
