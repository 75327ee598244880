//! Run reports with a stable line format and an equivalent JSON form.
//!
//! Plain output is `key = value` lines; every float is printed with 15
//! significant digits so runs can be diffed. JSON output carries the same
//! fields under `inputs` / `outputs` plus `timing_ms`.

use serde_json::{Map, Value};
use std::time::Instant;

/// 15 significant digits, exponent form; the one float format the CLI uses.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(x)).collect())
}

pub struct Report {
    command: &'static str,
    inputs: Vec<(String, Value)>,
    outputs: Vec<(String, Value)>,
    started: Instant,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.push((key.to_string(), value.into()));
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.push((key.to_string(), value.into()));
    }

    /// Prints the report and returns the elapsed milliseconds.
    pub fn finish(self, json: bool) -> u128 {
        let elapsed = self.started.elapsed().as_millis();
        if json {
            let mut root = Map::new();
            root.insert("command".into(), Value::from(self.command));
            root.insert("inputs".into(), section(self.inputs));
            root.insert("outputs".into(), section(self.outputs));
            root.insert("timing_ms".into(), Value::from(elapsed as u64));
            println!("{}", serde_json::to_string_pretty(&Value::Object(root)).expect("report is plain data"));
        } else {
            println!("command = {}", self.command);
            for (k, v) in &self.inputs {
                println!("in.{k} = {}", render(v));
            }
            for (k, v) in &self.outputs {
                println!("out.{k} = {}", render(v));
            }
            println!("elapsed_ms = {elapsed}");
        }
        elapsed
    }
}

fn section(fields: Vec<(String, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in fields {
        m.insert(k, v);
    }
    Value::Object(m)
}

fn render(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => fmt_f(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(render).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
