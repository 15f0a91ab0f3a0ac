use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

/// Buffered stdout or file.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Command name, seed and parameters echoed at the top of every artifact.
pub struct Header {
    pub command: &'static str,
    pub seed: u64,
    pub params: Vec<(&'static str, String)>,
}

impl Header {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Header { command, seed, params: Vec::new() }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.params.push((key, value.to_string()));
        self
    }

    /// `# seed=<seed> command=<name> key=value ...`
    pub fn csv_line(&self) -> String {
        let mut s = format!("# seed={} command={}", self.seed, self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }

    pub fn json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("seed".into(), Value::from(self.seed));
        m.insert("command".into(), Value::from(self.command));
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), Value::from(v.clone()))).collect();
        m.insert("params".into(), Value::Object(params));
        m
    }
}

/// Parses a header line back into `(key, value)` pairs.
pub fn parse_header(line: &str) -> Vec<(String, String)> {
    line.trim_start_matches('#')
        .split_whitespace()
        .filter_map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

pub fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
