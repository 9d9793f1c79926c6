//! Report plumbing: every command emits a JSON document embedding the
//! exact configuration it ran with and the crate version, so identical
//! configs produce byte-identical artifacts.

use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub results: Value,
    /// True iff every check the command declares passed.
    pub pass: bool,
}

impl Report {
    pub fn new(
        command: &str,
        config: impl Serialize,
        results: impl Serialize,
        pass: bool,
    ) -> Report {
        Report {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            results: serde_json::to_value(results).expect("results serialize"),
            pass,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "results": self.results,
            "pass": self.pass,
        })
    }

    /// Serialize to the given path, or stdout when no path is given.
    pub fn write(&self, out: Option<&Path>) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        match out {
            Some(p) => std::fs::write(p, text + "\n"),
            None => {
                let stdout = std::io::stdout();
                writeln!(stdout.lock(), "{text}")
            }
        }
    }
}

/// Write a CSV table with a header row; all formatting via Display so
/// output is deterministic.
pub fn write_csv<T: std::fmt::Display>(
    path: &Path,
    header: &[&str],
    rows: &[Vec<T>],
) -> std::io::Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_configs_give_identical_bytes() {
        let mk = || Report::new("demo", json!({"n": 3}), json!({"value": 1.25}), true);
        let a = serde_json::to_string_pretty(&mk().to_json()).unwrap();
        let b = serde_json::to_string_pretty(&mk().to_json()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"version\""));
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_csv(&p, &["n", "value"], &[vec![1.0, 2.5], vec![2.0, 3.5]]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text, "n,value\n1,2.5\n2,3.5\n");
    }
}
