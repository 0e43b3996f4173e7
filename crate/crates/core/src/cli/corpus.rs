//! Fixture corpus: `*.tdc` text files, one command per line followed by
//! expectations, e.g.
//!
//! ```text
//! # comment
//! qform witt "diag(1,-1)@QQ" => witt_index=1 kernel_dim=0
//! inv battery unitary --etale a=-1@QQ --phi "diag(1,1,1,-1)" => conditions.i=false exit=0
//! ```
//!
//! Keys are dotted paths looked up under `verdicts` first, then at the top
//! of the report; `exit` compares the exit code (default expectation
//! `exit=0`). Fixtures run in parallel and are merged in file/line order.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{error_kind, parse_command, run, Command, Outcome, Verb};
use crate::error::{Error, Result};

pub fn default_dir() -> PathBuf {
    let local = PathBuf::from("corpus");
    if local.is_dir() {
        local
    } else {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub file: String,
    pub line: usize,
    pub command: String,
    pub expect: Vec<(String, String)>,
}

/// Splits one fixture line into command text and `key=value` expectations.
pub fn parse_fixture_line(text: &str) -> Option<(String, Vec<(String, String)>)> {
    let t = text.trim();
    if t.is_empty() || t.starts_with('#') {
        return None;
    }
    let (cmd, exp) = match t.split_once("=>") {
        Some((c, e)) => (c.trim(), e.trim()),
        None => (t, ""),
    };
    let mut expect: Vec<(String, String)> = exp
        .split_whitespace()
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => (kv.to_string(), "true".to_string()),
        })
        .collect();
    if !expect.iter().any(|(k, _)| k == "exit") {
        expect.push(("exit".into(), "0".into()));
    }
    Some((cmd.to_string(), expect))
}

pub fn load(dir: &Path) -> Result<Vec<Fixture>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::InvalidField(format!("corpus directory {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tdc"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::InvalidField(format!("corpus file {}: {e}", path.display())))?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        for (i, line) in text.lines().enumerate() {
            if let Some((command, expect)) = parse_fixture_line(line) {
                out.push(Fixture { file: name.clone(), line: i + 1, command, expect });
            }
        }
    }
    Ok(out)
}

fn lookup<'a>(report: &'a Value, path: &str) -> Option<&'a Value> {
    let walk = |mut v: &'a Value| {
        for k in path.split('.') {
            v = match v {
                Value::Object(m) => m.get(k)?,
                Value::Array(a) => a.get(k.parse::<usize>().ok()?)?,
                _ => return None,
            };
        }
        Some(v)
    };
    report.get("verdicts").and_then(walk).or_else(|| walk(report))
}

fn matches(actual: &Value, expected: &str) -> bool {
    match serde_json::from_str::<Value>(expected) {
        Ok(v) => *actual == v || actual.as_str() == Some(expected),
        Err(_) => actual.as_str() == Some(expected),
    }
}

/// Applies the corpus-level seed and bounds where a fixture sets none.
fn inherit(mut cmd: Command, parent: &Command) -> Command {
    cmd.seed = cmd.seed.or(parent.seed);
    cmd.search_height = cmd.search_height.or(parent.search_height);
    cmd.search_degree = cmd.search_degree.or(parent.search_degree);
    cmd.verify |= parent.verify;
    cmd.out = None;
    cmd
}

fn run_fixture(fx: &Fixture, parent: &Command) -> Value {
    let outcome = match parse_command(&fx.command) {
        Ok(cmd) if matches!(cmd.verb, Verb::Corpus { .. }) => {
            Err(Error::UnsupportedVariant("nested corpus run".into()))
        }
        Ok(cmd) => Ok(run(&inherit(cmd, parent))),
        Err(e) => Err(e),
    };
    let (code, report) = match outcome {
        Ok(Outcome { code, report }) => (code, report),
        Err(e) => (2, json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } })),
    };
    let mut mismatches = Vec::new();
    for (k, v) in &fx.expect {
        let ok = if k == "exit" {
            v.parse::<i32>().ok() == Some(code)
        } else {
            lookup(&report, k).is_some_and(|a| matches(a, v))
        };
        if !ok {
            let got = if k == "exit" { json!(code) } else { lookup(&report, k).cloned().unwrap_or(Value::Null) };
            mismatches.push(json!({ "key": k, "expected": v, "actual": got }));
        }
    }
    if report.get("verification").is_some_and(|v| v["agrees"] == false) {
        mismatches.push(json!({ "key": "verification", "expected": true, "actual": false }));
    }
    json!({
        "file": fx.file,
        "line": fx.line,
        "command": fx.command,
        "exit": code,
        "verdicts": report.get("verdicts").cloned().unwrap_or(Value::Null),
        "error": report.get("error").cloned().unwrap_or(Value::Null),
        "passed": mismatches.is_empty(),
        "mismatches": mismatches,
    })
}

/// Runs every fixture; rows come back in file/line order.
pub fn run_fixtures(fixtures: &[Fixture], parent: &Command) -> Vec<Value> {
    fixtures.par_iter().map(|fx| run_fixture(fx, parent)).collect()
}

pub fn run_corpus_command(cmd: &Command, dir: Option<PathBuf>) -> Outcome {
    let bounds = cmd.bounds();
    let dir = dir.unwrap_or_else(default_dir);
    let mut top = Map::new();
    top.insert("command".into(), json!("corpus"));
    top.insert("oracle_bounds".into(), serde_json::to_value(bounds).expect("serializable"));
    top.insert("seed".into(), json!(bounds.seed));
    let fixtures = match load(&dir) {
        Ok(f) => f,
        Err(e) => {
            top.insert("inputs_echo".into(), json!([]));
            top.insert("verdicts".into(), json!({}));
            top.insert("certificates".into(), json!({}));
            top.insert("error".into(), json!({ "kind": error_kind(&e), "message": e.to_string() }));
            return Outcome { code: 2, report: Value::Object(top) };
        }
    };
    let mut files: Vec<String> = fixtures.iter().map(|f| f.file.clone()).collect();
    files.dedup();
    let rows = run_fixtures(&fixtures, cmd);
    let passed = rows.iter().filter(|r| r["passed"] == true).count();
    let undecided = rows.iter().filter(|r| r["exit"] == 1).count();
    top.insert("inputs_echo".into(), json!(files));
    top.insert(
        "verdicts".into(),
        json!({ "fixtures": rows.len(), "passed": passed, "failed": rows.len() - passed, "undecided_expected_or_not": undecided }),
    );
    top.insert("certificates".into(), json!({ "table": rows }));
    let code = if passed == rows.len() { 0 } else { 1 };
    Outcome { code, report: Value::Object(top) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_lines() {
        assert_eq!(parse_fixture_line("  # note"), None);
        let (c, e) = parse_fixture_line(r#"qform witt "diag(1,-1)@QQ" => witt_index=1 exit=0"#).unwrap();
        assert_eq!(c, r#"qform witt "diag(1,-1)@QQ""#);
        assert_eq!(e, vec![("witt_index".into(), "1".into()), ("exit".into(), "0".into())]);
        let (_, e) = parse_fixture_line("alg split \"etale(split)@GF(3)\"").unwrap();
        assert_eq!(e, vec![("exit".into(), "0".into())]);
    }

    #[test]
    fn dotted_lookup() {
        let r = json!({ "verdicts": { "conditions": { "i": true } }, "degree": 8 });
        assert!(matches(lookup(&r, "conditions.i").unwrap(), "true"));
        assert!(matches(lookup(&r, "degree").unwrap(), "8"));
        assert!(lookup(&r, "nope").is_none());
    }
}
