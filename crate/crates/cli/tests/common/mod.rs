//! Shared helpers: running the binary, schema validation and fixture replay.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixtures_dir() -> PathBuf {
    root().join("fixtures")
}

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pseudorank"));
    cmd.env_remove("PSEUDORANK_FORMAT");
    cmd
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

pub fn run(args: &[&str]) -> Output {
    run_in(&fixtures_dir(), args)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs with `--format json`, asserts success and parses stdout.
pub fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = root().join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

/// Schema violations of `instance`, formatted one per line.
pub fn violations(name: &str, instance: &Value) -> Vec<String> {
    schema(name)
        .iter_errors(instance)
        .map(|e| format!("{}: {}", e.instance_path(), e))
        .collect()
}

pub struct Manifest {
    pub default_tolerance: f64,
    pub ignore: Vec<String>,
    pub fixtures: Vec<Fixture>,
}

pub struct Fixture {
    pub name: String,
    pub origin: String,
    pub args: Vec<String>,
    pub tolerances: Vec<(Vec<String>, f64)>,
    pub expected: Value,
}

pub fn manifest() -> Manifest {
    let text = std::fs::read_to_string(fixtures_dir().join("manifest.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let strings = |x: &Value| -> Vec<String> {
        x.as_array()
            .map(|a| a.iter().map(|s| s.as_str().unwrap().to_string()).collect())
            .unwrap_or_default()
    };
    let fixtures = v["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| Fixture {
            name: f["name"].as_str().unwrap().to_string(),
            origin: f["origin"].as_str().unwrap().to_string(),
            args: strings(&f["args"]),
            tolerances: f["tolerances"]
                .as_object()
                .map(|m| {
                    m.iter()
                        .map(|(k, t)| (segments(k), t.as_f64().unwrap()))
                        .collect()
                })
                .unwrap_or_default(),
            expected: f["expected"].clone(),
        })
        .collect();
    Manifest {
        default_tolerance: v["default_tolerance"].as_f64().unwrap(),
        ignore: strings(&v["ignore"]),
        fixtures,
    }
}

fn segments(pointer: &str) -> Vec<String> {
    pointer.split('/').skip(1).map(str::to_string).collect()
}

impl Fixture {
    fn tolerance(&self, path: &[String], default: f64) -> f64 {
        self.tolerances
            .iter()
            .filter(|(pat, _)| {
                pat.len() <= path.len() && pat.iter().zip(path).all(|(p, s)| p == "*" || p == s)
            })
            .max_by_key(|(pat, _)| pat.len())
            .map_or(default, |(_, t)| *t)
    }

    /// Runs the fixture and returns every mismatch against `expected`.
    pub fn replay(&self, m: &Manifest) -> Vec<String> {
        let mut args = vec!["--format".to_string(), "json".to_string()];
        args.extend(self.args.iter().cloned());
        let o = bin()
            .current_dir(fixtures_dir())
            .args(&args)
            .output()
            .expect("binary runs");
        if !o.status.success() {
            return vec![format!("exit {:?}: {}", o.status.code(), stderr(&o))];
        }
        let got: Value = match serde_json::from_slice(&o.stdout) {
            Ok(v) => v,
            Err(e) => return vec![format!("output is not JSON: {e}")],
        };
        let mut errs = Vec::new();
        self.compare(m, &self.expected, &got, &mut Vec::new(), &mut errs);
        errs
    }

    fn compare(
        &self,
        m: &Manifest,
        want: &Value,
        got: &Value,
        path: &mut Vec<String>,
        errs: &mut Vec<String>,
    ) {
        let pointer = format!("/{}", path.join("/"));
        if m.ignore.contains(&pointer) {
            return;
        }
        match (want, got) {
            (Value::Object(w), Value::Object(g)) => {
                for (k, wv) in w {
                    path.push(k.clone());
                    match g.get(k) {
                        Some(gv) => self.compare(m, wv, gv, path, errs),
                        None => errs.push(format!("/{}: missing", path.join("/"))),
                    }
                    path.pop();
                }
            }
            (Value::Array(w), Value::Array(g)) => {
                if w.len() > g.len() {
                    errs.push(format!("{pointer}: expected at least {} items, got {}", w.len(), g.len()));
                    return;
                }
                for (i, (wv, gv)) in w.iter().zip(g).enumerate() {
                    path.push(i.to_string());
                    self.compare(m, wv, gv, path, errs);
                    path.pop();
                }
            }
            (Value::Number(w), Value::Number(g)) => {
                let (w, g) = (w.as_f64().unwrap(), g.as_f64().unwrap());
                let tol = self.tolerance(path, m.default_tolerance);
                if (w - g).abs() > tol {
                    errs.push(format!("{pointer}: expected {w} ± {tol}, got {g}"));
                }
            }
            (w, g) if w == g => {}
            (w, g) => errs.push(format!("{pointer}: expected {w}, got {g}")),
        }
    }
}
