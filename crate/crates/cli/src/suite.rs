//! Line-oriented manifests and JSON reports.
//!
//! A manifest line is whitespace-separated `key=value` tokens; values with
//! spaces go in double quotes. `id` and `op` are required, `expect` is
//! `pass`, `exploratory` or a literal value; every other key becomes the
//! `--key value` flag of the operation (`key=true` for a bare switch,
//! repeated keys for repeated flags). `#` starts a comment line.

use std::collections::HashSet;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::ops::{self, Op, Outcome};

pub const SCHEMA: &str = "psllab-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(no_binary_name = true)]
struct JobLine {
    #[command(subcommand)]
    op: Op,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expect {
    Pass,
    Exploratory,
    Value(String),
    Unspecified,
}

impl Expect {
    fn label(&self) -> String {
        match self {
            Expect::Pass => "pass".into(),
            Expect::Exploratory => "exploratory".into(),
            Expect::Value(v) => v.clone(),
            Expect::Unspecified => String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub id: String,
    pub op_name: String,
    pub args: Vec<(String, String)>,
    pub expect: Expect,
    pub op: Op,
}

#[derive(Debug)]
pub struct ManifestError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ManifestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "manifest line {}: {}", self.line, self.msg)
    }
}

fn tokens(line: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.peek().is_none() {
            return Ok(out);
        }
        let mut key = String::new();
        while let Some(&c) = chars.peek() {
            if c == '=' || c.is_whitespace() {
                break;
            }
            key.push(c);
            chars.next();
        }
        if chars.next() != Some('=') || key.is_empty() {
            return Err(format!("expected key=value, found `{key}`"));
        }
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => value.push(c),
                    None => return Err(format!("unterminated quote in `{key}`")),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                value.push(c);
                chars.next();
            }
        }
        out.push((key, value));
    }
}

fn parse_line(line_no: usize, line: &str) -> Result<Job, ManifestError> {
    let err = |msg: String| ManifestError { line: line_no, msg };
    let mut id = None;
    let mut op_name = None;
    let mut expect = Expect::Unspecified;
    let mut args = Vec::new();
    for (k, v) in tokens(line).map_err(err)? {
        match k.as_str() {
            "id" => id = Some(v),
            "op" => op_name = Some(v),
            "expect" => {
                expect = match v.as_str() {
                    "pass" => Expect::Pass,
                    "exploratory" => Expect::Exploratory,
                    _ => Expect::Value(v),
                }
            }
            _ => args.push((k, v)),
        }
    }
    let id = id.ok_or_else(|| err("missing id".into()))?;
    let op_name = op_name.ok_or_else(|| err("missing op".into()))?;
    let mut argv = vec![op_name.clone()];
    for (k, v) in &args {
        let flag = format!("--{}", k.replace('_', "-"));
        match v.as_str() {
            "true" => argv.push(flag),
            "false" => {}
            _ => {
                argv.push(flag);
                argv.push(v.clone());
            }
        }
    }
    let parsed = JobLine::try_parse_from(&argv).map_err(|e| {
        let msg = e.to_string();
        err(msg.lines().next().unwrap_or("invalid job").trim_start_matches("error: ").to_string())
    })?;
    Ok(Job { id, op_name, args, expect, op: parsed.op })
}

/// Parses and type-checks every job before any runs.
pub fn parse_manifest(text: &str) -> Result<Vec<Job>, ManifestError> {
    let mut jobs = Vec::new();
    let mut seen = HashSet::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let job = parse_line(k + 1, t)?;
        if !seen.insert(job.id.clone()) {
            return Err(ManifestError { line: k + 1, msg: format!("duplicate id `{}`", job.id) });
        }
        jobs.push(job);
    }
    Ok(jobs)
}

#[derive(Serialize, Debug, Clone)]
pub struct JobReport {
    pub id: String,
    pub op: String,
    pub args: serde_json::Map<String, Value>,
    pub expect: String,
    /// `pass`, `fail`, `exploratory-note` or `error`.
    pub status: String,
    pub counts_toward_exit: bool,
    pub value: Option<String>,
    pub note: Option<String>,
    pub error: Option<String>,
    pub detail: Value,
    pub cache_hits: u32,
    pub elapsed_ms: u64,
}

#[derive(Serialize, Debug, Clone, Default)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub exploratory: usize,
    pub cache_hits: u32,
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub code_version: &'static str,
    pub summary: Summary,
    pub jobs: Vec<JobReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let bad = self.jobs.iter().any(|j| j.counts_toward_exit && (j.status == "fail" || j.status == "error"));
        i32::from(bad)
    }
}

/// Judges an outcome against the job's expectation.
pub fn judge(id: &str, op: &str, args: &[(String, String)], expect: &Expect, result: psllab::error::Result<Outcome>, elapsed_ms: u64) -> JobReport {
    let mut arg_map = serde_json::Map::new();
    for (k, v) in args {
        match arg_map.get_mut(k) {
            Some(Value::Array(a)) => a.push(Value::String(v.clone())),
            Some(prev) => *prev = Value::Array(vec![prev.clone(), Value::String(v.clone())]),
            None => {
                arg_map.insert(k.clone(), Value::String(v.clone()));
            }
        }
    }
    let mut r = JobReport {
        id: id.to_string(),
        op: op.to_string(),
        args: arg_map,
        expect: expect.label(),
        status: String::new(),
        counts_toward_exit: *expect != Expect::Exploratory,
        value: None,
        note: None,
        error: None,
        detail: Value::Null,
        cache_hits: 0,
        elapsed_ms,
    };
    match result {
        Err(e) => {
            r.status = "error".into();
            r.error = Some(e.to_string());
        }
        Ok(o) => {
            let exploratory = o.exploratory || *expect == Expect::Exploratory;
            r.counts_toward_exit &= !o.exploratory;
            let ok = match expect {
                Expect::Value(v) => o.value == *v,
                _ => o.check != Some(false),
            };
            r.status = if exploratory {
                "exploratory-note"
            } else if ok {
                "pass"
            } else {
                "fail"
            }
            .into();
            if exploratory && !ok {
                r.note = Some(format!("finding: expectation not met; {}", o.note.as_deref().unwrap_or("exploratory")));
            } else {
                r.note = o.note;
            }
            r.value = Some(o.value);
            r.detail = o.detail;
            r.cache_hits = o.cache_hits;
        }
    }
    r
}

fn run_job(job: &Job) -> JobReport {
    let start = Instant::now();
    let result = ops::run(&job.op);
    judge(&job.id, &job.op_name, &job.args, &job.expect, result, start.elapsed().as_millis() as u64)
}

/// Runs jobs on up to `workers` threads; report order follows the manifest.
pub fn run_suite(jobs: &[Job], workers: Option<usize>) -> Report {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build().expect("thread pool");
    let reports: Vec<JobReport> = pool.install(|| jobs.par_iter().map(run_job).collect());
    let mut summary = Summary { total: reports.len(), ..Summary::default() };
    for r in &reports {
        match r.status.as_str() {
            "pass" => summary.pass += 1,
            "fail" => summary.fail += 1,
            "error" => summary.error += 1,
            _ => summary.exploratory += 1,
        }
        summary.cache_hits += r.cache_hits;
    }
    Report { schema: SCHEMA, schema_version: SCHEMA_VERSION, code_version: psllab::CODE_VERSION, summary, jobs: reports }
}
