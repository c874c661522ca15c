//! Command-line front end: argument parsing, dispatch and reports.
//!
//! Every run yields a human summary and a machine report (JSON, schema in
//! `docs/report-schema.md`). The machine report depends only on the inputs,
//! the order and the seed.

pub mod args;
pub mod commands;
pub mod report;

use std::time::Instant;

use clap::Parser;
use equising::Error;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub use args::{Cli, Command, Common};

pub const SCHEMA: &str = "equising-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub human: String,
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    /// The machine report as printed: pretty JSON with a final newline.
    pub fn report_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// SHA-256 over the command, the declared variables and the named inputs.
pub fn input_hash(cli: &Cli) -> String {
    let mut h = Sha256::new();
    let c = &cli.common;
    h.update(format!("command={}\n", cli.command.name()));
    h.update(format!("vars={}\nparams={}\ntruncated={}\n", c.vars.join(","), c.params.join(","), c.truncated));
    for (k, v) in cli.command.inputs() {
        h.update(format!("{k}={v}\n"));
    }
    hex::encode(h.finalize())
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Context(_) => "context",
        Error::UnknownVariable(_) | Error::UnknownVariableAt { .. } => "unknown-variable",
        Error::NotAUnit => "not-a-unit",
        Error::SubstitutionDivergence(_) => "substitution-divergence",
        Error::NotRegular(_) => "not-regular",
        Error::NoRegularDirection { .. } => "no-regular-direction",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::DegreeCap { .. } => "degree-cap",
        Error::Inconclusive { .. } => "inconclusive",
        Error::NotASolution(_) => "not-a-solution",
        Error::Precondition(_) => "precondition",
        Error::LemmaViolation(_) => "lemma-violation",
        Error::Internal(_) => "internal",
        Error::Syntax { .. } => "syntax",
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let outcome = commands::execute(&cli.command, &cli.common);
    let elapsed = start.elapsed();
    let c = &cli.common;
    let inputs: Map<String, Value> =
        cli.command.inputs().into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
    let (status, exit_code, changes, result, error, mut human) = match outcome {
        Ok(body) => {
            let (status, code) = if body.inconclusive { ("inconclusive", EXIT_INCONCLUSIVE) } else { ("ok", EXIT_OK) };
            (status, code, body.changes, body.result, Value::Null, body.human)
        }
        Err(e) => {
            let status = if matches!(e, Error::Inconclusive { .. }) { "inconclusive" } else { "error" };
            let err = json!({ "kind": error_kind(&e), "message": e.to_string() });
            (status, e.exit_code(), Vec::new(), Value::Null, err, vec![format!("error: {e}")])
        }
    };
    let report = json!({
        "schema": SCHEMA,
        "command": cli.command.name(),
        "inputs": inputs,
        "vars": c.vars,
        "params": c.params,
        "truncated": c.truncated,
        "input_sha256": input_hash(cli),
        "order": c.order,
        "seed": c.seed,
        "status": status,
        "exit_code": exit_code,
        "changes": changes,
        "result": result,
        "error": error,
    });
    human.insert(0, format!("{} [{}] N = {}, seed = {}", cli.command.name(), status, c.order, c.seed));
    human.push(format!("time: {:.3} ms", elapsed.as_secs_f64() * 1e3));
    let mut text = human.join("\n");
    text.push('\n');
    Outcome { human: text, report, exit_code }
}

/// Parses `argv` (program name first) and runs it. Usage errors come back
/// as clap errors.
pub fn run_args<I, T>(argv: I) -> Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Ok(run(&Cli::try_parse_from(argv)?))
}

/// Command line encoded by a corpus file.
///
/// ```text
/// # command: check-family
/// # flags: --params t --slices 0,1/7
/// x2^2 - x1^3 - t*x1^2
/// ```
///
/// Other `#` lines are comments. Each remaining nonblank line is either a
/// positional expression or `key = value`, read as `--key value`.
pub fn fixture_args(text: &str) -> Vec<String> {
    let mut command = Vec::new();
    let mut flags = Vec::new();
    let mut rest = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if let Some(v) = c.strip_prefix("command:") {
                command.extend(v.split_whitespace().map(String::from));
            } else if let Some(v) = c.strip_prefix("flags:") {
                flags.extend(v.split_whitespace().map(String::from));
            }
        } else if let Some((k, v)) = line.split_once('=') {
            rest.push(format!("--{}", k.trim()));
            rest.push(v.trim().to_string());
        } else {
            rest.push(line.to_string());
        }
    }
    let mut argv = vec!["equising".to_string()];
    argv.extend(command);
    argv.extend(rest);
    argv.extend(flags);
    argv
}
