//! Report rendering. Output depends only on the results: rows are sorted by
//! claim id and every float is printed with 12 significant digits.

use std::path::Path;

use numlab::io::write_text;
use numlab::Result;
use serde_json::Value as Json;

use crate::claims::{ClaimResult, Value};
use crate::config::Format;

pub const CSV_HEADER: &str = "claim_id,expected,computed,tol,pass,runtime";

/// `x` rounded to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

fn value(v: &Value) -> String {
    match v {
        Value::Number(x) => num(*x),
        Value::Bool(b) => b.to_string(),
    }
}

fn round_json(v: &mut Json) {
    match v {
        Json::Number(n) if !n.is_i64() && !n.is_u64() => {
            if let Some(r) = n.as_f64().map(sig12).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Json::Array(xs) => xs.iter_mut().for_each(round_json),
        Json::Object(m) => m.values_mut().for_each(round_json),
        _ => {}
    }
}

fn sorted(results: &[ClaimResult]) -> Vec<&ClaimResult> {
    let mut rows: Vec<&ClaimResult> = results.iter().collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    rows
}

fn json(results: &[ClaimResult]) -> Result<String> {
    let claims = sorted(results);
    let passed = claims.iter().filter(|r| r.pass).count();
    let mut doc = serde_json::json!({
        "passed": passed,
        "failed": claims.len() - passed,
        "claims": claims,
    });
    round_json(&mut doc);
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn csv(results: &[ClaimResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted(results) {
        let runtime = r.runtime_s.map(num).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.id,
            value(&r.expected),
            value(&r.computed),
            num(r.tolerance),
            r.pass,
            runtime
        ));
    }
    out
}

fn markdown(results: &[ClaimResult]) -> String {
    let mut out = String::from(
        "| claim | criterion | expected | computed | tol | pass | runtime (s) |\n|---|---|---|---|---|---|---|\n",
    );
    for r in sorted(results) {
        let runtime = r.runtime_s.map(num).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.id,
            r.criterion,
            value(&r.expected),
            value(&r.computed),
            num(r.tolerance),
            if r.pass { "pass" } else { "FAIL" },
            runtime
        ));
    }
    out
}

pub fn render(results: &[ClaimResult], format: Format) -> Result<String> {
    match format {
        Format::Json => json(results),
        Format::Csv => Ok(csv(results)),
        Format::Markdown => Ok(markdown(results)),
    }
}

/// Writes the rendered report to `path`, or to stdout without one.
pub fn emit_report(results: &[ClaimResult], format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(results, format)?;
    match path {
        Some(p) => write_text(p, &text),
        None => write_stdout(&text),
    }
}

/// Writes to stdout; a closed pipe (`numlab ... | head`) is not an error.
pub fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(numlab::Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}
