//! Acceptance gate: runs every claim of the reproduction suite once,
//! single-threaded with timing on, and prints one line per criterion.
//! Exits nonzero if a claim fails or exceeds its runtime limit.

use std::process::ExitCode;

use numlab_cli::claims::{Check, Value};
use numlab_cli::{registry, run_reproduce, RunConfig};

fn show(v: &Value) -> String {
    match v {
        Value::Number(x) => format!("{x:.6e}"),
        Value::Bool(b) => b.to_string(),
    }
}

fn detail(c: &Check) -> String {
    format!(
        "{}: computed {} expected {} tol {:e}",
        c.name,
        show(&c.computed),
        show(&c.expected),
        c.tolerance
    )
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let mut results = match run_reproduce(&cfg, None) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance: suite did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    results.sort_by_key(|r| r.criterion);
    let mut ok = results.len() == registry().len();
    for r in &results {
        let runtime = r.runtime_s.unwrap_or(0.0);
        let in_budget = r.within_budget();
        let pass = r.pass && in_budget;
        ok &= pass;
        println!(
            "{} criterion {:>2} {:<24} computed {} expected {} tol {:e} runtime {:.3}s (limit {})",
            if pass { "PASS" } else { "FAIL" },
            r.criterion,
            r.id,
            show(&r.computed),
            show(&r.expected),
            r.tolerance,
            runtime,
            if r.runtime_limit_s.is_finite() {
                format!("{}s", r.runtime_limit_s)
            } else {
                "none".into()
            }
        );
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("     failed check {}", detail(c));
        }
        if !in_budget {
            println!("     over the runtime limit");
        }
    }
    let passed = results.iter().filter(|r| r.pass && r.within_budget()).count();
    println!("acceptance: {passed}/{} criteria passed", registry().len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
