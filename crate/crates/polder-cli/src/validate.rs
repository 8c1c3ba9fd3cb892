//! The `validate` verb: run the library's built-in invariant suite and
//! report every check by name. Needs no configuration — the suite carries
//! its own fixtures. Any failed check turns into a nonzero exit.

use serde::Serialize;

use polder::checks::{run_all, CheckResult};

use crate::Failure;

#[derive(Serialize)]
struct CheckLine<'a> {
    name: &'a str,
    passed: bool,
    measured: f64,
    threshold: f64,
    detail: &'a str,
}

fn print_text(results: &[CheckResult]) {
    for c in results {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {name}: measured={measured:.3e} threshold={threshold:.3e} — {detail}",
            name = c.name,
            measured = c.measured,
            threshold = c.threshold,
            detail = c.detail
        );
    }
}

fn print_json(results: &[CheckResult]) -> Result<(), Failure> {
    let lines: Vec<CheckLine> = results
        .iter()
        .map(|c| CheckLine {
            name: c.name,
            passed: c.passed,
            measured: c.measured,
            threshold: c.threshold,
            detail: &c.detail,
        })
        .collect();
    let body = serde_json::to_string_pretty(&lines)
        .map_err(|e| Failure::Input(format!("cannot serialize results: {e}")))?;
    println!("{body}");
    Ok(())
}

pub fn run(json: bool) -> Result<(), Failure> {
    let results = run_all();
    let failed = results.iter().filter(|c| !c.passed).count();
    if json {
        // The array carries every verdict; keep stdout pure JSON.
        print_json(&results)?;
    } else {
        print_text(&results);
        println!(
            "{} of {} checks passed",
            results.len() - failed,
            results.len()
        );
    }
    if failed > 0 {
        Err(Failure::ChecksFailed(failed))
    } else {
        Ok(())
    }
}
