//! Replays acceptance criteria 1–12 and prints one PASS/FAIL line each.

use std::io::Write;

use qlw_core::reproduce::{run, CRITERIA};

#[test]
fn acceptance_criteria() {
    // Written to the stdout handle so the lines survive libtest capture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    writeln!(out).unwrap();
    for c in &CRITERIA {
        let outcome = run(c);
        writeln!(out, "{outcome}").unwrap();
        for line in &outcome.witness {
            writeln!(out, "    {line}").unwrap();
        }
        if !outcome.pass {
            failed.push(outcome.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
