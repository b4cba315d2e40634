//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use axiblow::verify::run_checks;

fn main() {
    let results = run_checks(None);
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let kind = if r.primary { "criterion" } else { "report" };
        println!("{status} {kind} {} {}: {}", r.id, r.name, r.detail);
        if r.primary && !r.passed {
            failed += 1;
        }
    }
    let total = results.iter().filter(|r| r.primary).count();
    println!("acceptance: {} of {total} criteria pass", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
