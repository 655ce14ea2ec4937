//! End-to-end acceptance run: executes every bundled verification check and
//! prints one PASS/FAIL line per check. Tolerances live next to the
//! assertions in the library's `verify` module.

use epsilon_lab::verify::run_all;

#[test]
fn all_bundled_checks_pass() {
    let results = run_all();
    assert_eq!(results.len(), 13);
    let mut failures = Vec::new();
    for r in &results {
        println!(
            "{} {:2} [{:6.2}s]  {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.elapsed.as_secs_f64(),
            r.name,
            r.details
        );
        if !r.passed {
            failures.push(r.id);
        }
    }
    assert!(
        failures.is_empty(),
        "failing checks: {failures:?} (see lines above)"
    );
}
