//! One line per acceptance criterion, then a single assertion over all of them.

use uipq_core::selftest::{run_one, NUM_CRITERIA};

#[test]
fn acceptance_suite() {
    let mut failed = Vec::new();
    for id in 1..=NUM_CRITERIA {
        let r = run_one(id);
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {:>2} {} ({:.1} s): {}", r.id, r.name, r.seconds, r.detail);
        if !r.pass {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
