//! The acceptance gate: runs every criterion of the suite and prints one
//! pass/fail line per criterion.  Run with `--nocapture` to see the lines
//! even on success.

use logbar::suite::run_all;

#[test]
fn acceptance() {
    let results = run_all(true);
    let mut all = true;
    for r in &results {
        println!("{}", r.line());
        all &= r.pass;
    }
    assert!(all, "acceptance criteria failed; see lines above");
}
