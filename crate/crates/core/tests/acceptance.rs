use std::io::Write;

use swe_fronts::validate;

#[test]
fn acceptance_criteria() {
    let reports = validate::run_all();
    // the raw handle is not captured by the test harness
    let mut err = std::io::stderr().lock();
    for r in &reports {
        writeln!(err, "{}", r.line()).unwrap();
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(reports.len(), 12);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
