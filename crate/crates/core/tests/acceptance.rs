use posetprod::suite::{run_suite, SuiteOptions};

#[test]
fn acceptance_criteria() {
    let results = run_suite(&SuiteOptions::default());
    for r in &results {
        println!(
            "criterion {:>2} {:<28} {} ({:.3} s)",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds
        );
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| (r.id, r.details.to_string())).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
