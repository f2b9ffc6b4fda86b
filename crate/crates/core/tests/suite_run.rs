use qlab_core::suite::{run_suite, Status, SuiteConfig};

#[test]
fn default_suite_has_no_failures() {
    let report = run_suite(&SuiteConfig::default()).unwrap();
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:#?}");
    for family in ["sweep/categories/q2/2", "sweep/categories/q3/2", "sweep/functors/q3/2", "sweep/preorders/4", "sweep/lattices/4"] {
        assert!(report.for_instance(family).any(|r| r.status == Status::Pass), "{family}");
    }
}

#[test]
fn suite_is_deterministic() {
    let config = SuiteConfig::files_only();
    assert_eq!(run_suite(&config).unwrap(), run_suite(&config).unwrap());
}
