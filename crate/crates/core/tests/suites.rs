use gleafkit::suite::{run_suite, Instance, Mode, SuiteConfig};

fn small(instance: Instance, mode: Mode) -> SuiteConfig {
    let dims = if instance == Instance::Relational { 1 } else { 2 };
    SuiteConfig::new(instance, mode).with_dims(dims).with_samples(60).with_seed(3)
}

#[test]
fn every_instance_passes_at_small_sizes() {
    for instance in [Instance::Nerve, Instance::Spans, Instance::Metric, Instance::Probability, Instance::Relational, Instance::Topology] {
        for mode in [Mode::Compository, Mode::Gleaf] {
            let supported = match mode {
                Mode::Compository => instance.has_compository(),
                _ => instance.has_gleaf(),
            };
            if !supported {
                assert!(run_suite(&small(instance, mode)).is_err(), "{instance} should reject {mode:?}");
                continue;
            }
            let report = run_suite(&small(instance, mode)).unwrap();
            assert!(report.samples > 0, "{instance} {mode:?} checked nothing");
            assert!(report.passed(), "{instance} {mode:?}: {:?}", report.reports.iter().find(|r| !r.passed()));
        }
    }
}

#[test]
fn broken_composition_is_caught() {
    let report = run_suite(&small(Instance::Broken, Mode::Compository)).unwrap();
    assert!(!report.passed());
    let failed: Vec<&str> = report.reports.iter().filter(|r| !r.passed()).map(|r| r.axiom.as_str()).collect();
    assert!(failed.contains(&"back_and_forth"), "{failed:?}");
}

#[test]
fn facenot_separates_nerves_from_metrics() {
    let nerve = run_suite(&small(Instance::Nerve, Mode::Compository)).unwrap();
    assert!(nerve.facenot.iter().all(|(_, s)| s.cases > 0 && s.violations == 0));
    let metric = run_suite(&small(Instance::Metric, Mode::Compository).with_samples(300)).unwrap();
    assert!(metric.facenot.iter().any(|(_, s)| s.violations > 0));
    assert!(metric.passed());
}

#[test]
fn configs_are_validated() {
    assert!(run_suite(&SuiteConfig::new(Instance::Spans, Mode::Compository).with_dims(9)).is_err());
    assert!(run_suite(&SuiteConfig::new(Instance::Metric, Mode::Compository).with_samples(0)).is_err());
    assert!("nerves".parse::<Instance>().is_err());
    let parsed: SuiteConfig = serde_json::from_str(r#"{"instance": "topology", "mode": "gleaf", "dims": 1}"#).unwrap();
    assert_eq!(parsed.instance, Instance::Topology);
    assert!(serde_json::from_str::<SuiteConfig>(r#"{"instance": "topology", "colour": 1}"#).is_err());
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let cfg = small(Instance::Probability, Mode::Both);
    let (a, b) = (run_suite(&cfg).unwrap(), run_suite(&cfg).unwrap());
    assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
}
