use bessel_turan::catalog::Catalog;
use bessel_turan::verify::{run, CheckStatus, GridSpec, Scale, Suite, VerifyConfig, VerifyError};

fn small_grid() -> GridSpec {
    GridSpec::new(vec![-0.5, 0.0, 0.5, 1.0, 3.0], GridSpec::log_points(1e-3, 100.0, 30), Scale::Logarithmic).unwrap()
}

fn config(suite: Suite) -> VerifyConfig {
    VerifyConfig { suite, grid: small_grid(), random_pairs: 100, reproducible: true, ..VerifyConfig::default() }
}

#[test]
fn reproducible_reports_are_identical() {
    let a = run(&config(Suite::Validity)).to_json();
    let b = run(&config(Suite::Validity)).to_json();
    assert_eq!(a, b);
    assert!(a.contains("\"generated_at\": \"1970-01-01T00:00:00Z\""));
}

#[test]
fn schema_fields_present() {
    let r = run(&config(Suite::Consistency));
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for key in ["suite", "generated_at", "seed", "checks", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let c = &v["checks"][0];
    for key in ["check_id", "status", "tolerance", "max_violation", "witnesses", "runtime_ms"] {
        assert!(c.get(key).is_some(), "{key}");
    }
    for key in ["pass", "fail", "info"] {
        assert!(v["summary"].get(key).is_some(), "{key}");
    }
    assert_eq!(v["suite"], "consistency");
}

#[test]
fn genuine_catalog_passes_validity() {
    let r = run(&config(Suite::Validity));
    assert!(r.passed(), "{:?}", r.checks.iter().find(|c| !c.passed()));
    assert_eq!(r.summary.fail, 0);
}

#[test]
fn corrupted_entry_is_caught() {
    let mut c = config(Suite::Validity);
    c.catalog = Catalog::standard().with_corruption("turan16_upper", 0.5).unwrap();
    let r = run(&c);
    assert!(!r.passed());
    let rec = r.check("validity/turan16_upper").unwrap();
    assert_eq!(rec.status, CheckStatus::Fail);
    assert!(!rec.witnesses.is_empty());
    assert!(rec.witnesses.iter().all(|w| w.margin > 0.0));
    assert!(rec.witnesses.windows(2).all(|w| (w[0].nu, w[0].x) <= (w[1].nu, w[1].x)));
}

#[test]
fn seed_changes_keep_the_pattern() {
    let pattern = |seed| {
        let mut c = config(Suite::Applications);
        c.seed = seed;
        let r = run(&c);
        assert_eq!(r.seed, seed);
        r.checks.iter().map(|c| (c.check_id.clone(), c.status)).collect::<Vec<_>>()
    };
    assert_eq!(pattern(1), pattern(99));
}

#[test]
fn conjectures_are_informational() {
    let r = run(&config(Suite::Conjectures));
    assert!(r.passed());
    assert_eq!(r.summary.pass + r.summary.fail, 0);
    assert!(r.summary.info > 0);
    let joshi = r.check("refutation/joshi_turan7").unwrap();
    assert!(!joshi.witnesses.is_empty());
}

#[test]
fn empty_grid_is_rejected() {
    assert_eq!(
        GridSpec::new(vec![], vec![1.0], Scale::Linear).unwrap_err(),
        VerifyError::EmptyGrid("orders")
    );
}

#[test]
fn sharpness_suite_reports_known_slow_decay() {
    let r = run(&config(Suite::Sharpness));
    for id in ["sharpness/turan11_upper@nu=1", "sharpness/turan24_upper@nu=2", "sharpness/turan20_lower@nu=2"] {
        assert_eq!(r.check(id).unwrap().status, CheckStatus::Pass, "{id}");
    }
    // relative error tends to nu + 1/2, not 0
    assert_eq!(r.check("sharpness/turan26_lower@nu=1").unwrap().status, CheckStatus::Fail);
}
