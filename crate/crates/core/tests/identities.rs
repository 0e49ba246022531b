use std::time::Instant;

use lefschetz_lab::fixture::bundled;
use lefschetz_lab::identities::{dual_cross_check, verify_all, verify_tachibana};

fn run_catalog(name: &str) {
    let start = Instant::now();
    let model = bundled(name).unwrap().model().unwrap();
    assert!(model.is_verified(), "{name}: {:?}", model.report());
    for r in verify_all(&model, false).unwrap() {
        assert!(r.passed, "{name} {}: {:?}", r.id, r.counterexample);
    }
    assert!(dual_cross_check(&model).unwrap());
    assert!(start.elapsed().as_secs() < 300, "{name}: catalog too slow");
}

#[test]
fn catalog_heis3() {
    run_catalog("heis3");
}

#[test]
fn catalog_heis5() {
    run_catalog("heis5");
}

#[test]
fn catalog_heis7() {
    run_catalog("heis7");
}

#[test]
fn catalog_alternate_structures() {
    run_catalog("heis3_alt");
    run_catalog("heis5_alt");
}

#[test]
fn tachibana_heis3_heis5() {
    for name in ["heis3", "heis5"] {
        let model = bundled(name).unwrap().model().unwrap();
        for p in 0..=model.dim() {
            let r = verify_tachibana(&model, p).unwrap();
            assert!(r.passed(), "{name} p={p}: {r:?}");
        }
    }
}

#[test]
fn catalog_heis11() {
    run_catalog("heis11");
}

#[test]
fn diagnostic_mode_on_non_sasakian_structure() {
    let model = bundled("n5_contact").unwrap().model().unwrap();
    assert!(verify_all(&model, false).is_err());
    let reports = verify_all(&model, true).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.id.as_str()).collect();
    assert!(failed.contains(&"g") && failed.contains(&"i1"), "{failed:?}");
    for r in reports.iter().filter(|r| !r.passed) {
        assert!(r.counterexample.as_deref().unwrap().starts_with("degree "));
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    assert!(passed > 0);
}
