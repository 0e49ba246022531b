use lefschetz_lab::fixture::bundled;
use lefschetz_lab::lefschetz::{
    betti_parity, metric_independence_check, relation, verdict, Overall, RelationClass,
};
use lefschetz_lab::Error;

fn classes(name: &str) -> Vec<RelationClass> {
    let f = bundled(name).unwrap();
    let contact = f.contact().unwrap();
    (0..=contact.n())
        .map(|p| relation(&f.complex, &contact, p).unwrap().class)
        .collect()
}

#[test]
fn positive_fixtures_are_lefschetz() {
    for name in ["heis3", "heis5", "heis7", "heis3_alt", "heis5_alt"] {
        let f = bundled(name).unwrap();
        let contact = f.contact().unwrap();
        let model = f.model().unwrap();
        assert!(model.is_verified(), "{name}");
        let v = verdict(&f.complex, &contact, Some(&model)).unwrap();
        assert_eq!(v.overall, Overall::LefschetzContact, "{name}");
        assert_eq!(v.cross_checked, (0..=contact.n()).collect::<Vec<_>>());
        assert!(v.parity.passed());
        for r in &v.relations {
            assert!(r.domain_full && r.well_defined && r.bijective, "{name} p={}", r.degree);
            assert_eq!(r.betti_source, r.betti_target);
        }
        for b in v.bilinear.iter().flatten() {
            assert!(b.nondegenerate && b.graded_symmetric, "{name} p={}", b.degree);
        }
    }
}

#[test]
fn n5_contact_is_obstructed() {
    assert_eq!(
        classes("n5_contact"),
        [
            RelationClass::GraphOfIsomorphism,
            RelationClass::NonBijective,
            RelationClass::NotWellDefined
        ]
    );
    let f = bundled("n5_contact").unwrap();
    let contact = f.contact().unwrap();
    let model = f.model().unwrap();
    assert!(!model.is_verified());
    let v = verdict(&f.complex, &contact, Some(&model)).unwrap();
    assert!(v.cross_checked.is_empty());
    match &v.overall {
        Overall::Obstructed { reasons } => {
            assert_eq!(reasons.len(), 3, "{reasons:?}");
            assert!(reasons[2].contains("b1 = 3 is odd"));
        }
        other => panic!("{other:?}"),
    }
    let parity = betti_parity(&f.complex, &contact);
    assert_eq!(parity.betti, [1, 3, 4, 4, 3, 1]);
    assert!(!parity.passed());
}

#[test]
fn relation_matrix_heis3() {
    let f = bundled("heis3").unwrap();
    let contact = f.contact().unwrap();
    let r = relation(&f.complex, &contact, 1).unwrap();
    assert_eq!(r.constraint_basis.len(), 2);
    assert_eq!(r.matrix.as_ref().map(|m| (m.nrows(), m.ncols())), Some((2, 2)));
    assert!(r.is_graph_of_isomorphism());
    assert!(relation(&f.complex, &contact, 2).is_err());
}

#[test]
fn second_metric_agrees() {
    for (a, b) in [("heis3", "heis3_alt"), ("heis5", "heis5_alt")] {
        let m1 = bundled(a).unwrap().model().unwrap();
        let m2 = bundled(b).unwrap().model().unwrap();
        for p in 0..=m1.n() {
            assert!(metric_independence_check(&m1, &m2, p).unwrap().passed(), "{a}/{b} p={p}");
        }
    }
    let h3 = bundled("heis3").unwrap().model().unwrap();
    let h5 = bundled("heis5").unwrap().model().unwrap();
    assert!(matches!(metric_independence_check(&h3, &h5, 0), Err(Error::Precondition(_))));
}

#[test]
fn non_contact_fixture_is_rejected() {
    let f = bundled("abelian3").unwrap();
    assert!(matches!(f.contact(), Err(Error::ContactViolation(_))));
}
