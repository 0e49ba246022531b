use lefschetz_lab::fixture::bundled;
use lefschetz_lab::ladder::{
    allowed_nu, composition_check, figure_data, ladder_trace, lefschetz_f, lefschetz_g, membership,
    nu, family_space, FamilyTag,
};
use lefschetz_lab::linalg::{int, Scalar};
use lefschetz_lab::{Error, Form, OperatorName, SasakianModel};
use num_traits::Zero;

fn model(name: &str) -> SasakianModel {
    bundled(name).unwrap().model().unwrap()
}

fn mono(dim: usize, idx: &[usize], c: i64) -> Form {
    Form::monomial(dim, idx, int(c)).unwrap()
}

#[test]
fn nu_values() {
    assert_eq!(nu(5, 1, 2), 6);
    assert_eq!(nu(2, 1, 1), 1);
    for n in 0..6 {
        for p in 0..6 {
            assert_eq!(nu(n, p, 0), 0);
        }
    }
}

#[test]
fn allowed_sets() {
    assert_eq!(allowed_nu(5, 0, FamilyTag::Closed), vec![(0, 0)]);
    assert_eq!(allowed_nu(1, 1, FamilyTag::Coclosed), vec![(1, 1)]);
    let p6: Vec<i64> = allowed_nu(5, 6, FamilyTag::Closed).iter().map(|x| x.1).collect();
    assert_eq!(p6, [1, 4, 9]);
}

#[test]
fn heis3_membership() {
    let m = model("heis3");
    let e1 = mono(3, &[1], 1);
    let e3 = mono(3, &[3], 1);
    assert_eq!(membership(&m, &e1, FamilyTag::Closed).unwrap(), Some(Scalar::zero()));
    assert_eq!(membership(&m, &e3, FamilyTag::Coclosed).unwrap(), Some(int(1)));
    assert_eq!(membership(&m, &e3, FamilyTag::Closed).unwrap(), None);
    assert!(matches!(
        membership(&m, &Form::zero(3, 1), FamilyTag::Closed),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn heis3_traces() {
    let m = model("heis3");
    let t = ladder_trace(&m, &Form::constant(3, int(1))).unwrap();
    let ops: Vec<&str> = t.steps.iter().map(|s| s.operator).collect();
    assert_eq!(ops, ["L", "eps_eta"]);
    assert_eq!(t.steps[0].node.form, mono(3, &[1, 2], -1));
    assert_eq!(t.steps[0].node.nu, int(1));
    assert_eq!(t.last().form, mono(3, &[1, 2, 3], -1));
    assert_eq!(t.last().nu, Scalar::zero());
    assert_eq!(t.last().family, FamilyTag::Coclosed);

    let t = ladder_trace(&m, &mono(3, &[1], 1)).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert_eq!(t.last().form, mono(3, &[1, 3], -1));
    assert!(t.eps_d_factorization.iter().chain(&t.delta_i_xi_factorization).all(|b| *b));

    assert!(matches!(ladder_trace(&m, &mono(3, &[3], 1)), Err(Error::Precondition(_))));
}

#[test]
fn heis5_ladder_step() {
    let m = model("heis5");
    let t = ladder_trace(&m, &mono(5, &[1], 1)).unwrap();
    assert_eq!(t.steps[0].node.form, mono(5, &[1, 3, 4], -1));
    assert_eq!(t.steps[0].node.nu, int(1));
    let lap = m.hodge().apply_laplacian(&t.steps[0].node.form).unwrap();
    assert_eq!(lap, t.steps[0].node.form.scale(&int(4)));
}

#[test]
fn lefschetz_maps_examples() {
    let m = model("heis3");
    let e1 = mono(3, &[1], 1);
    let f = lefschetz_f(&m, 1, &e1).unwrap();
    assert_eq!(f, mono(3, &[1, 3], -1));
    assert_eq!(lefschetz_g(&m, 1, &f).unwrap(), e1);
    let one = Form::constant(3, int(1));
    let f0 = lefschetz_f(&m, 0, &one).unwrap();
    assert_eq!(f0, mono(3, &[1, 2, 3], -1));
    assert_eq!(lefschetz_g(&m, 0, &f0).unwrap(), one);

    let m5 = model("heis5");
    let one5 = Form::constant(5, int(1));
    let back = lefschetz_g(&m5, 0, &lefschetz_f(&m5, 0, &one5).unwrap()).unwrap();
    assert_eq!(back, one5.scale(&int(4)));
    assert_eq!(composition_check(&m5, 0).unwrap().factor, "4");
    assert!(lefschetz_f(&m5, 1, &mono(5, &[5], 1)).is_err());
}

#[test]
fn heis3_figure_nodes() {
    let fig = figure_data(&model("heis3")).unwrap();
    let got: Vec<(usize, &str, FamilyTag, usize)> =
        fig.nodes.iter().map(|n| (n.p, n.nu.as_str(), n.family, n.dim)).collect();
    use FamilyTag::*;
    assert_eq!(
        got,
        [
            (0, "0", Closed, 1),
            (1, "0", Closed, 2),
            (1, "1", Coclosed, 1),
            (2, "1", Closed, 1),
            (2, "0", Coclosed, 2),
            (3, "0", Coclosed, 1),
        ]
    );
    assert!(fig.scan_complete() && fig.all_admissible());
    assert!(fig.edges.iter().all(|e| e.dims_match));
    assert_eq!(fig.to_tsv().lines().next(), Some("#nodes"));
}

#[test]
fn figure_rejects_non_contact() {
    let f = bundled("abelian3").unwrap();
    assert!(matches!(f.model(), Err(Error::ContactViolation(_))));
}

/// Characterisation, `d`/`δ` and `ε_η`/`i_ξ` isomorphisms on every node.
fn family_invariants(name: &str) {
    let m = model(name);
    let n = m.n();
    let fig = figure_data(&m).unwrap();
    let hodge = m.hodge();
    let d = m.operator(OperatorName::D).unwrap();
    let delta = m.operator(OperatorName::Delta).unwrap();
    let eps = m.operator(OperatorName::EpsEta).unwrap();
    let i_xi = m.operator(OperatorName::IXi).unwrap();
    for p in 0..=m.dim() {
        let harmonic = hodge.harmonic_dim(p);
        let closed0 = fig.node(p, 0, FamilyTag::Closed).map_or(0, |x| x.dim);
        let coclosed0 = fig.node(p, 0, FamilyTag::Coclosed).map_or(0, |x| x.dim);
        if p <= n {
            assert_eq!((closed0, coclosed0), (harmonic, 0), "{name} p={p}");
        } else {
            assert_eq!((closed0, coclosed0), (0, harmonic), "{name} p={p}");
        }
    }
    for node in fig.nodes.iter().filter(|x| x.family == FamilyTag::Coclosed) {
        let v: i64 = node.nu.parse().unwrap();
        let p = node.p;
        for w in family_space(&m, p, &int(v), FamilyTag::Coclosed) {
            if v != 0 {
                let dw = d.apply(&w).unwrap();
                assert_eq!(membership(&m, &dw, FamilyTag::Closed).unwrap(), Some(int(v)));
                assert_eq!(delta.apply(&dw).unwrap(), w.scale(&int(4 * v)));
            }
            if p > 0 {
                let iw = i_xi.apply(&w).unwrap();
                let target = v + p as i64 - n as i64 - 1;
                assert_eq!(membership(&m, &iw, FamilyTag::Closed).unwrap(), Some(int(target)));
                assert_eq!(eps.apply(&iw).unwrap(), w);
            }
        }
    }
}

#[test]
fn family_invariants_heis5() {
    family_invariants("heis5");
}

#[test]
fn family_invariants_alternate_metric() {
    family_invariants("heis3_alt");
    family_invariants("heis5_alt");
}

#[test]
fn heis11_figure_certificate() {
    let m = model("heis11");
    let fig = figure_data(&m).unwrap();
    assert!(fig.all_admissible());
    assert!(fig.scan_complete(), "{:?}", fig.accounts);
    for p in 0..=5 {
        let walk = fig.walk_from_harmonic(p).unwrap();
        assert_eq!(walk.len(), 2 * (5 - p) + 2);
    }
}
