use std::sync::{Arc, LazyLock};

use lefschetz_lab::complex::{class_of, cohomology};
use lefschetz_lab::exterior::{as_matrix, Frame};
use lefschetz_lab::fixture::bundled;
use lefschetz_lab::ladder::{family_space, figure_data, membership, FamilyTag};
use lefschetz_lab::linalg::{int, Matrix, Scalar};
use lefschetz_lab::{Endomorphism, Form, OperatorName, SasakianModel, VectorField};
use proptest::prelude::*;

static MODELS: LazyLock<Vec<SasakianModel>> = LazyLock::new(|| {
    ["heis5", "heis5_alt", "n5_contact", "heis7"]
        .iter()
        .map(|n| bundled(n).unwrap().model().unwrap())
        .collect()
});

fn frame(dim: usize) -> Arc<Frame> {
    Frame::new(dim).unwrap()
}

fn form_from(frame: &Frame, p: usize, coeffs: &[i64]) -> Form {
    let values: Vec<Scalar> = (0..frame.len(p as i64)).map(|i| int(coeffs[i % coeffs.len()])).collect();
    Form::from_vector(frame, p, &values)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..40)
}

fn sign(odd: bool) -> Scalar {
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn wedge_is_graded_commutative(p in 0usize..=6, q in 0usize..=6, a in coeffs(), b in coeffs()) {
        let f = frame(6);
        let (x, y) = (form_from(&f, p, &a), form_from(&f, q, &b));
        let xy = x.wedge(&y).unwrap();
        let yx = y.wedge(&x).unwrap();
        prop_assert_eq!(xy, yx.scale(&sign(p * q % 2 == 1)));
    }

    #[test]
    fn d_is_an_antiderivation(m in 0usize..4, p in 0usize..=5, q in 0usize..=5, a in coeffs(), b in coeffs()) {
        let c = MODELS[m].complex();
        let f = c.frame();
        let (x, y) = (form_from(f, p, &a), form_from(f, q.min(c.dim() - p), &b));
        let lhs = c.differential(&x.wedge(&y).unwrap()).unwrap();
        let rhs = &c.differential(&x).unwrap().wedge(&y).unwrap()
            + &x.wedge(&c.differential(&y).unwrap()).unwrap().scale(&sign(p % 2 == 1));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(c.differential(&c.differential(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn contractions_are_derivations(
        p in 1usize..=4, q in 1usize..=4, a in coeffs(), b in coeffs(),
        v in prop::collection::vec(-2i64..=2, 6), psi in prop::collection::vec(-2i64..=2, 36),
    ) {
        let f = frame(6);
        let (x, y) = (form_from(&f, p, &a), form_from(&f, q, &b));
        let field = VectorField::new(v.iter().map(|c| int(*c)).collect());
        let endo = Endomorphism::new(Matrix::from_dense(
            &psi.chunks(6).map(|r| r.iter().map(|c| int(*c)).collect()).collect::<Vec<_>>(),
        )).unwrap();
        let xy = x.wedge(&y).unwrap();
        let lhs = xy.interior(&field).unwrap();
        let rhs = &x.interior(&field).unwrap().wedge(&y).unwrap()
            + &x.wedge(&y.interior(&field).unwrap()).unwrap().scale(&sign(p % 2 == 1));
        prop_assert_eq!(lhs, rhs);
        let lhs = xy.insert_endo(&endo).unwrap();
        let rhs = &x.insert_endo(&endo).unwrap().wedge(&y).unwrap()
            + &x.wedge(&y.insert_endo(&endo).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // [i_ψ, i_X] = −i_{ψX}
        let comm = &x.interior(&field).unwrap().insert_endo(&endo).unwrap()
            - &x.insert_endo(&endo).unwrap().interior(&field).unwrap();
        prop_assert_eq!(comm, -&x.interior(&endo.apply(&field)).unwrap());
    }

    #[test]
    fn operator_matrices_round_trip(m in 0usize..4, p in 0usize..=5, a in coeffs()) {
        let model = &MODELS[m];
        let f = model.complex().frame();
        let x = form_from(f, p, &a);
        prop_assert_eq!(Form::from_vector(f, p, &x.to_vector(f)), x.clone());
        for name in OperatorName::ALL {
            let op = model.operator_unchecked(name);
            let Some(q) = op.target_degree(p) else { continue };
            let by_matrix = Form::from_vector(f, q, &op.matrix(p).apply(&x.to_vector(f)));
            prop_assert_eq!(op.apply(&x).unwrap(), by_matrix, "{}", name);
        }
        let d = model.complex().d();
        let rebuilt = as_matrix(f, p, 1, |w| model.complex().differential(w)).unwrap();
        prop_assert_eq!(&rebuilt, d.matrix(p));
    }

    #[test]
    fn adjoints_and_star(m in 0usize..4, p in 0usize..=5, a in coeffs(), b in coeffs()) {
        let model = &MODELS[m];
        let metric = model.metric();
        let f = model.complex().frame();
        let dim = model.dim();
        let p = p.min(dim - 1);
        let x = form_from(f, p, &a);
        let y = form_from(f, p + 1, &b);
        let d = model.operator_unchecked(OperatorName::D);
        let delta = model.operator_unchecked(OperatorName::Delta);
        prop_assert_eq!(
            metric.inner(&d.apply(&x).unwrap(), &y).unwrap(),
            metric.inner(&x, &delta.apply(&y).unwrap()).unwrap()
        );
        let star = metric.star(&x).unwrap();
        prop_assert_eq!(metric.star(&star).unwrap(), x.clone());
        let x2 = form_from(f, p, &b);
        let top = x2.wedge(&star).unwrap();
        prop_assert_eq!(top, metric.volume_form().unwrap().scale(&metric.inner(&x2, &x).unwrap()));
    }

    #[test]
    fn hodge_decomposition(m in 0usize..4, p in 0usize..=5, a in coeffs()) {
        let model = &MODELS[m];
        let h = model.hodge();
        let x = form_from(model.complex().frame(), p, &a);
        let d = h.d();
        let delta = h.delta();
        let g = h.green(&x).unwrap();
        let harmonic = h.project_harmonic(&x).unwrap();
        prop_assert!(h.apply_laplacian(&harmonic).unwrap().is_zero());
        let mut parts = harmonic.clone();
        if p > 0 {
            parts = &parts + &d.apply(&delta.apply(&g).unwrap()).unwrap();
        }
        if p < model.dim() {
            parts = &parts + &delta.apply(&d.apply(&g).unwrap()).unwrap();
            prop_assert_eq!(d.apply(&g).unwrap(), h.green(&d.apply(&x).unwrap()).unwrap());
        }
        prop_assert_eq!(parts, x.clone());
        prop_assert_eq!(h.apply_laplacian(&g).unwrap(), &x - &harmonic);
        prop_assert_eq!(h.green(&h.apply_laplacian(&x).unwrap()).unwrap(), &x - &harmonic);
        prop_assert!(h.green(&harmonic).unwrap().is_zero());
    }

    #[test]
    fn class_is_invariant_under_exact_shift(m in 0usize..4, p in 1usize..=5, a in coeffs(), b in coeffs()) {
        let c = MODELS[m].complex();
        let f = c.frame();
        let h = cohomology(c, p).unwrap();
        if h.betti() == 0 {
            return Ok(());
        }
        let reps = h.representatives();
        let mut w = reps[0].scale(&int(0));
        for (i, r) in reps.iter().enumerate() {
            w = &w + &r.scale(&int(a[i % a.len()]));
        }
        let beta = form_from(f, p - 1, &b);
        let shifted = &w + &c.differential(&beta).unwrap();
        prop_assert_eq!(class_of(c, &h, &w).unwrap(), class_of(c, &h, &shifted).unwrap());
        let expect: Vec<Scalar> = (0..reps.len()).map(|i| int(a[i % a.len()])).collect();
        prop_assert_eq!(class_of(c, &h, &w).unwrap(), expect);
    }

    #[test]
    fn family_membership_is_star_dual(m in 0usize..2, pick in 0usize..64, a in coeffs()) {
        let model = &MODELS[m];
        let fig = figure_data(model).unwrap();
        let node = &fig.nodes[pick % fig.nodes.len()];
        let nu = int(node.nu.parse().unwrap());
        let basis = family_space(model, node.p, &nu, node.family);
        let mut w = basis[0].scale(&int(0));
        for (i, b) in basis.iter().enumerate() {
            w = &w + &b.scale(&int(a[i % a.len()]));
        }
        if w.is_zero() {
            return Ok(());
        }
        let star = model.metric().star(&w).unwrap();
        prop_assert_eq!(membership(model, &w, node.family).unwrap(), Some(nu.clone()));
        prop_assert_eq!(membership(model, &star, node.family.dual()).unwrap(), Some(nu));
        let other = match node.family { FamilyTag::Closed => FamilyTag::Coclosed, FamilyTag::Coclosed => FamilyTag::Closed };
        prop_assert_eq!(other, node.family.dual());
    }
}
