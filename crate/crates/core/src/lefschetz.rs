//! The Lefschetz relation `R_{Lef_p}` on cohomology, decided from the contact
//! data alone, and its comparison with the harmonic-projection route.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{cohomology, classes_of, InvariantComplex};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::hodge::MetricStructure;
use crate::linalg::{Matrix, Scalar};
use crate::sasakian::{ContactStructure, OperatorName, SasakianModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationClass {
    GraphOfIsomorphism,
    /// A constrained exact form has a non-exact image.
    NotWellDefined,
    /// Some class of `H^p` has no constrained representative.
    DomainDeficient,
    /// A map on all of `H^p`, but not invertible.
    NonBijective,
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationClass::GraphOfIsomorphism => "graph_of_isomorphism",
            RelationClass::NotWellDefined => "not_well_defined",
            RelationClass::DomainDeficient => "domain_deficient",
            RelationClass::NonBijective => "non_bijective",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LefschetzRelationReport {
    pub degree: usize,
    /// Basis of `V_p = {β : dβ = 0, i_ξβ = 0, L^{n−p+1}β = 0}`.
    pub constraint_basis: Vec<Form>,
    pub betti_source: usize,
    pub betti_target: usize,
    /// Class coordinates of the constraint basis in `H^p`.
    pub source_classes: Matrix,
    /// Class coordinates of `ε_η L^{n−p} β` in `H^{2n+1−p}`.
    pub target_classes: Matrix,
    pub domain_full: bool,
    pub well_defined: bool,
    /// Induced map `H^p → H^{2n+1−p}`, present when well defined on all of `H^p`.
    pub matrix: Option<Matrix>,
    pub bijective: bool,
    pub class: RelationClass,
}

impl LefschetzRelationReport {
    pub fn is_graph_of_isomorphism(&self) -> bool {
        self.class == RelationClass::GraphOfIsomorphism
    }

    /// Constrained forms whose classes are the cohomology basis vectors.
    pub fn constrained_representatives(&self) -> Option<Vec<Form>> {
        if !self.domain_full {
            return None;
        }
        let b = self.betti_source;
        let sol = self.source_classes.solve(&Matrix::identity(b))?;
        let dim = self.constraint_basis.first().map(Form::dim)?;
        Some(
            (0..b)
                .map(|i| {
                    self.constraint_basis
                        .iter()
                        .enumerate()
                        .fold(Form::zero(dim, self.degree), |acc, (j, f)| {
                            &acc + &f.scale(&sol.get(j, i))
                        })
                })
                .collect(),
        )
    }
}

fn matrix_power_on(op: &crate::exterior::GradedOperator, p: usize, k: usize, size: usize) -> Matrix {
    let mut m = Matrix::identity(size);
    let mut deg = p;
    for _ in 0..k {
        match op.target_degree(deg) {
            Some(t) => {
                m = op.matrix(deg).mul(&m);
                deg = t;
            }
            None => return Matrix::zeros(0, size),
        }
    }
    m
}

fn check_degree(contact: &ContactStructure, p: usize) -> Result<usize> {
    let n = contact.n();
    if p > n {
        return Err(Error::Precondition(format!("relation needs p <= n = {n}, got {p}")));
    }
    Ok(n)
}

/// Decides `R_{Lef_p}` from the complex and contact form only.
pub fn relation(c: &InvariantComplex, contact: &ContactStructure, p: usize) -> Result<LefschetzRelationReport> {
    let n = check_degree(contact, p)?;
    let frame = c.frame();
    let size = frame.len(p as i64);
    let l = contact.lefschetz(c);
    let i_xi = contact.i_xi(c);
    let lk = matrix_power_on(&l, p, n - p + 1, size);
    let stacked = Matrix::vstack(&[c.d().matrix(p), i_xi.matrix(p), &lk]);
    let basis: Vec<Form> = stacked
        .kernel()
        .iter()
        .map(|v| Form::from_vector(frame, p, v))
        .collect();
    relation_with_basis(c, contact, p, basis)
}

/// As [`relation`], with a caller-chosen basis of the constraint space.
pub fn relation_with_basis(
    c: &InvariantComplex,
    contact: &ContactStructure,
    p: usize,
    basis: Vec<Form>,
) -> Result<LefschetzRelationReport> {
    let n = check_degree(contact, p)?;
    let q = 2 * n + 1 - p;
    let hp = cohomology(c, p)?;
    let hq = cohomology(c, q)?;
    let eps = contact.eps_eta(c);
    let l = contact.lefschetz(c);
    let lnp = matrix_power_on(&l, p, n - p, c.frame().len(p as i64));
    let mut images = Vec::with_capacity(basis.len());
    for b in &basis {
        if !c.is_closed(b)? || !b.interior(contact.xi())?.is_zero() {
            return Err(Error::Precondition(format!("{b} violates the relation constraints")));
        }
        let v = lnp.apply(&b.to_vector(c.frame()));
        let lifted = Form::from_vector(c.frame(), p + 2 * (n - p), &v);
        images.push(eps.apply(&lifted)?);
    }
    let source = classes_of(c, &hp, &basis)?;
    let target = classes_of(c, &hq, &images)?;
    let rank_p = source.rank();
    let domain_full = rank_p == hp.betti();
    let well_defined = Matrix::vstack(&[&source, &target]).rank() == rank_p;
    let matrix = if domain_full && well_defined {
        let t = source
            .transpose()
            .solve(&target.transpose())
            .ok_or_else(|| Error::Invariant("induced map system inconsistent".into()))?
            .transpose();
        Some(t)
    } else {
        None
    };
    let bijective = matrix
        .as_ref()
        .is_some_and(|t| t.is_square() && t.rank() == t.nrows());
    let class = if !well_defined {
        RelationClass::NotWellDefined
    } else if !domain_full {
        RelationClass::DomainDeficient
    } else if !bijective {
        RelationClass::NonBijective
    } else {
        RelationClass::GraphOfIsomorphism
    };
    Ok(LefschetzRelationReport {
        degree: p,
        constraint_basis: basis,
        betti_source: hp.betti(),
        betti_target: hq.betti(),
        source_classes: source,
        target_classes: target,
        domain_full,
        well_defined,
        matrix,
        bijective,
        class,
    })
}

/// Matrix of `[β] ↦ [ε_η L^{n−p} Π_Δ β]` in the cohomology bases of the complex.
pub fn lef_matrix_harmonic(model: &SasakianModel, p: usize) -> Result<Matrix> {
    model.require_verified()?;
    let n = check_degree(model.contact(), p)?;
    let c = model.complex();
    let hp = cohomology(c, p)?;
    let hq = cohomology(c, 2 * n + 1 - p)?;
    let l = model.operator(OperatorName::L)?.pow((n - p) as u32);
    let eps = model.operator(OperatorName::EpsEta)?;
    let mut images = Vec::with_capacity(hp.betti());
    for r in hp.representatives() {
        let harmonic = model.hodge().project_harmonic(r)?;
        images.push(eps.apply(&l.apply(&harmonic)?)?);
    }
    classes_of(c, &hq, &images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricIndependence {
    pub degree: usize,
    /// Both Hodge-route matrices agree.
    pub metrics_agree: bool,
    /// The Hodge-route matrix equals the relation's induced matrix.
    pub matches_relation: bool,
}

impl MetricIndependence {
    pub fn passed(&self) -> bool {
        self.metrics_agree && self.matches_relation
    }
}

pub fn metric_independence_check(
    first: &SasakianModel,
    second: &SasakianModel,
    p: usize,
) -> Result<MetricIndependence> {
    if first.contact().eta() != second.contact().eta()
        || first.complex().d() != second.complex().d()
    {
        return Err(Error::Precondition(
            "structures must share the complex and the contact form".into(),
        ));
    }
    let m1 = lef_matrix_harmonic(first, p)?;
    let m2 = lef_matrix_harmonic(second, p)?;
    let rel = relation(first.complex(), first.contact(), p)?;
    Ok(MetricIndependence {
        degree: p,
        metrics_agree: m1 == m2,
        matches_relation: rel.matrix.as_ref() == Some(&m1),
    })
}

/// Integral of a top form; with no metric the coefficient of `e^1∧…∧e^dim`.
pub fn integrate_top(form: &Form, metric: Option<&MetricStructure>) -> Result<Scalar> {
    match metric {
        Some(m) => m.integrate_top(form),
        None => {
            let dim = form.dim();
            if form.degree() != dim {
                return Err(Error::Degree {
                    expected: dim,
                    found: form.degree(),
                });
            }
            Ok(form.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero))
        }
    }
}

#[derive(Clone, Debug)]
pub struct BilinearReport {
    pub degree: usize,
    pub matrix: Matrix,
    /// `B = (−1)^p Bᵀ`.
    pub graded_symmetric: bool,
    pub nondegenerate: bool,
}

/// `B_ij = ∫ η ∧ Φ^{n−p} ∧ ω_i ∧ ω_j`.
pub fn bilinear_form(
    c: &InvariantComplex,
    contact: &ContactStructure,
    p: usize,
    representatives: &[Form],
    metric: Option<&MetricStructure>,
) -> Result<BilinearReport> {
    let n = check_degree(contact, p)?;
    let dim = c.dim();
    let mut phi_power = Form::constant(dim, Scalar::one());
    for _ in 0..n - p {
        phi_power = phi_power.wedge(contact.phi_form())?;
    }
    let prefix = contact.eta().wedge(&phi_power)?;
    let mut lk = phi_power.wedge(contact.phi_form())?;
    if lk.degree() > dim {
        lk = Form::zero(dim, dim);
    }
    for w in representatives {
        let ok = w.degree() == p
            && c.is_closed(w)?
            && w.interior(contact.xi())?.is_zero()
            && lk.wedge(w)?.is_zero();
        if !ok {
            return Err(Error::Precondition(format!("{w} violates the representative constraints")));
        }
    }
    let k = representatives.len();
    let heads: Vec<Form> = representatives
        .iter()
        .map(|w| prefix.wedge(w))
        .collect::<Result<_>>()?;
    let mut triplets = Vec::new();
    for (i, h) in heads.iter().enumerate() {
        for (j, w) in representatives.iter().enumerate() {
            let v = integrate_top(&h.wedge(w)?, metric)?;
            if !v.is_zero() {
                triplets.push((i, j, v));
            }
        }
    }
    let matrix = Matrix::from_triplets(k, k, triplets);
    let sign = if p % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    let graded_symmetric = matrix == matrix.transpose().scale(&sign);
    let nondegenerate = matrix.rank() == k;
    Ok(BilinearReport {
        degree: p,
        matrix,
        graded_symmetric,
        nondegenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityEntry {
    pub degree: usize,
    pub betti: usize,
    pub even: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub betti: Vec<usize>,
    pub entries: Vec<ParityEntry>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.even)
    }
}

/// Odd-degree Betti numbers up to `n` must be even on a Lefschetz contact manifold.
pub fn betti_parity(c: &InvariantComplex, contact: &ContactStructure) -> ParityReport {
    let betti = c.betti_numbers();
    let entries = (1..=contact.n())
        .step_by(2)
        .map(|p| ParityEntry {
            degree: p,
            betti: betti[p],
            even: betti[p] % 2 == 0,
        })
        .collect();
    ParityReport { betti, entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Overall {
    LefschetzContact,
    Obstructed { reasons: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct ObstructionVerdict {
    pub relations: Vec<LefschetzRelationReport>,
    pub bilinear: Vec<Option<BilinearReport>>,
    pub parity: ParityReport,
    pub overall: Overall,
    /// Degrees where the Hodge-route matrix was compared with the relation.
    pub cross_checked: Vec<usize>,
}

impl ObstructionVerdict {
    pub fn is_lefschetz_contact(&self) -> bool {
        self.overall == Overall::LefschetzContact
    }
}

/// Aggregates the relation in every degree `p ≤ n` and the parity test.
/// With a verified Sasakian model the relation matrices are checked against
/// the harmonic route; disagreement is an internal invariant violation.
pub fn verdict(
    c: &InvariantComplex,
    contact: &ContactStructure,
    model: Option<&SasakianModel>,
) -> Result<ObstructionVerdict> {
    let n = contact.n();
    let relations = (0..=n)
        .into_par_iter()
        .map(|p| relation(c, contact, p))
        .collect::<Result<Vec<_>>>()?;
    let metric = model.map(|m| m.metric());
    let bilinear = relations
        .iter()
        .map(|r| {
            r.constrained_representatives()
                .map(|reps| bilinear_form(c, contact, r.degree, &reps, metric))
                .transpose()
        })
        .collect::<Result<Vec<_>>>()?;
    let parity = betti_parity(c, contact);
    let mut reasons = Vec::new();
    for r in &relations {
        if !r.is_graph_of_isomorphism() {
            reasons.push(format!("relation at p={}: {}", r.degree, r.class));
        }
    }
    for e in &parity.entries {
        if !e.even {
            reasons.push(format!("parity at p={}: b{} = {} is odd", e.degree, e.degree, e.betti));
        }
    }
    let mut cross_checked = Vec::new();
    if let Some(m) = model.filter(|m| m.is_verified()) {
        for r in &relations {
            let hodge = lef_matrix_harmonic(m, r.degree)?;
            if r.matrix.as_ref() != Some(&hodge) {
                return Err(Error::Invariant(format!(
                    "harmonic route and relation route disagree at p={}",
                    r.degree
                )));
            }
            cross_checked.push(r.degree);
        }
    }
    let overall = if reasons.is_empty() {
        Overall::LefschetzContact
    } else {
        Overall::Obstructed { reasons }
    };
    Ok(ObstructionVerdict {
        relations,
        bilinear,
        parity,
        overall,
        cross_checked,
    })
}
