//! Contact and Sasakian structures on an invariant complex, and the operator
//! algebra `ε_η, i_ξ, i_φ, L, Λ, 𝓛_ξ, 𝓛_φ, deg, d, δ, Δ`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::InvariantComplex;
use crate::error::{Error, Result};
use crate::exterior::{Endomorphism, Form, GradedOperator, MultiIndex, VectorField};
use crate::hodge::{HodgePackage, MetricStructure};
use crate::linalg::{int, ratio, Matrix, Scalar};

/// Matrix `M` with `M[k][j]` = coefficient of `e^k` in `i_{E_j} α` for a 2-form `α`,
/// i.e. `M[k][j] = α(E_j, E_k)`.
fn two_form_matrix(alpha: &Form) -> Matrix {
    let dim = alpha.dim();
    let mut triplets = Vec::new();
    for (m, c) in alpha.terms() {
        let ij: Vec<usize> = m.indices().collect();
        let (i, j) = (ij[0] - 1, ij[1] - 1);
        // α(E_i, E_j) = c, α(E_j, E_i) = -c
        triplets.push((j, i, c.clone()));
        triplets.push((i, j, -c.clone()));
    }
    Matrix::from_triplets(dim, dim, triplets)
}

/// Matrix of a 2-form as a bilinear form on frame vectors: `A[i][j] = α(E_i, E_j)`.
pub fn bilinear_matrix(alpha: &Form) -> Matrix {
    two_form_matrix(alpha).transpose()
}

/// The Reeb field: the unique `ξ` with `i_ξη = 1` and `i_ξdη = 0`.
pub fn reeb(c: &InvariantComplex, eta: &Form) -> Result<VectorField> {
    let dim = c.dim();
    if eta.degree() != 1 || eta.dim() != dim {
        return Err(Error::Precondition("η must be a 1-form on the complex frame".into()));
    }
    let n = c.contact_half_dim()?;
    let d_eta = c.differential(eta)?;
    let mut top = eta.clone();
    for _ in 0..n {
        top = top.wedge(&d_eta)?;
    }
    if top.is_zero() {
        return Err(Error::ContactViolation(format!("η∧(dη)^{n} = 0 for η = {eta}")));
    }
    let eta_row = Matrix::from_dense(&[eta.to_vector(c.frame())]);
    let system = Matrix::vstack(&[&eta_row, &two_form_matrix(&d_eta)]);
    let mut rhs = vec![Scalar::zero(); dim + 1];
    rhs[0] = Scalar::one();
    if system.rank() != dim {
        return Err(Error::ContactViolation("Reeb conditions do not determine ξ".into()));
    }
    let xi = system
        .solve_vector(&rhs)
        .ok_or_else(|| Error::ContactViolation("Reeb conditions are inconsistent".into()))?;
    Ok(VectorField::new(xi))
}

/// Contact data: `η`, its Reeb field and `Φ = ½dη`. Metric-free.
#[derive(Clone, Debug)]
pub struct ContactStructure {
    n: usize,
    eta: Form,
    xi: VectorField,
    d_eta: Form,
    phi_form: Form,
}

impl ContactStructure {
    pub fn new(c: &InvariantComplex, eta: Form) -> Result<Self> {
        let xi = reeb(c, &eta)?;
        let d_eta = c.differential(&eta)?;
        let phi_form = d_eta.scale(&ratio(1, 2));
        Ok(ContactStructure {
            n: c.contact_half_dim()?,
            eta,
            xi,
            d_eta,
            phi_form,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> &Form {
        &self.eta
    }

    pub fn xi(&self) -> &VectorField {
        &self.xi
    }

    pub fn d_eta(&self) -> &Form {
        &self.d_eta
    }

    /// `Φ = ½dη`.
    pub fn phi_form(&self) -> &Form {
        &self.phi_form
    }

    pub fn eps_eta(&self, c: &InvariantComplex) -> GradedOperator {
        let eta = &self.eta;
        GradedOperator::from_form_map(c.frame(), 1, |f| eta.wedge(f)).expect("wedge by η")
    }

    pub fn i_xi(&self, c: &InvariantComplex) -> GradedOperator {
        let xi = &self.xi;
        GradedOperator::from_form_map(c.frame(), -1, |f| f.interior(xi)).expect("contraction by ξ")
    }

    pub fn lefschetz(&self, c: &InvariantComplex) -> GradedOperator {
        let phi = &self.phi_form;
        GradedOperator::from_form_map(c.frame(), 2, |f| phi.wedge(f)).expect("wedge by Φ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.axiom.as_str())
            .collect()
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    fn push(&mut self, axiom: &str, witness: Option<String>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }
}

fn first_mismatch(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a.get(i, j) != b.get(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

fn pair_witness(a: &Matrix, b: &Matrix) -> Option<String> {
    first_mismatch(a, b).map(|(i, j)| format!("(E{}, E{})", i + 1, j + 1))
}

fn outer(col: &[Scalar], row: &[Scalar]) -> Matrix {
    let mut triplets = Vec::new();
    for (i, a) in col.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            let v = a * b;
            if !v.is_zero() {
                triplets.push((i, j, v));
            }
        }
    }
    Matrix::from_triplets(col.len(), row.len(), triplets)
}

/// Classical Nijenhuis torsion plus the normality correction, on frame vectors.
fn normality_defect(
    c: &InvariantComplex,
    contact: &ContactStructure,
    phi: &Endomorphism,
    i: usize,
    j: usize,
) -> VectorField {
    let spec = c.spec();
    let dim = c.dim();
    let x = VectorField::frame_vector(dim, i);
    let y = VectorField::frame_vector(dim, j);
    let px = phi.apply(&x);
    let py = phi.apply(&y);
    let bracket = spec.bracket_fields(&x, &y);
    let terms = [
        phi.apply(&phi.apply(&bracket)).coeffs().to_vec(),
        spec.bracket_fields(&px, &py).coeffs().to_vec(),
        phi.apply(&spec.bracket_fields(&px, &y)).coeffs().to_vec(),
        phi.apply(&spec.bracket_fields(&x, &py)).coeffs().to_vec(),
    ];
    let m = MultiIndex::from_indices(&[i, j]).expect("i < j");
    let deta = contact.d_eta().coeff(m);
    let out = (0..dim)
        .map(|k| {
            &terms[0][k] + &terms[1][k] - &terms[2][k] - &terms[3][k]
                + &deta * &contact.xi().coeffs()[k]
        })
        .collect();
    VectorField::new(out)
}

/// Exact verification of every Sasakian axiom, each with a witness on failure.
pub fn sasakian_check(
    c: &InvariantComplex,
    contact: &ContactStructure,
    metric: &MetricStructure,
    phi: &Endomorphism,
) -> AxiomReport {
    let dim = c.dim();
    let mut report = AxiomReport::default();
    let eta = contact.eta().to_vector(c.frame());
    let xi = contact.xi().coeffs().to_vec();
    let g = metric.vector_gram();
    let phim = phi.matrix();

    report.push("contact", None);

    let reeb_ok = contact.eta().interior(contact.xi()).ok().map(|f| f.coeff(MultiIndex::EMPTY))
        == Some(Scalar::one())
        && contact.d_eta().interior(contact.xi()).map(|f| f.is_zero()).unwrap_or(false);
    report.push("reeb", (!reeb_ok).then(|| "i_ξη != 1 or i_ξdη != 0".to_string()));

    let g_xi = g.apply(&xi);
    report.push(
        "metric_dual_of_xi",
        g_xi.iter()
            .zip(&eta)
            .position(|(a, b)| a != b)
            .map(|k| format!("g(ξ, E{}) = {} but η(E{}) = {}", k + 1, g_xi[k], k + 1, eta[k])),
    );

    let big_phi = bilinear_matrix(contact.phi_form());
    report.push("phi_compatible", pair_witness(&big_phi, &g.mul(phim)));

    let minus_id = Matrix::scalar_identity(dim, &int(-1));
    let expected_sq = minus_id.add(&outer(&xi, &eta));
    report.push(
        "phi_squared",
        first_mismatch(&phim.mul(phim), &expected_sq)
            .map(|(_, j)| format!("φ²E{} != -E{} + η(E{})ξ", j + 1, j + 1, j + 1)),
    );

    let lhs = phim.transpose().mul(&g).mul(phim);
    let rhs = g.sub(&outer(&eta, &eta));
    report.push("metric_compatible", pair_witness(&lhs, &rhs));

    let mut normal = None;
    'outer: for i in 1..=dim {
        for j in i + 1..=dim {
            if !normality_defect(c, contact, phi, i, j).is_zero() {
                normal = Some(format!("(E{i}, E{j})"));
                break 'outer;
            }
        }
    }
    report.push("normal", normal);

    let phi_xi = phim.apply(&xi);
    report.push(
        "phi_xi_zero",
        phi_xi.iter().position(|v| !v.is_zero()).map(|k| format!("component E{} of φξ", k + 1)),
    );
    let eta_phi = phim.transpose().apply(&eta);
    report.push(
        "eta_phi_zero",
        eta_phi.iter().position(|v| !v.is_zero()).map(|k| format!("η(φE{}) != 0", k + 1)),
    );
    report
}

/// `φ` determined by `Φ(X, Y) = g(X, φY)`.
pub fn derive_phi(contact: &ContactStructure, metric: &MetricStructure) -> Endomorphism {
    let big_phi = bilinear_matrix(contact.phi_form());
    Endomorphism::new(metric.gram1().mul(&big_phi)).expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorName {
    EpsEta,
    IXi,
    IPhi,
    L,
    Lambda,
    LieXi,
    LiePhi,
    Deg,
    D,
    Delta,
    Laplacian,
}

impl OperatorName {
    pub const ALL: [OperatorName; 11] = [
        OperatorName::EpsEta,
        OperatorName::IXi,
        OperatorName::IPhi,
        OperatorName::L,
        OperatorName::Lambda,
        OperatorName::LieXi,
        OperatorName::LiePhi,
        OperatorName::Deg,
        OperatorName::D,
        OperatorName::Delta,
        OperatorName::Laplacian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorName::EpsEta => "eps_eta",
            OperatorName::IXi => "i_xi",
            OperatorName::IPhi => "i_phi",
            OperatorName::L => "L",
            OperatorName::Lambda => "Lambda",
            OperatorName::LieXi => "lie_xi",
            OperatorName::LiePhi => "lie_phi",
            OperatorName::Deg => "deg",
            OperatorName::D => "d",
            OperatorName::Delta => "delta",
            OperatorName::Laplacian => "laplacian",
        }
    }
}

impl fmt::Display for OperatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A complex with contact form, metric and `φ`, the axiom report, and cached
/// operator matrices. Constructed even when axioms fail so that diagnostics
/// can run; [`SasakianModel::operator`] refuses unverified structures.
#[derive(Debug)]
pub struct SasakianModel {
    complex: Arc<InvariantComplex>,
    contact: ContactStructure,
    phi: Endomorphism,
    hodge: HodgePackage,
    report: AxiomReport,
    cache: [OnceLock<GradedOperator>; 11],
    n_minus_deg: OnceLock<GradedOperator>,
}

impl SasakianModel {
    /// `phi = None` derives `φ` from `Φ` and the metric.
    pub fn new(
        complex: Arc<InvariantComplex>,
        eta: Form,
        metric: MetricStructure,
        phi: Option<Endomorphism>,
    ) -> Result<Self> {
        let contact = ContactStructure::new(&complex, eta)?;
        Self::from_contact(complex, contact, metric, phi)
    }

    pub fn from_contact(
        complex: Arc<InvariantComplex>,
        contact: ContactStructure,
        metric: MetricStructure,
        phi: Option<Endomorphism>,
    ) -> Result<Self> {
        let phi = match phi {
            Some(p) if p.dim() != complex.dim() => {
                return Err(Error::Dimension {
                    expected: complex.dim(),
                    found: p.dim(),
                })
            }
            Some(p) => p,
            None => derive_phi(&contact, &metric),
        };
        let report = sasakian_check(&complex, &contact, &metric, &phi);
        let hodge = HodgePackage::new(&complex, metric)?;
        Ok(SasakianModel {
            complex,
            contact,
            phi,
            hodge,
            report,
            cache: Default::default(),
            n_minus_deg: OnceLock::new(),
        })
    }

    pub fn complex(&self) -> &Arc<InvariantComplex> {
        &self.complex
    }

    pub fn contact(&self) -> &ContactStructure {
        &self.contact
    }

    pub fn metric(&self) -> &MetricStructure {
        self.hodge.metric()
    }

    pub fn hodge(&self) -> &HodgePackage {
        &self.hodge
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.contact.n()
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn report(&self) -> &AxiomReport {
        &self.report
    }

    pub fn is_verified(&self) -> bool {
        self.report.all_passed()
    }

    pub fn require_verified(&self) -> Result<()> {
        if self.is_verified() {
            Ok(())
        } else {
            Err(Error::Unverified(format!(
                "failed axioms: {}",
                self.report.failed().join(", ")
            )))
        }
    }

    /// Operator on a verified structure.
    pub fn operator(&self, name: OperatorName) -> Result<&GradedOperator> {
        self.require_verified()?;
        Ok(self.operator_unchecked(name))
    }

    /// Operator regardless of verification, for diagnostic runs.
    pub fn operator_unchecked(&self, name: OperatorName) -> &GradedOperator {
        self.cache[name as usize].get_or_init(|| self.build(name))
    }

    fn build(&self, name: OperatorName) -> GradedOperator {
        let c = &*self.complex;
        let frame = c.frame();
        let op = |n| self.operator_unchecked(n);
        match name {
            OperatorName::EpsEta => self.contact.eps_eta(c),
            OperatorName::IXi => self.contact.i_xi(c),
            OperatorName::IPhi => {
                let phi = &self.phi;
                GradedOperator::from_form_map(frame, 0, |f| f.insert_endo(phi)).expect("i_φ")
            }
            OperatorName::L => self.contact.lefschetz(c),
            OperatorName::Lambda => self.metric().adjoint(op(OperatorName::L)),
            OperatorName::LieXi => {
                GradedOperator::anticommutator(op(OperatorName::D), op(OperatorName::IXi))
            }
            OperatorName::LiePhi => op(OperatorName::IPhi)
                .compose(op(OperatorName::D))
                .sub(&op(OperatorName::D).compose(op(OperatorName::IPhi))),
            OperatorName::Deg => GradedOperator::diagonal(frame, |p| int(p as i64)),
            OperatorName::D => self.hodge.d().clone(),
            OperatorName::Delta => self.hodge.delta().clone(),
            OperatorName::Laplacian => self.hodge.laplacian().clone(),
        }
    }

    /// The diagonal operator `(n − deg)`.
    pub fn n_minus_deg(&self) -> &GradedOperator {
        self.n_minus_deg.get_or_init(|| {
            let n = self.n() as i64;
            GradedOperator::diagonal(self.complex.frame(), |p| int(n - p as i64))
        })
    }

    /// `Λ` assembled as a double contraction with the metric-dual bivector of
    /// `Φ`, independent of the adjoint formula.
    pub fn lambda_by_contraction(&self) -> GradedOperator {
        let dim = self.dim();
        let gram1 = self.metric().gram1();
        let sharp = |k: usize| VectorField::new((0..dim).map(|m| gram1.get(k - 1, m)).collect());
        let terms: Vec<(Scalar, VectorField, VectorField)> = self
            .contact
            .phi_form()
            .terms()
            .map(|(m, c)| {
                let ij: Vec<usize> = m.indices().collect();
                (c.clone(), sharp(ij[0]), sharp(ij[1]))
            })
            .collect();
        GradedOperator::from_form_map(self.complex.frame(), -2, |f| {
            let mut out = Form::zero(dim, f.degree().saturating_sub(2));
            if f.degree() < 2 {
                return Ok(out);
            }
            for (c, vi, vj) in &terms {
                out = &out + &f.interior(vi)?.interior(vj)?.scale(c);
            }
            Ok(out)
        })
        .expect("double contraction")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointPairsReport {
    /// `ε_η = i_ξ*`.
    pub eps_eta_adjoint: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_eta_witness: Option<String>,
    /// `Λ = L*`, with `Λ` assembled by contraction.
    pub lambda_adjoint: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_witness: Option<String>,
}

fn residual_witness(a: &GradedOperator, b: &GradedOperator) -> Option<String> {
    a.sub(b)
        .first_nonzero()
        .map(|(p, m)| format!("degree {p}, basis form {m}"))
}

pub fn adjoint_pairs_check(model: &SasakianModel) -> AdjointPairsReport {
    let eps = model.operator_unchecked(OperatorName::EpsEta);
    let i_xi_adj = model.metric().adjoint(model.operator_unchecked(OperatorName::IXi));
    let eps_w = residual_witness(eps, &i_xi_adj);
    let l_adj = model.metric().adjoint(model.operator_unchecked(OperatorName::L));
    let lam_w = residual_witness(&model.lambda_by_contraction(), &l_adj);
    AdjointPairsReport {
        eps_eta_adjoint: eps_w.is_none(),
        eps_eta_witness: eps_w,
        lambda_adjoint: lam_w.is_none(),
        lambda_witness: lam_w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, LieAlgebraSpec};

    fn heis3() -> Arc<InvariantComplex> {
        Arc::new(
            build_complex(LieAlgebraSpec::new("heis3", 3, &[(3, vec![(int(-2), 1, 2)])]).unwrap())
                .unwrap(),
        )
    }

    fn e(idx: &[usize]) -> Form {
        Form::monomial(3, idx, int(1)).unwrap()
    }

    fn phi_from(triplets: &[(usize, usize, i64)]) -> Endomorphism {
        Endomorphism::new(Matrix::from_triplets(
            3,
            3,
            triplets.iter().map(|&(r, c, v)| (r, c, int(v))),
        ))
        .unwrap()
    }

    #[test]
    fn reeb_examples() {
        let c = heis3();
        assert_eq!(reeb(&c, &e(&[3])).unwrap(), VectorField::frame_vector(3, 3));
        let abelian = build_complex(LieAlgebraSpec::new("ab", 3, &[]).unwrap()).unwrap();
        assert!(matches!(reeb(&abelian, &e(&[3])), Err(Error::ContactViolation(_))));
    }

    #[test]
    fn heis3_structure_passes() {
        let c = heis3();
        let phi = phi_from(&[(1, 0, 1), (0, 1, -1)]);
        let m = SasakianModel::new(
            c.clone(),
            e(&[3]),
            MetricStructure::identity(c.frame()),
            Some(phi.clone()),
        )
        .unwrap();
        assert!(m.is_verified(), "{:?}", m.report());
        let derived = SasakianModel::new(c.clone(), e(&[3]), MetricStructure::identity(c.frame()), None)
            .unwrap();
        assert_eq!(derived.phi(), &phi);
        let l = m.operator(OperatorName::L).unwrap();
        assert_eq!(l.apply(&Form::constant(3, int(1))).unwrap(), -&e(&[1, 2]));
        let eps = m.operator(OperatorName::EpsEta).unwrap();
        assert_eq!(eps.apply(&-&e(&[1, 2])).unwrap(), -&e(&[1, 2, 3]));
        let deg = m.operator(OperatorName::Deg).unwrap();
        assert_eq!(deg.matrix(2), &Matrix::scalar_identity(3, &int(2)));
        let adj = adjoint_pairs_check(&m);
        assert!(adj.eps_eta_adjoint && adj.lambda_adjoint);
    }

    #[test]
    fn flipped_phi_fails_square() {
        let c = heis3();
        let phi = phi_from(&[(1, 0, -1), (0, 1, -1)]);
        let m = SasakianModel::new(c.clone(), e(&[3]), MetricStructure::identity(c.frame()), Some(phi))
            .unwrap();
        assert!(!m.report().get("phi_squared").unwrap().passed);
        assert!(matches!(m.operator(OperatorName::L), Err(Error::Unverified(_))));
    }

    #[test]
    fn metric_not_dual_to_eta_breaks_adjointness() {
        let c = heis3();
        let metric =
            MetricStructure::new(c.frame(), Matrix::diagonal(&[int(1), int(1), int(2)]), 1).unwrap();
        let m = SasakianModel::new(c.clone(), e(&[3]), metric, None).unwrap();
        assert!(!m.report().get("metric_dual_of_xi").unwrap().passed);
        let adj = adjoint_pairs_check(&m);
        assert!(!adj.eps_eta_adjoint);
        assert!(adj.lambda_adjoint);
    }
}
