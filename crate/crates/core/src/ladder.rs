//! Spectral families of a Sasakian structure, the eigenvalue ladder
//! `Δ(L^kω) = 4ν_{p,k} L^kω`, the maps `F_p`, `G_p`, admissible eigenvalues and
//! the node/edge data of the spectral figure.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{Form, GradedOperator};
use crate::linalg::{format_scalar, int, Matrix, Scalar};
use crate::sasakian::{OperatorName, SasakianModel};

/// `ν_{p,k} = k(n − p − k + 1)`.
pub fn nu(n: i64, p: i64, k: i64) -> i64 {
    k * (n - p - k + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    /// Annihilated by `d`, `i_ξ`, `ε_η δ`.
    Closed,
    /// Annihilated by `δ`, `ε_η`, `i_ξ d`.
    Coclosed,
}

impl FamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Closed => "closed",
            FamilyTag::Coclosed => "coclosed",
        }
    }

    pub fn dual(self) -> FamilyTag {
        match self {
            FamilyTag::Closed => FamilyTag::Coclosed,
            FamilyTag::Coclosed => FamilyTag::Closed,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn annihilators(model: &SasakianModel, family: FamilyTag) -> [GradedOperator; 3] {
    let op = |n| model.operator_unchecked(n).clone();
    match family {
        FamilyTag::Closed => [
            op(OperatorName::D),
            op(OperatorName::IXi),
            op(OperatorName::EpsEta).compose(&op(OperatorName::Delta)),
        ],
        FamilyTag::Coclosed => [
            op(OperatorName::Delta),
            op(OperatorName::EpsEta),
            op(OperatorName::IXi).compose(&op(OperatorName::D)),
        ],
    }
}

/// `Δω / ω` when `ω` is an eigenform.
pub fn eigenvalue(model: &SasakianModel, form: &Form) -> Result<Option<Scalar>> {
    let (m, c) = match form.terms().next() {
        Some((m, c)) => (*m, c.clone()),
        None => return Err(Error::Precondition("zero form is an eigenform for every ν".into())),
    };
    let image = model.hodge().apply_laplacian(form)?;
    let lambda = image.coeff(m) / c;
    Ok((image == form.scale(&lambda)).then_some(lambda))
}

/// `ν` if `ω` lies in the family, `None` otherwise.
pub fn membership(model: &SasakianModel, form: &Form, family: FamilyTag) -> Result<Option<Scalar>> {
    if form.is_zero() {
        return Err(Error::Precondition("zero form is a member for every ν".into()));
    }
    for a in annihilators(model, family) {
        if !a.apply(form)?.is_zero() {
            return Ok(None);
        }
    }
    Ok(eigenvalue(model, form)?.map(|l| l / int(4)))
}

/// Basis of the joint kernel of the three annihilators in degree `p`, as columns.
pub fn annihilator_kernel(model: &SasakianModel, p: usize, family: FamilyTag) -> Matrix {
    let ops = annihilators(model, family);
    let blocks: Vec<&Matrix> = ops.iter().map(|o| o.matrix(p)).collect();
    let size = model.complex().frame().len(p as i64);
    Matrix::from_columns(size, &Matrix::vstack(&blocks).kernel())
}

fn family_columns(model: &SasakianModel, p: usize, nu: &Scalar, kernel: &Matrix) -> Matrix {
    let size = kernel.nrows();
    if kernel.ncols() == 0 {
        return Matrix::zeros(size, 0);
    }
    let shifted = model
        .hodge()
        .laplacian()
        .matrix(p)
        .sub(&Matrix::scalar_identity(size, &(nu * int(4))));
    let coeffs = shifted.mul(kernel).kernel();
    let cols: Vec<Vec<Scalar>> = coeffs.iter().map(|c| kernel.apply(c)).collect();
    Matrix::from_columns(size, &cols)
}

/// Basis of `Ω^{p,ν}` for the family.
pub fn family_space(model: &SasakianModel, p: usize, nu: &Scalar, family: FamilyTag) -> Vec<Form> {
    let kernel = annihilator_kernel(model, p, family);
    let frame = model.complex().frame();
    family_columns(model, p, nu, &kernel)
        .columns()
        .iter()
        .map(|c| Form::from_vector(frame, p, c))
        .collect()
}

/// Admissible `(k, ν)` pairs in degree `p` for the family.
pub fn allowed_nu(n: usize, p: usize, family: FamilyTag) -> Vec<(i64, i64)> {
    let (n, p) = (n as i64, p as i64);
    let base = match family {
        FamilyTag::Closed => p,
        FamilyTag::Coclosed => p + 1,
    };
    let lower = Integer::div_ceil(&(base - n).max(0), &2);
    let upper = base.div_euclid(2);
    (lower..=upper).map(|k| (k, nu(n, base - 2 * k, k))).collect()
}

pub fn is_admissible(n: usize, p: usize, family: FamilyTag, nu_value: &Scalar) -> bool {
    allowed_nu(n, p, family)
        .iter()
        .any(|(_, v)| &int(*v) == nu_value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderNode {
    pub degree: usize,
    pub nu: Scalar,
    pub family: FamilyTag,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderStep {
    /// Operator producing `node` from the previous node.
    pub operator: &'static str,
    pub node: LadderNode,
}

/// Chain from a harmonic `p`-form through `L^k ω` to `ε_η L^{n−p} ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderTrace {
    pub seed: LadderNode,
    pub steps: Vec<LadderStep>,
    /// `2 L^{k+1} ω = d ε_η L^k ω` for each `k < n − p`.
    pub eps_d_factorization: Vec<bool>,
    /// `2 Λ ε_η L^k ω = δ L^k ω` for each `k ≤ n − p`.
    pub delta_i_xi_factorization: Vec<bool>,
}

impl LadderTrace {
    pub fn last(&self) -> &LadderNode {
        self.steps.last().map(|s| &s.node).unwrap_or(&self.seed)
    }
}

fn require_harmonic(model: &SasakianModel, form: &Form) -> Result<()> {
    if !model.hodge().apply_laplacian(form)?.is_zero() {
        return Err(Error::Precondition(format!("{form} is not harmonic")));
    }
    Ok(())
}

fn node(
    model: &SasakianModel,
    form: Form,
    family: FamilyTag,
    expected: &Scalar,
) -> Result<LadderNode> {
    let degree = form.degree();
    match membership(model, &form, family)? {
        Some(v) if &v == expected => Ok(LadderNode {
            degree,
            nu: v,
            family,
            form,
        }),
        found => Err(Error::Structural(format!(
            "degree {degree} form is not in the {family} family at ν = {} (found {:?})",
            format_scalar(expected),
            found.map(|v| format_scalar(&v))
        ))),
    }
}

pub fn ladder_trace(model: &SasakianModel, form: &Form) -> Result<LadderTrace> {
    model.require_verified()?;
    let n = model.n();
    let p = form.degree();
    if p > n {
        return Err(Error::Precondition(format!("ladder needs p <= n = {n}, got {p}")));
    }
    if form.is_zero() {
        return Err(Error::Precondition("ladder seed must be nonzero".into()));
    }
    require_harmonic(model, form)?;
    let l = model.operator(OperatorName::L)?;
    let eps = model.operator(OperatorName::EpsEta)?;
    let d = model.operator(OperatorName::D)?;
    let delta = model.operator(OperatorName::Delta)?;
    let lambda = model.operator(OperatorName::Lambda)?;
    let seed = node(model, form.clone(), FamilyTag::Closed, &Scalar::zero())?;
    let mut steps = Vec::new();
    let mut eps_d = Vec::new();
    let mut delta_ixi = Vec::new();
    let mut current = form.clone();
    let top = n - p;
    for k in 0..=top {
        let eta_current = eps.apply(&current)?;
        delta_ixi.push(lambda.apply(&eta_current)?.scale(&int(2)) == delta.apply(&current)?);
        if k == top {
            if eta_current.is_zero() {
                return Err(Error::Structural("ε_η L^{n-p} ω vanishes".into()));
            }
            steps.push(LadderStep {
                operator: "eps_eta",
                node: node(model, eta_current, FamilyTag::Coclosed, &Scalar::zero())?,
            });
            break;
        }
        let next = l.apply(&current)?;
        if next.is_zero() {
            return Err(Error::Structural(format!("L^{} ω vanishes", k + 1)));
        }
        eps_d.push(d.apply(&eta_current)? == next.scale(&int(2)));
        let expected = int(nu(n as i64, p as i64, k as i64 + 1));
        steps.push(LadderStep {
            operator: "L",
            node: node(model, next.clone(), FamilyTag::Closed, &expected)?,
        });
        current = next;
    }
    if !eps_d.iter().chain(&delta_ixi).all(|b| *b) {
        return Err(Error::Structural("ε_η/d or δ/i_ξ factorisation fails on the ladder".into()));
    }
    Ok(LadderTrace {
        seed,
        steps,
        eps_d_factorization: eps_d,
        delta_i_xi_factorization: delta_ixi,
    })
}

/// `F_p = ε_η L^{n−p}` on harmonic `p`-forms.
pub fn lefschetz_f(model: &SasakianModel, p: usize, form: &Form) -> Result<Form> {
    model.require_verified()?;
    let n = model.n();
    if p > n || form.degree() != p {
        return Err(Error::Precondition(format!(
            "F_p needs a degree p <= {n} form, got p = {p}, degree {}",
            form.degree()
        )));
    }
    require_harmonic(model, form)?;
    let l = model.operator(OperatorName::L)?;
    let eps = model.operator(OperatorName::EpsEta)?;
    eps.apply(&l.pow((n - p) as u32).apply(form)?)
}

/// `G_p = Λ^{n−p} i_ξ` on harmonic `(2n+1−p)`-forms.
pub fn lefschetz_g(model: &SasakianModel, p: usize, form: &Form) -> Result<Form> {
    model.require_verified()?;
    let n = model.n();
    if p > n || form.degree() != 2 * n + 1 - p {
        return Err(Error::Precondition(format!(
            "G_p needs a degree {} form, got {}",
            2 * n + 1 - p,
            form.degree()
        )));
    }
    require_harmonic(model, form)?;
    let lambda = model.operator(OperatorName::Lambda)?;
    let i_xi = model.operator(OperatorName::IXi)?;
    lambda.pow((n - p) as u32).apply(&i_xi.apply(form)?)
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, i| acc * i)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub degree: usize,
    pub factor: String,
    pub harmonic_dim: usize,
    /// `G_p F_p = (n−p)!² I` on harmonic `p`-forms.
    pub g_after_f: bool,
    /// `F_p G_p = (n−p)!² I` on harmonic `(2n+1−p)`-forms.
    pub f_after_g: bool,
}

pub fn composition_check(model: &SasakianModel, p: usize) -> Result<CompositionReport> {
    let n = model.n();
    let f = factorial(n - p);
    let factor = Scalar::from_integer(&f * &f);
    let hodge = model.hodge();
    let low = hodge.harmonic_basis(p);
    let high = hodge.harmonic_basis(2 * n + 1 - p);
    let mut g_after_f = true;
    for w in &low {
        let image = lefschetz_f(model, p, w)?;
        g_after_f &= lefschetz_g(model, p, &image)? == w.scale(&factor);
    }
    let mut f_after_g = true;
    for w in &high {
        let image = lefschetz_g(model, p, w)?;
        f_after_g &= lefschetz_f(model, p, &image)? == w.scale(&factor);
    }
    Ok(CompositionReport {
        degree: p,
        factor: format_scalar(&factor),
        harmonic_dim: low.len(),
        g_after_f,
        f_after_g,
    })
}

/// Every rational eigenvalue of `Δ_p` with its multiplicity, found by testing
/// all candidates `m / D` within the Gershgorin bound, where `D` clears the
/// denominators of `Δ_p` (so eigenvalues of `DΔ_p` are algebraic integers).
pub fn rational_spectrum(model: &SasakianModel, p: usize) -> Vec<(Scalar, usize)> {
    let lap = model.hodge().laplacian().matrix(p);
    let size = lap.nrows();
    if size == 0 {
        return Vec::new();
    }
    let den = lap.denominator_lcm();
    let scaled = lap.scale(&Scalar::from_integer(den.clone()));
    let bound = scaled
        .rows_iter()
        .map(|row| row.iter().fold(Scalar::zero(), |acc, (_, v)| acc + v.abs()))
        .max()
        .unwrap_or_else(Scalar::zero)
        .to_integer()
        .to_i64()
        .expect("bounded spectrum");
    // Δ is positive semidefinite, so only m ≥ 0 can occur.
    let found: Vec<(Scalar, usize)> = (0..=bound)
        .into_par_iter()
        .filter_map(|m| {
            let lambda = Scalar::new(BigInt::from(m), den.clone());
            let shifted = lap.sub(&Matrix::scalar_identity(size, &lambda));
            let mult = size - shifted.rank();
            (mult > 0).then_some((lambda, mult))
        })
        .collect();
    found
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureNode {
    pub p: usize,
    pub nu: String,
    pub family: FamilyTag,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureEdge {
    pub p1: usize,
    pub nu1: String,
    pub family1: FamilyTag,
    pub p2: usize,
    pub nu2: String,
    pub family2: FamilyTag,
    pub operator: String,
    /// Endpoint spaces have equal dimension.
    pub dims_match: bool,
}

/// Per (degree, family): dimension of the annihilator kernel and the sum of
/// the admissible eigenspace dimensions inside it. Equality certifies that no
/// eigenform of the family has an inadmissible eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelAccount {
    pub p: usize,
    pub family: FamilyTag,
    pub kernel_dim: usize,
    pub admissible_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureData {
    pub n: usize,
    pub nodes: Vec<FigureNode>,
    pub edges: Vec<FigureEdge>,
    pub accounts: Vec<KernelAccount>,
}

pub fn figure_data(model: &SasakianModel) -> Result<FigureData> {
    model.require_verified()?;
    let n = model.n();
    let dim = model.dim();
    let slots: Vec<(usize, FamilyTag)> = (0..=dim)
        .flat_map(|p| [(p, FamilyTag::Closed), (p, FamilyTag::Coclosed)])
        .collect();
    let per_slot: Vec<(Vec<FigureNode>, KernelAccount)> = slots
        .par_iter()
        .map(|&(p, family)| {
            let kernel = annihilator_kernel(model, p, family);
            let mut nodes = Vec::new();
            let mut total = 0;
            for (_, v) in allowed_nu(n, p, family) {
                let cols = family_columns(model, p, &int(v), &kernel);
                total += cols.ncols();
                if cols.ncols() > 0 {
                    nodes.push(FigureNode {
                        p,
                        nu: v.to_string(),
                        family,
                        dim: cols.ncols(),
                    });
                }
            }
            let account = KernelAccount {
                p,
                family,
                kernel_dim: kernel.ncols(),
                admissible_dim: total,
            };
            (nodes, account)
        })
        .collect();
    let mut nodes = Vec::new();
    let mut accounts = Vec::new();
    for (ns, a) in per_slot {
        nodes.extend(ns);
        accounts.push(a);
    }
    let index: BTreeMap<(usize, String, FamilyTag), usize> = nodes
        .iter()
        .map(|nd| ((nd.p, nd.nu.clone(), nd.family), nd.dim))
        .collect();
    let mut edges = Vec::new();
    for nd in &nodes {
        let v: i64 = nd.nu.parse().expect("integer ν");
        let target = match nd.family {
            FamilyTag::Coclosed if v != 0 => Some((nd.p + 1, v, FamilyTag::Closed, "d|delta")),
            FamilyTag::Closed => Some((
                nd.p + 1,
                v + n as i64 - nd.p as i64,
                FamilyTag::Coclosed,
                "eps_eta|i_xi",
            )),
            _ => None,
        };
        if let Some((p2, v2, f2, label)) = target {
            if let Some(&dim2) = index.get(&(p2, v2.to_string(), f2)) {
                edges.push(FigureEdge {
                    p1: nd.p,
                    nu1: nd.nu.clone(),
                    family1: nd.family,
                    p2,
                    nu2: v2.to_string(),
                    family2: f2,
                    operator: label.to_string(),
                    dims_match: dim2 == nd.dim,
                });
            }
        }
    }
    Ok(FigureData {
        n,
        nodes,
        edges,
        accounts,
    })
}

impl FigureData {
    pub fn node(&self, p: usize, nu: i64, family: FamilyTag) -> Option<&FigureNode> {
        let key = nu.to_string();
        self.nodes
            .iter()
            .find(|nd| nd.p == p && nd.nu == key && nd.family == family)
    }

    pub fn all_admissible(&self) -> bool {
        self.nodes.iter().all(|nd| {
            is_admissible(self.n, nd.p, nd.family, &int(nd.nu.parse().expect("integer ν")))
        })
    }

    pub fn scan_complete(&self) -> bool {
        self.accounts.iter().all(|a| a.kernel_dim == a.admissible_dim)
    }

    /// Follows edges from `closed(p, 0)`; returns the visited `(p, ν, family)`
    /// positions if the walk ends at `coclosed(2n+1−p, 0)`.
    pub fn walk_from_harmonic(&self, p: usize) -> Option<Vec<(usize, String, FamilyTag)>> {
        let mut at = (p, "0".to_string(), FamilyTag::Closed);
        self.node(p, 0, FamilyTag::Closed)?;
        let mut path = vec![at.clone()];
        loop {
            let next = self.edges.iter().find(|e| {
                (e.p1, &e.nu1, e.family1) == (at.0, &at.1, at.2)
                    && (at.2 == FamilyTag::Closed || e.operator == "d|delta")
            });
            match next {
                Some(e) => {
                    at = (e.p2, e.nu2.clone(), e.family2);
                    path.push(at.clone());
                }
                None => break,
            }
            if path.len() > 2 * self.n + 3 {
                return None;
            }
        }
        let end_ok = at == (2 * self.n + 1 - p, "0".to_string(), FamilyTag::Coclosed);
        end_ok.then_some(path)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("#nodes\np\tnu\tfamily\tdim\n");
        for nd in &self.nodes {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", nd.p, nd.nu, nd.family, nd.dim);
        }
        out.push_str("#edges\np1\tnu1\tp2\tnu2\toperator\n");
        for e in &self.edges {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", e.p1, e.nu1, e.p2, e.nu2, e.operator);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn admissible_sets() {
        assert_eq!(allowed_nu(5, 0, FamilyTag::Closed), vec![(0, 0)]);
        assert_eq!(allowed_nu(1, 1, FamilyTag::Coclosed), vec![(1, 1)]);
        assert_eq!(
            allowed_nu(5, 6, FamilyTag::Closed),
            vec![(1, nu(5, 4, 1)), (2, nu(5, 2, 2)), (3, nu(5, 0, 3))]
        );
        assert_eq!(allowed_nu(5, 6, FamilyTag::Closed), vec![(1, 1), (2, 4), (3, 9)]);
    }
}
