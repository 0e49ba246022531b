//! Catalog of commutator identities checked as exact per-degree matrix
//! equalities, plus the harmonic-form properties and the auxiliary map `𝒜_p`.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{Form, GradedOperator};
use crate::linalg::{format_scalar, int, Scalar};
use crate::sasakian::{OperatorName, SasakianModel};

/// Formal operator word.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Op(OperatorName),
    /// `(n − deg − offset)`.
    NMinusDeg(i64),
    /// Product, leftmost factor applied last.
    Compose(Vec<Expr>),
    Comm(Box<Expr>, Box<Expr>),
    Anti(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Linear combination; an empty sum is the zero operator of the given shift.
    Sum(Vec<(Scalar, Expr)>, i64),
}

use Expr::*;
use OperatorName as O;

fn op(name: OperatorName) -> Expr {
    Op(name)
}

fn comp(parts: Vec<Expr>) -> Expr {
    Compose(parts)
}

fn comm(a: Expr, b: Expr) -> Expr {
    Comm(Box::new(a), Box::new(b))
}

fn anti(a: Expr, b: Expr) -> Expr {
    Anti(Box::new(a), Box::new(b))
}

fn pow(a: Expr, k: u32) -> Expr {
    if k == 1 {
        a
    } else {
        Pow(Box::new(a), k)
    }
}

fn sum(terms: Vec<(i64, Expr)>) -> Expr {
    Sum(terms.into_iter().map(|(c, e)| (int(c), e)).collect(), 0)
}

fn zero(shift: i64) -> Expr {
    Sum(Vec::new(), shift)
}

impl Expr {
    pub fn shift(&self) -> i64 {
        match self {
            Op(name) => match name {
                O::EpsEta | O::D | O::LiePhi => 1,
                O::IXi | O::Delta => -1,
                O::L => 2,
                O::Lambda => -2,
                O::IPhi | O::LieXi | O::Deg | O::Laplacian => 0,
            },
            NMinusDeg(_) => 0,
            Compose(parts) => parts.iter().map(Expr::shift).sum(),
            Comm(a, b) | Anti(a, b) => a.shift() + b.shift(),
            Pow(a, k) => a.shift() * *k as i64,
            Sum(terms, s) => terms.first().map(|(_, e)| e.shift()).unwrap_or(*s),
        }
    }

    pub fn eval(&self, model: &SasakianModel) -> GradedOperator {
        let frame = model.complex().frame();
        match self {
            Op(name) => model.operator_unchecked(*name).clone(),
            NMinusDeg(offset) => {
                let n = model.n() as i64;
                GradedOperator::diagonal(frame, |p| int(n - p as i64 - offset))
            }
            Compose(parts) => {
                let mut it = parts.iter().rev();
                let mut acc = it.next().expect("nonempty product").eval(model);
                for e in it {
                    acc = e.eval(model).compose(&acc);
                }
                acc
            }
            Comm(a, b) => GradedOperator::commutator(&a.eval(model), &b.eval(model)),
            Anti(a, b) => GradedOperator::anticommutator(&a.eval(model), &b.eval(model)),
            Pow(a, k) => a.eval(model).pow(*k),
            Sum(terms, _) => {
                let mut acc = GradedOperator::zero(frame, self.shift());
                for (c, e) in terms {
                    acc = acc.add(&e.eval(model).scale(c));
                }
                acc
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op(name) => write!(f, "{name}"),
            NMinusDeg(0) => write!(f, "(n-deg)"),
            NMinusDeg(k) => write!(f, "(n-deg-{k})"),
            Compose(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Comm(a, b) => write!(f, "[{a}, {b}]"),
            Anti(a, b) => write!(f, "{{{a}, {b}}}"),
            Pow(a, k) => write!(f, "{a}^{k}"),
            Sum(terms, _) if terms.is_empty() => write!(f, "0"),
            Sum(terms, _) => {
                for (i, (c, e)) in terms.iter().enumerate() {
                    let neg = c < &Scalar::zero();
                    let mag = if neg { -c.clone() } else { c.clone() };
                    match (i, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if !mag.is_one() {
                        write!(f, "{}*", format_scalar(&mag))?;
                    }
                    if matches!(e, Sum(..)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityCatalogEntry {
    pub id: String,
    pub left: Expr,
    pub right: Expr,
}

impl IdentityCatalogEntry {
    fn new(id: impl Into<String>, left: Expr, right: Expr) -> Self {
        let entry = IdentityCatalogEntry {
            id: id.into(),
            left,
            right,
        };
        debug_assert_eq!(entry.left.shift(), entry.right.shift(), "{}", entry.id);
        entry
    }

    pub fn formula(&self) -> String {
        format!("{} = {}", self.left, self.right)
    }
}

/// `[δ, L^k] = −k L^{k−1} 𝓛_φ + 2k ε_η L^{k−1} (n − deg − (k−1))`.
fn delta_lk(k: u32) -> IdentityCatalogEntry {
    let lk1 = |rest: Vec<Expr>| {
        let mut parts = Vec::new();
        if k > 1 {
            parts.push(pow(op(O::L), k - 1));
        }
        parts.extend(rest);
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            comp(parts)
        }
    };
    let mut eps_part = vec![op(O::EpsEta)];
    if k > 1 {
        eps_part.push(pow(op(O::L), k - 1));
    }
    eps_part.push(NMinusDeg(k as i64 - 1));
    IdentityCatalogEntry::new(
        format!("i{k}"),
        comm(op(O::Delta), if k == 1 { op(O::L) } else { pow(op(O::L), k) }),
        sum(vec![
            (-(k as i64), lk1(vec![op(O::LiePhi)])),
            (2 * k as i64, comp(eps_part)),
        ]),
    )
}

/// Full catalog for contact half-dimension `n`.
pub fn catalog(n: usize) -> Vec<IdentityCatalogEntry> {
    let mut out = vec![
        IdentityCatalogEntry::new(
            "a",
            comm(op(O::D), op(O::Lambda)),
            sum(vec![
                (1, comm(op(O::IPhi), op(O::Delta))),
                (-2, comp(vec![NMinusDeg(0), op(O::IXi)])),
            ]),
        ),
        IdentityCatalogEntry::new(
            "b",
            comm(op(O::Laplacian), op(O::IXi)),
            sum(vec![
                (2, comm(op(O::IPhi), op(O::Delta))),
                (-4, comp(vec![NMinusDeg(0), op(O::IXi)])),
            ]),
        ),
        IdentityCatalogEntry::new(
            "c",
            comm(op(O::Laplacian), op(O::IPhi)),
            sum(vec![(
                -2,
                sum(vec![
                    (1, op(O::LieXi)),
                    (-1, comp(vec![op(O::IXi), op(O::D)])),
                    (1, comp(vec![op(O::EpsEta), op(O::Delta)])),
                ]),
            )]),
        ),
        IdentityCatalogEntry::new(
            "d",
            comm(op(O::Laplacian), op(O::EpsEta)),
            sum(vec![
                (-2, op(O::LiePhi)),
                (4, comp(vec![op(O::EpsEta), NMinusDeg(0)])),
            ]),
        ),
    ];
    for other in [O::EpsEta, O::IXi, O::L, O::Lambda] {
        let e = comm(op(O::IPhi), op(other));
        let s = e.shift();
        out.push(IdentityCatalogEntry::new(format!("e.i_phi.{other}"), e, zero(s)));
    }
    for other in [O::D, O::Delta, O::EpsEta, O::IXi, O::L, O::Lambda, O::IPhi] {
        let e = comm(op(O::LieXi), op(other));
        let s = e.shift();
        out.push(IdentityCatalogEntry::new(format!("e.lie_xi.{other}"), e, zero(s)));
    }
    out.push(IdentityCatalogEntry::new(
        "f1",
        comm(op(O::IPhi), op(O::EpsEta)),
        zero(1),
    ));
    out.push(IdentityCatalogEntry::new(
        "f2",
        comm(op(O::IPhi), op(O::IXi)),
        zero(-1),
    ));
    out.push(IdentityCatalogEntry::new(
        "g",
        pow(op(O::LiePhi), 2),
        sum(vec![(-2, comp(vec![op(O::L), op(O::LieXi)]))]),
    ));
    out.push(IdentityCatalogEntry::new(
        "h",
        anti(op(O::Delta), op(O::EpsEta)),
        sum(vec![(-1, op(O::LieXi))]),
    ));
    for k in 1..=n as u32 {
        out.push(delta_lk(k));
    }
    out
}

pub fn catalog_entry(n: usize, id: &str) -> Result<IdentityCatalogEntry> {
    catalog(n)
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResidual {
    pub degree: usize,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub id: String,
    pub formula: String,
    pub passed: bool,
    pub degrees: Vec<DegreeResidual>,
    /// First degree and basis monomial on which the two sides differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

fn residual(entry: &IdentityCatalogEntry, model: &SasakianModel) -> ResidualReport {
    let diff = entry.left.eval(model).sub(&entry.right.eval(model));
    let degrees = diff
        .matrices()
        .iter()
        .enumerate()
        .map(|(degree, m)| DegreeResidual {
            degree,
            zero: m.is_zero(),
        })
        .collect();
    let counterexample = diff
        .first_nonzero()
        .map(|(p, m)| format!("degree {p}, basis form {m}"));
    ResidualReport {
        id: entry.id.clone(),
        formula: entry.formula(),
        passed: counterexample.is_none(),
        degrees,
        counterexample,
    }
}

/// Checks one identity on a verified structure.
pub fn verify_identity(model: &SasakianModel, id: &str) -> Result<ResidualReport> {
    model.require_verified()?;
    Ok(residual(&catalog_entry(model.n(), id)?, model))
}

/// Runs the whole catalog. With `diagnostic` the structure need not be
/// verified and failures are simply reported.
pub fn verify_all(model: &SasakianModel, diagnostic: bool) -> Result<Vec<ResidualReport>> {
    if !diagnostic {
        model.require_verified()?;
    }
    let entries = catalog(model.n());
    Ok(entries.par_iter().map(|e| residual(e, model)).collect())
}

/// Identity (i) at `k = 1` against the metric adjoint of (a): both sides of
/// one must be minus the adjoints of the other's sides.
pub fn dual_cross_check(model: &SasakianModel) -> Result<bool> {
    let a = catalog_entry(model.n(), "a")?;
    let i1 = delta_lk(1);
    let metric = model.metric();
    let minus = -Scalar::one();
    let left = metric.adjoint(&a.left.eval(model)) == i1.left.eval(model).scale(&minus);
    let right = metric.adjoint(&a.right.eval(model)) == i1.right.eval(model).scale(&minus);
    Ok(left && right)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TachibanaReport {
    pub degree: usize,
    pub harmonic_dim: usize,
    pub i_phi_harmonic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_xi_vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_eta_vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_vanishes: Option<bool>,
}

impl TachibanaReport {
    pub fn passed(&self) -> bool {
        self.i_phi_harmonic
            && [self.i_xi_vanishes, self.eps_eta_vanishes, self.lambda_vanishes, self.l_vanishes]
                .iter()
                .all(|c| c.unwrap_or(true))
    }
}

/// Properties of harmonic `p`-forms on a Sasakian structure.
pub fn verify_tachibana(model: &SasakianModel, p: usize) -> Result<TachibanaReport> {
    model.require_verified()?;
    if p > model.dim() {
        return Err(Error::Precondition(format!("degree {p} outside 0..={}", model.dim())));
    }
    let n = model.n();
    let hodge = model.hodge();
    let basis = hodge.harmonic_basis(p);
    let all_zero = |name: OperatorName| -> Result<bool> {
        let o = model.operator(name)?;
        for w in &basis {
            if !o.apply(w)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let i_phi = model.operator(OperatorName::IPhi)?;
    let mut i_phi_harmonic = true;
    for w in &basis {
        if !hodge.apply_laplacian(&i_phi.apply(w)?)?.is_zero() {
            i_phi_harmonic = false;
        }
    }
    Ok(TachibanaReport {
        degree: p,
        harmonic_dim: basis.len(),
        i_phi_harmonic,
        i_xi_vanishes: (p <= n).then(|| all_zero(OperatorName::IXi)).transpose()?,
        eps_eta_vanishes: (p > n).then(|| all_zero(OperatorName::EpsEta)).transpose()?,
        lambda_vanishes: (p <= n + 1).then(|| all_zero(OperatorName::Lambda)).transpose()?,
        l_vanishes: (p >= n).then(|| all_zero(OperatorName::L)).transpose()?,
    })
}

/// `𝒜_p α = (n−p+1) L^{n−p} d i_φ d α + L^{n−p+1} Δ α` for `α` of degree `p − 1`.
pub fn aux_map(model: &SasakianModel, p: usize, alpha: &Form) -> Result<Form> {
    model.require_verified()?;
    let n = model.n();
    if p == 0 || p > n {
        return Err(Error::Precondition(format!("𝒜_p needs 1 <= p <= n = {n}, got {p}")));
    }
    if alpha.degree() + 1 != p {
        return Err(Error::Degree {
            expected: p - 1,
            found: alpha.degree(),
        });
    }
    let l = model.operator(OperatorName::L)?;
    let d = model.operator(OperatorName::D)?;
    let i_phi = model.operator(OperatorName::IPhi)?;
    let lap = model.operator(OperatorName::Laplacian)?;
    let first = l
        .pow((n - p) as u32)
        .apply(&d.apply(&i_phi.apply(&d.apply(alpha)?)?)?)?
        .scale(&int((n - p + 1) as i64));
    let second = l.pow((n - p + 1) as u32).apply(&lap.apply(alpha)?)?;
    first.try_add(&second)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxCheck {
    pub degree: usize,
    /// `𝓛_ξ α = 0` and `δ α = 0`.
    pub hypotheses: bool,
    pub coclosed: bool,
    pub commutes_with_laplacian: bool,
    /// `L^{n−p+1} d Δ α = 0`.
    pub vanishing_hypothesis: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishes: Option<bool>,
}

impl AuxCheck {
    /// Conclusions hold whenever their hypotheses do.
    pub fn consistent(&self) -> bool {
        !self.hypotheses
            || (self.coclosed
                && self.commutes_with_laplacian
                && self.vanishes.unwrap_or(true))
    }
}

pub fn aux_check(model: &SasakianModel, p: usize, alpha: &Form) -> Result<AuxCheck> {
    let a = aux_map(model, p, alpha)?;
    let n = model.n();
    let lie_xi = model.operator(OperatorName::LieXi)?;
    let delta = model.operator(OperatorName::Delta)?;
    let lap = model.operator(OperatorName::Laplacian)?;
    let d = model.operator(OperatorName::D)?;
    let l = model.operator(OperatorName::L)?;
    let hypotheses = lie_xi.apply(alpha)?.is_zero() && delta.apply(alpha)?.is_zero();
    let coclosed = delta.apply(&a)?.is_zero();
    let lap_alpha = lap.apply(alpha)?;
    let commutes = lap.apply(&a)? == aux_map(model, p, &lap_alpha)?;
    let vanishing_hypothesis = hypotheses
        && l
            .pow((n - p + 1) as u32)
            .apply(&d.apply(&lap_alpha)?)?
            .is_zero();
    Ok(AuxCheck {
        degree: p,
        hypotheses,
        coclosed,
        commutes_with_laplacian: commutes,
        vanishing_hypothesis,
        vanishes: vanishing_hypothesis.then(|| a.is_zero()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes_and_formulas() {
        let cat = catalog(2);
        for e in &cat {
            assert_eq!(e.left.shift(), e.right.shift(), "{}", e.id);
        }
        let ids: Vec<&str> = cat.iter().map(|e| e.id.as_str()).collect();
        for id in ["a", "b", "c", "d", "f1", "f2", "g", "h", "i1", "i2"] {
            assert!(ids.contains(&id));
        }
        assert!(!ids.contains(&"i3"));
        assert_eq!(
            catalog_entry(2, "a").unwrap().formula(),
            "[d, Lambda] = [i_phi, delta] - 2*(n-deg) i_xi"
        );
        assert_eq!(
            catalog_entry(2, "i2").unwrap().formula(),
            "[delta, L^2] = -2*L lie_phi + 4*eps_eta L (n-deg-1)"
        );
        assert!(matches!(catalog_entry(2, "zz"), Err(Error::UnknownIdentity(_))));
    }
}
