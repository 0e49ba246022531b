//! Exterior algebra over an invariant coframe `e1, …, e_dim`.
//!
//! Monomials are bitmasks ([`MultiIndex`]); bases of each degree are listed
//! in lexicographic order of their index tuples and every matrix in the crate
//! uses that order. Wedge and contraction signs come from counting
//! transpositions with popcounts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{format_scalar, Matrix, Scalar};

/// Largest supported frame dimension (monomials are `u32` bitmasks and the
/// frame keeps a `2^dim` position table).
pub const MAX_DIM: usize = 16;

/// Strictly increasing tuple of generator indices, stored as a bitmask
/// (generator `i` is bit `i - 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i <= last || i > MAX_DIM {
                return Err(Error::MultiIndex(indices.to_vec()));
            }
            bits |= 1 << (i - 1);
            last = i;
        }
        Ok(MultiIndex(bits))
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    /// Generator indices in increasing order (1-based).
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Sign and monomial of `e^self ∧ e^other`; `None` if they share a factor.
    pub fn wedge(self, other: MultiIndex) -> Option<(MultiIndex, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in other.indices() {
            // factors of `self` lying above j must hop over it
            swaps += (self.0 >> j).count_ones();
        }
        Some((MultiIndex(self.0 | other.0), swaps % 2 == 1))
    }

    /// `i_{E_i} e^self`: remaining monomial and whether the sign is negative.
    pub fn contract(self, i: usize) -> Option<(MultiIndex, bool)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.0 & ((1u32 << (i - 1)) - 1)).count_ones();
        Some((MultiIndex(self.0 & !(1 << (i - 1))), below % 2 == 1))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Lexicographically ordered monomial bases of every degree.
#[derive(Debug)]
pub struct Frame {
    dim: usize,
    bases: Vec<Vec<MultiIndex>>,
    position: Vec<u32>,
}

fn combinations(dim: usize, p: usize) -> Vec<MultiIndex> {
    fn rec(start: usize, dim: usize, left: usize, bits: u32, out: &mut Vec<MultiIndex>) {
        if left == 0 {
            out.push(MultiIndex(bits));
            return;
        }
        for i in start..=dim + 1 - left {
            rec(i + 1, dim, left - 1, bits | 1 << (i - 1), out);
        }
    }
    let mut out = Vec::new();
    rec(1, dim, p, 0, &mut out);
    out
}

impl Frame {
    pub fn new(dim: usize) -> Result<Arc<Frame>> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let bases: Vec<Vec<MultiIndex>> = (0..=dim).map(|p| combinations(dim, p)).collect();
        let mut position = vec![0u32; 1 << dim];
        for basis in &bases {
            for (k, m) in basis.iter().enumerate() {
                position[m.0 as usize] = k as u32;
            }
        }
        Ok(Arc::new(Frame {
            dim,
            bases,
            position,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self, p: usize) -> &[MultiIndex] {
        &self.bases[p]
    }

    /// `C(dim, p)`, zero when `p` is outside `0..=dim`.
    pub fn len(&self, p: i64) -> usize {
        if p < 0 || p as usize > self.dim {
            0
        } else {
            self.bases[p as usize].len()
        }
    }

    pub fn index_of(&self, m: MultiIndex) -> usize {
        self.position[m.0 as usize] as usize
    }

    pub fn top(&self) -> MultiIndex {
        MultiIndex(((1u64 << self.dim) - 1) as u32)
    }

    pub fn monomial(&self, m: MultiIndex) -> Form {
        Form::from_terms(self.dim, m.degree(), [(m, Scalar::one())])
    }
}

/// Homogeneous exterior form: sparse exact coefficients over monomials of a
/// single degree. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Form {
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Scalar) -> Form {
        Form::from_terms(dim, 0, [(MultiIndex::EMPTY, value)])
    }

    /// The coframe generator `e^i`.
    pub fn generator(dim: usize, i: usize) -> Result<Form> {
        Form::monomial(dim, &[i], Scalar::one())
    }

    pub fn monomial(dim: usize, indices: &[usize], coeff: Scalar) -> Result<Form> {
        let m = MultiIndex::from_indices(indices)?;
        if m.max_index() > dim {
            return Err(Error::MultiIndex(indices.to_vec()));
        }
        Ok(Form::from_terms(dim, m.degree(), [(m, coeff)]))
    }

    /// Sums the given terms; every monomial must have length `degree`.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Form {
        let mut coeffs: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "monomial {m} in a degree-{degree} form");
            assert!(m.max_index() <= dim, "monomial {m} outside dim {dim}");
            *coeffs.entry(m).or_insert_with(Scalar::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Form {
            dim,
            degree,
            coeffs,
        }
    }

    pub fn from_vector(frame: &Frame, degree: usize, values: &[Scalar]) -> Form {
        let basis = frame.basis(degree);
        assert_eq!(values.len(), basis.len(), "coefficient vector length");
        Form {
            dim: frame.dim(),
            degree,
            coeffs: basis
                .iter()
                .zip(values)
                .filter(|(_, v)| !v.is_zero())
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }

    pub fn to_vector(&self, frame: &Frame) -> Vec<Scalar> {
        assert_eq!(self.dim, frame.dim(), "form and frame dimensions differ");
        let mut out = vec![Scalar::zero(); frame.len(self.degree as i64)];
        for (m, c) in &self.coeffs {
            out[frame.index_of(*m)] = c.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: MultiIndex) -> Scalar {
        self.coeffs.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        Ok(Form::from_terms(
            self.dim,
            self.degree,
            self.terms()
                .chain(other.terms())
                .map(|(m, c)| (*m, c.clone())),
        ))
    }

    pub fn scale(&self, factor: &Scalar) -> Form {
        Form::from_terms(
            self.dim,
            self.degree,
            self.terms().map(|(m, c)| (*m, c * factor)),
        )
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Ok(Form::zero(self.dim, degree));
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if let Some((m, negative)) = a.wedge(*b) {
                    let v = x * y;
                    terms.push((m, if negative { -v } else { v }));
                }
            }
        }
        Ok(Form::from_terms(self.dim, degree, terms))
    }

    /// Contraction `i_v` in the first slot.
    pub fn interior(&self, v: &VectorField) -> Result<Form> {
        if v.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.dim(),
            });
        }
        if self.degree == 0 {
            return Ok(Form::zero(self.dim, 0));
        }
        let mut terms = Vec::new();
        for (m, c) in self.terms() {
            for i in m.indices() {
                let vi = &v.coeffs[i - 1];
                if vi.is_zero() {
                    continue;
                }
                let (rest, negative) = m.contract(i).expect("index present");
                let value = c * vi;
                terms.push((rest, if negative { -value } else { value }));
            }
        }
        Ok(Form::from_terms(self.dim, self.degree - 1, terms))
    }

    /// Degree-0 derivation `i_ψ` determined by `i_ψ e^k = e^k ∘ ψ`.
    pub fn insert_endo(&self, psi: &Endomorphism) -> Result<Form> {
        if psi.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: psi.dim(),
            });
        }
        let mut terms = Vec::new();
        for (m, c) in self.terms() {
            for (pos, k) in m.indices().enumerate() {
                let rest = MultiIndex(m.0 & !(1 << (k - 1)));
                for (j, entry) in psi.matrix.row(k - 1) {
                    let j = j + 1;
                    if rest.contains(j) {
                        continue;
                    }
                    // e^{i1}..e^j(at pos)..  =  (-1)^pos e^j ∧ e^rest
                    let (out, negative) = MultiIndex::from_bits(1 << (j - 1))
                        .wedge(rest)
                        .expect("disjoint");
                    let value = c * entry;
                    let flip = negative ^ (pos % 2 == 1);
                    terms.push((out, if flip { -value } else { value }));
                }
            }
        }
        Ok(Form::from_terms(self.dim, self.degree, terms))
    }
}

impl std::ops::Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("adding forms of different spaces")
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_add(&-rhs).expect("subtracting forms of different spaces")
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[deg {}]({self})", self.degree)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| format!("{}*{m}", format_scalar(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.wedge(b)
}

pub fn interior(v: &VectorField, a: &Form) -> Result<Form> {
    a.interior(v)
}

pub fn insert_endo(psi: &Endomorphism, a: &Form) -> Result<Form> {
    a.insert_endo(psi)
}

/// Invariant vector field, coefficients in the frame `E1, …, E_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    coeffs: Vec<Scalar>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        VectorField { coeffs }
    }

    pub fn frame_vector(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); dim];
        coeffs[i - 1] = Scalar::one();
        VectorField { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField {
            coeffs: vec![Scalar::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Endomorphism of the tangent frame; column `j` is the image of `E_{j+1}`,
/// so entry `(k, j)` is `e^{k+1}(ψ E_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    matrix: Matrix,
}

impl Endomorphism {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(Endomorphism { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Endomorphism {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &VectorField) -> VectorField {
        VectorField::new(self.matrix.apply(v.coeffs()))
    }
}

/// Family of exact matrices, one per source degree, each mapping degree `p`
/// to degree `p + shift`. Matrices for out-of-range targets have zero rows.
#[derive(Clone, Debug)]
pub struct GradedOperator {
    frame: Arc<Frame>,
    shift: i64,
    mats: Vec<Matrix>,
}

impl PartialEq for GradedOperator {
    fn eq(&self, other: &Self) -> bool {
        self.frame.dim() == other.frame.dim() && self.shift == other.shift && self.mats == other.mats
    }
}

/// Matrix of a linear form-map on degree `p`: column `j` is the image of the
/// `j`-th lexicographic basis monomial.
pub fn as_matrix<F>(frame: &Frame, p: usize, shift: i64, op: F) -> Result<Matrix>
where
    F: Fn(&Form) -> Result<Form>,
{
    let target = p as i64 + shift;
    let rows = frame.len(target);
    let mut triplets = Vec::new();
    for (j, m) in frame.basis(p).iter().enumerate() {
        let image = op(&frame.monomial(*m))?;
        if rows == 0 {
            if !image.is_zero() {
                return Err(Error::Contract(format!(
                    "degree {p} operator produced a nonzero form outside 0..={}",
                    frame.dim()
                )));
            }
            continue;
        }
        if image.degree() as i64 != target {
            return Err(Error::Contract(format!(
                "expected output degree {target} from degree {p}, got {}",
                image.degree()
            )));
        }
        for (mi, c) in image.terms() {
            triplets.push((frame.index_of(*mi), j, c.clone()));
        }
    }
    Ok(Matrix::from_triplets(rows, frame.len(p as i64), triplets))
}

impl GradedOperator {
    pub fn from_matrices(frame: Arc<Frame>, shift: i64, mats: Vec<Matrix>) -> Result<Self> {
        if mats.len() != frame.dim() + 1 {
            return Err(Error::Contract(format!(
                "expected {} per-degree matrices, got {}",
                frame.dim() + 1,
                mats.len()
            )));
        }
        for (p, m) in mats.iter().enumerate() {
            let expected = (frame.len(p as i64 + shift), frame.len(p as i64));
            if (m.nrows(), m.ncols()) != expected {
                return Err(Error::Contract(format!(
                    "degree {p} matrix is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok(GradedOperator { frame, shift, mats })
    }

    /// Matrix realisation of a form-level map in every degree.
    pub fn from_form_map<F>(frame: &Arc<Frame>, shift: i64, op: F) -> Result<Self>
    where
        F: Fn(&Form) -> Result<Form> + Sync,
    {
        let mats = (0..=frame.dim())
            .into_par_iter()
            .map(|p| as_matrix(frame, p, shift, &op))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedOperator {
            frame: frame.clone(),
            shift,
            mats,
        })
    }

    pub fn zero(frame: &Arc<Frame>, shift: i64) -> Self {
        let mats = (0..=frame.dim())
            .map(|p| Matrix::zeros(frame.len(p as i64 + shift), frame.len(p as i64)))
            .collect();
        GradedOperator {
            frame: frame.clone(),
            shift,
            mats,
        }
    }

    pub fn identity(frame: &Arc<Frame>) -> Self {
        Self::diagonal(frame, |_| Scalar::one())
    }

    /// Degree-preserving operator acting as `value(p)` on degree `p`.
    pub fn diagonal(frame: &Arc<Frame>, value: impl Fn(usize) -> Scalar) -> Self {
        let mats = (0..=frame.dim())
            .map(|p| Matrix::scalar_identity(frame.len(p as i64), &value(p)))
            .collect();
        GradedOperator {
            frame: frame.clone(),
            shift: 0,
            mats,
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn matrix(&self, p: usize) -> &Matrix {
        &self.mats[p]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn target_degree(&self, p: usize) -> Option<usize> {
        let t = p as i64 + self.shift;
        (t >= 0 && t as usize <= self.frame.dim()).then_some(t as usize)
    }

    pub fn apply(&self, form: &Form) -> Result<Form> {
        if form.dim() != self.frame.dim() {
            return Err(Error::Dimension {
                expected: self.frame.dim(),
                found: form.dim(),
            });
        }
        let p = form.degree();
        match self.target_degree(p) {
            Some(t) => {
                let v = self.mats[p].apply(&form.to_vector(&self.frame));
                Ok(Form::from_vector(&self.frame, t, &v))
            }
            None => Ok(Form::zero(self.frame.dim(), (p as i64 + self.shift).max(0) as usize)),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedOperator) -> GradedOperator {
        let shift = self.shift + inner.shift;
        let mats = (0..=self.frame.dim())
            .map(|p| {
                let rows = self.frame.len(p as i64 + shift);
                let cols = self.frame.len(p as i64);
                match inner.target_degree(p) {
                    Some(mid) => self.mats[mid].mul(&inner.mats[p]),
                    None => Matrix::zeros(rows, cols),
                }
            })
            .collect();
        GradedOperator {
            frame: self.frame.clone(),
            shift,
            mats,
        }
    }

    pub fn pow(&self, k: u32) -> GradedOperator {
        let mut out = GradedOperator::identity(&self.frame);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    fn zip(&self, other: &GradedOperator, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> GradedOperator {
        assert_eq!(self.shift, other.shift, "combining operators of different shift");
        GradedOperator {
            frame: self.frame.clone(),
            shift: self.shift,
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &GradedOperator) -> GradedOperator {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &GradedOperator) -> GradedOperator {
        self.zip(other, Matrix::sub)
    }

    pub fn scale(&self, factor: &Scalar) -> GradedOperator {
        GradedOperator {
            frame: self.frame.clone(),
            shift: self.shift,
            mats: self.mats.iter().map(|m| m.scale(factor)).collect(),
        }
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &GradedOperator, b: &GradedOperator) -> GradedOperator {
        a.compose(b).sub(&b.compose(a))
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(a: &GradedOperator, b: &GradedOperator) -> GradedOperator {
        a.compose(b).add(&b.compose(a))
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(Matrix::is_zero)
    }

    /// Lowest degree with a nonzero matrix, with the first basis monomial
    /// (lexicographic) whose image is nonzero.
    pub fn first_nonzero(&self) -> Option<(usize, MultiIndex)> {
        self.mats.iter().enumerate().find_map(|(p, m)| {
            m.first_nonzero_column()
                .map(|c| (p, self.frame.basis(p)[c]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn e(dim: usize, idx: &[usize]) -> Form {
        Form::monomial(dim, idx, int(1)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(e(3, &[1]).wedge(&e(3, &[2])).unwrap(), e(3, &[1, 2]));
        assert_eq!(e(3, &[2]).wedge(&e(3, &[1])).unwrap(), -&e(3, &[1, 2]));
        let a = &e(3, &[1]) + &e(3, &[3]);
        assert_eq!(a.wedge(&e(3, &[1, 2])).unwrap(), e(3, &[1, 2, 3]));
        assert!(e(3, &[1]).wedge(&e(4, &[2])).is_err());
    }

    #[test]
    fn interior_examples() {
        let dim = 3;
        let ev = |i| VectorField::frame_vector(dim, i);
        assert_eq!(e(3, &[3]).interior(&ev(3)).unwrap(), Form::constant(3, int(1)));
        assert_eq!(e(3, &[1, 2]).interior(&ev(1)).unwrap(), e(3, &[2]));
        assert_eq!(e(3, &[1, 2]).interior(&ev(2)).unwrap(), -&e(3, &[1]));
        assert_eq!(e(3, &[1, 2, 3]).interior(&ev(3)).unwrap(), e(3, &[1, 2]));
        assert!(Form::constant(3, int(2)).interior(&ev(1)).unwrap().is_zero());
    }

    fn heis3_phi() -> Endomorphism {
        // E1 -> E2, E2 -> -E1, E3 -> 0
        Endomorphism::new(Matrix::from_triplets(3, 3, [(1, 0, int(1)), (0, 1, int(-1))])).unwrap()
    }

    #[test]
    fn insert_endo_examples() {
        let id = Endomorphism::identity(3);
        let w = &e(3, &[1, 3]) + &e(3, &[2, 3]).scale(&int(5));
        assert_eq!(w.insert_endo(&id).unwrap(), w.scale(&int(2)));
        let phi = heis3_phi();
        assert_eq!(e(3, &[1]).insert_endo(&phi).unwrap(), -&e(3, &[2]));
        assert_eq!(e(3, &[2]).insert_endo(&phi).unwrap(), e(3, &[1]));
        assert!(e(3, &[1, 2]).insert_endo(&phi).unwrap().is_zero());
    }

    #[test]
    fn lexicographic_bases() {
        let frame = Frame::new(4).unwrap();
        let labels: Vec<String> = frame.basis(2).iter().map(|m| m.to_string()).collect();
        assert_eq!(
            labels,
            ["e1^e2", "e1^e3", "e1^e4", "e2^e3", "e2^e4", "e3^e4"]
        );
        for p in 0..=4 {
            for (k, m) in frame.basis(p).iter().enumerate() {
                assert_eq!(frame.index_of(*m), k);
            }
        }
        assert!(Frame::new(0).is_err());
        assert!(Frame::new(MAX_DIM + 1).is_err());
    }

    #[test]
    fn as_matrix_identity_and_zero() {
        let frame = Frame::new(5).unwrap();
        for p in 0..=5 {
            let id = as_matrix(&frame, p, 0, |f| Ok(f.clone())).unwrap();
            assert!(id.is_identity());
            let zero = as_matrix(&frame, p, 0, |f| Ok(Form::zero(5, f.degree()))).unwrap();
            assert!(zero.is_zero());
        }
        let bad = as_matrix(&frame, 2, 0, |f| Ok(Form::zero(5, f.degree() + 1)));
        assert!(matches!(bad, Err(Error::Contract(_))));
    }

    #[test]
    fn multi_index_validation() {
        assert!(MultiIndex::from_indices(&[2, 1]).is_err());
        assert!(MultiIndex::from_indices(&[1, 1]).is_err());
        assert!(MultiIndex::from_indices(&[0]).is_err());
        assert_eq!(MultiIndex::from_indices(&[]).unwrap().degree(), 0);
        assert!(Form::monomial(3, &[4], int(1)).is_err());
    }
}
