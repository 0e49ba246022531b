//! Metric structure on the invariant complex and finite-dimensional Hodge
//! theory: inner products, star, codifferential, Laplacian, harmonic
//! projector and Green operator.
//!
//! The global scalar product is the pointwise one (total volume normalised
//! to 1). `gram1` is the Gram matrix of the coframe `e^1, …, e^dim`; the
//! Gram matrix of degree-`p` monomials is its `p`-th compound. The metric on
//! vectors is therefore `gram1⁻¹`.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::complex::InvariantComplex;
use crate::error::{Error, Result};
use crate::exterior::{Form, Frame, GradedOperator, MultiIndex};
use crate::linalg::{format_scalar, rational_sqrt, Matrix, Scalar};

fn compound(frame: &Frame, gram1: &Matrix, p: usize) -> Matrix {
    if gram1.is_identity() {
        return Matrix::identity(frame.len(p as i64));
    }
    let basis = frame.basis(p);
    let mut triplets = Vec::new();
    for (r, a) in basis.iter().enumerate() {
        let rows: Vec<usize> = a.indices().map(|i| i - 1).collect();
        let block = gram1.select_rows(&rows);
        for (c, b) in basis.iter().enumerate() {
            let cols: Vec<usize> = b.indices().map(|i| i - 1).collect();
            let det = block.select_columns(&cols).determinant();
            if !det.is_zero() {
                triplets.push((r, c, det));
            }
        }
    }
    Matrix::from_triplets(basis.len(), basis.len(), triplets)
}

/// Riemannian metric on the invariant frame.
#[derive(Clone, Debug)]
pub struct MetricStructure {
    frame: Arc<Frame>,
    gram1: Matrix,
    orientation: i64,
    grams: Vec<Matrix>,
    gram_inverses: Vec<Matrix>,
}

impl MetricStructure {
    /// Validates symmetry and positive-definiteness of `gram1` exactly.
    /// `orientation` is `+1` when `e^1∧…∧e^dim` is positively oriented.
    pub fn new(frame: &Arc<Frame>, gram1: Matrix, orientation: i64) -> Result<Self> {
        let dim = frame.dim();
        if gram1.nrows() != dim || gram1.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: gram1.nrows(),
            });
        }
        if !gram1.is_symmetric() {
            return Err(Error::Metric("Gram matrix is not symmetric".into()));
        }
        if !gram1.is_positive_definite() {
            return Err(Error::Metric(
                "Gram matrix is not positive definite (a leading minor is <= 0)".into(),
            ));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::Metric(format!("orientation must be ±1, got {orientation}")));
        }
        let inverse = gram1.inverse().expect("positive definite");
        let grams = (0..=dim).map(|p| compound(frame, &gram1, p)).collect();
        let gram_inverses = (0..=dim).map(|p| compound(frame, &inverse, p)).collect();
        Ok(MetricStructure {
            frame: frame.clone(),
            gram1,
            orientation,
            grams,
            gram_inverses,
        })
    }

    pub fn identity(frame: &Arc<Frame>) -> Self {
        MetricStructure::new(frame, Matrix::identity(frame.dim()), 1).expect("identity metric")
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn gram1(&self) -> &Matrix {
        &self.gram1
    }

    /// Metric on vectors, `g(E_i, E_j)`.
    pub fn vector_gram(&self) -> Matrix {
        self.gram_inverses[1].clone()
    }

    pub fn orientation(&self) -> i64 {
        self.orientation
    }

    pub fn gram(&self, p: usize) -> &Matrix {
        &self.grams[p]
    }

    pub fn gram_inverse(&self, p: usize) -> &Matrix {
        &self.gram_inverses[p]
    }

    pub fn is_euclidean(&self) -> bool {
        self.gram1.is_identity()
    }

    pub fn inner(&self, a: &Form, b: &Form) -> Result<Scalar> {
        if a.degree() != b.degree() {
            return Err(Error::Precondition(format!(
                "inner product of degree {} and degree {} forms",
                a.degree(),
                b.degree()
            )));
        }
        let va = a.to_vector(&self.frame);
        let gb = self.grams[b.degree()].apply(&b.to_vector(&self.frame));
        Ok(va.iter().zip(&gb).fold(Scalar::zero(), |acc, (x, y)| acc + x * y))
    }

    /// Inner-product adjoint: `(A*)_q = G_p⁻¹ A_pᵀ G_q` for `A_p: Ω^p → Ω^q`.
    pub fn adjoint(&self, op: &GradedOperator) -> GradedOperator {
        let shift = -op.shift();
        let euclidean = self.is_euclidean();
        let mats = (0..=self.frame.dim())
            .map(|q| {
                let p = q as i64 + shift;
                if p < 0 || p as usize > self.frame.dim() {
                    return Matrix::zeros(0, self.frame.len(q as i64));
                }
                let p = p as usize;
                let t = op.matrix(p).transpose();
                if euclidean {
                    t
                } else {
                    self.gram_inverses[p].mul(&t).mul(&self.grams[q])
                }
            })
            .collect();
        GradedOperator::from_matrices(self.frame.clone(), shift, mats).expect("adjoint shapes")
    }

    /// `orientation · sqrt(det gram1)`: the top monomial equals this factor
    /// times the unit volume form.
    pub fn volume_scale(&self) -> Result<Scalar> {
        let det = self.gram1.determinant();
        let root = rational_sqrt(&det).ok_or_else(|| Error::IrrationalVolume(format_scalar(&det)))?;
        Ok(root * Scalar::from_integer(self.orientation.into()))
    }

    pub fn volume_form(&self) -> Result<Form> {
        let scale = self.volume_scale()?;
        Ok(Form::from_terms(
            self.frame.dim(),
            self.frame.dim(),
            [(self.frame.top(), scale.recip())],
        ))
    }

    /// Integral of a top-degree form against the unit-volume metric measure.
    pub fn integrate_top(&self, form: &Form) -> Result<Scalar> {
        if form.degree() != self.frame.dim() {
            return Err(Error::Degree {
                expected: self.frame.dim(),
                found: form.degree(),
            });
        }
        Ok(form.coeff(self.frame.top()) * self.volume_scale()?)
    }

    /// Matrix of `*: Ω^p → Ω^{dim-p}` characterised by `a ∧ *b = ⟨a,b⟩ vol`.
    pub fn star_matrix(&self, p: usize) -> Result<Matrix> {
        let dim = self.frame.dim();
        let scale = self.volume_scale()?;
        let top = self.frame.top();
        let triplets = self.frame.basis(p).iter().enumerate().map(|(c, m)| {
            let complement = MultiIndex::from_bits(top.bits() & !m.bits());
            let (_, negative) = m.wedge(complement).expect("disjoint");
            let sign = if negative { -Scalar::one() } else { Scalar::one() };
            (self.frame.index_of(complement), c, sign)
        });
        let wt = Matrix::from_triplets(self.frame.len((dim - p) as i64), self.frame.len(p as i64), triplets);
        Ok(wt.mul(&self.grams[p]).scale(&scale.recip()))
    }

    pub fn star(&self, form: &Form) -> Result<Form> {
        let p = form.degree();
        let m = self.star_matrix(p)?;
        let v = m.apply(&form.to_vector(&self.frame));
        Ok(Form::from_vector(&self.frame, self.frame.dim() - p, &v))
    }
}

/// `δ`, `Δ`, harmonic spaces, `Π_Δ` and `G` for a (complex, metric) pair.
#[derive(Debug)]
pub struct HodgePackage {
    frame: Arc<Frame>,
    metric: MetricStructure,
    d: GradedOperator,
    delta: GradedOperator,
    laplacian: GradedOperator,
    harmonic: Vec<OnceLock<Vec<Vec<Scalar>>>>,
    projectors: Vec<OnceLock<Matrix>>,
    greens: Vec<OnceLock<Matrix>>,
}

impl HodgePackage {
    pub fn new(complex: &InvariantComplex, metric: MetricStructure) -> Result<Self> {
        if metric.frame().dim() != complex.dim() {
            return Err(Error::Dimension {
                expected: complex.dim(),
                found: metric.frame().dim(),
            });
        }
        let frame = complex.frame().clone();
        let d = complex.d().clone();
        let delta = metric.adjoint(&d);
        let laplacian = d.compose(&delta).add(&delta.compose(&d));
        let slots = frame.dim() + 1;
        Ok(HodgePackage {
            frame,
            metric,
            d,
            delta,
            laplacian,
            harmonic: (0..slots).map(|_| OnceLock::new()).collect(),
            projectors: (0..slots).map(|_| OnceLock::new()).collect(),
            greens: (0..slots).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn metric(&self) -> &MetricStructure {
        &self.metric
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn d(&self) -> &GradedOperator {
        &self.d
    }

    pub fn delta(&self) -> &GradedOperator {
        &self.delta
    }

    pub fn laplacian(&self) -> &GradedOperator {
        &self.laplacian
    }

    pub fn codifferential(&self, form: &Form) -> Result<Form> {
        self.delta.apply(form)
    }

    pub fn apply_laplacian(&self, form: &Form) -> Result<Form> {
        self.laplacian.apply(form)
    }

    fn harmonic_vectors(&self, p: usize) -> &Vec<Vec<Scalar>> {
        self.harmonic[p].get_or_init(|| self.laplacian.matrix(p).kernel())
    }

    /// Basis of `ker Δ_p` (reduced-echelon order).
    pub fn harmonic_basis(&self, p: usize) -> Vec<Form> {
        self.harmonic_vectors(p)
            .iter()
            .map(|v| Form::from_vector(&self.frame, p, v))
            .collect()
    }

    pub fn harmonic_dim(&self, p: usize) -> usize {
        self.harmonic_vectors(p).len()
    }

    /// Orthogonal projector onto harmonic `p`-forms: `H (HᵀGH)⁻¹ HᵀG`.
    pub fn projector_matrix(&self, p: usize) -> &Matrix {
        self.projectors[p].get_or_init(|| {
            let size = self.frame.len(p as i64);
            let vectors = self.harmonic_vectors(p);
            if vectors.is_empty() {
                return Matrix::zeros(size, size);
            }
            let h = Matrix::from_columns(size, vectors);
            let hg = h.transpose().mul(self.metric.gram(p));
            let small = hg.mul(&h).inverse().expect("harmonic Gram is invertible");
            h.mul(&small).mul(&hg)
        })
    }

    /// Green operator on degree `p`: `(Δ + Π)⁻¹ − Π`.
    pub fn green_matrix(&self, p: usize) -> &Matrix {
        self.greens[p].get_or_init(|| {
            let proj = self.projector_matrix(p);
            let shifted = self.laplacian.matrix(p).add(proj);
            shifted
                .inverse()
                .expect("Δ + Π_Δ is invertible")
                .sub(proj)
        })
    }

    pub fn project_harmonic(&self, form: &Form) -> Result<Form> {
        let p = form.degree();
        let v = self.projector_matrix(p).apply(&form.to_vector(&self.frame));
        Ok(Form::from_vector(&self.frame, p, &v))
    }

    pub fn green(&self, form: &Form) -> Result<Form> {
        let p = form.degree();
        let v = self.green_matrix(p).apply(&form.to_vector(&self.frame));
        Ok(Form::from_vector(&self.frame, p, &v))
    }

    pub fn projector(&self) -> GradedOperator {
        let mats = (0..=self.frame.dim())
            .map(|p| self.projector_matrix(p).clone())
            .collect();
        GradedOperator::from_matrices(self.frame.clone(), 0, mats).expect("square")
    }

    pub fn green_operator(&self) -> GradedOperator {
        let mats = (0..=self.frame.dim())
            .map(|p| self.green_matrix(p).clone())
            .collect();
        GradedOperator::from_matrices(self.frame.clone(), 0, mats).expect("square")
    }

    /// `δ` via the star route: on degree `p+1` forms, `δ = (-1)^{p+1} * d *⁻¹`
    /// as implied by `δ * ω = (-1)^{p+1} * dω` for `ω ∈ Ω^p`. Returns the
    /// first degree where the two routes disagree.
    pub fn star_route_mismatch(&self) -> Result<Option<usize>> {
        let dim = self.frame.dim();
        for p in 0..dim {
            // δ_{dim-p} ∘ *_p  vs  (-1)^{p+1} *_{p+1} ∘ d_p
            let lhs = self.delta.matrix(dim - p).mul(&self.metric.star_matrix(p)?);
            let mut rhs = self.metric.star_matrix(p + 1)?.mul(self.d.matrix(p));
            if p % 2 == 0 {
                rhs = rhs.scale(&-Scalar::one());
            }
            if lhs != rhs {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// True when `Δ_p` is symmetric with respect to the degree-`p` Gram
    /// matrix and `⟨Δv, v⟩ ≥ 0` on basis vectors.
    pub fn laplacian_is_self_adjoint(&self, p: usize) -> bool {
        let g = self.metric.gram(p);
        let gl = g.mul(self.laplacian.matrix(p));
        gl.is_symmetric() && (0..gl.nrows()).all(|i| !gl.get(i, i).is_negative())
    }
}
