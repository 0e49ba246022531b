//! Chevalley–Eilenberg complex of a Lie algebra given by the differentials of
//! its dual generators.
//!
//! Convention: `de^k(X, Y) = -e^k([X, Y])`, so a term `c·e^{ij}` (i < j) in
//! `de^k` means `[E_i, E_j]` has `E_k`-component `-c`. For the Heisenberg
//! algebra, `de3 = -2 e12` gives `[E1, E2] = 2 E3`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{Form, Frame, GradedOperator, MultiIndex, VectorField};
use crate::linalg::{format_scalar, is_zero_vector, Matrix, Scalar};

/// Lie algebra described by `de^k` for every generator.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    name: String,
    dim: usize,
    diff1: Vec<Form>,
}

impl LieAlgebraSpec {
    /// `entries` lists `(k, [(c, i, j), ...])` meaning `de^k += c e^i∧e^j`.
    /// Generators not listed are closed.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        entries: &[(usize, Vec<(Scalar, usize, usize)>)],
    ) -> Result<Self> {
        if dim == 0 || dim > crate::exterior::MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut diff1 = vec![Form::zero(dim, 2); dim];
        for (k, terms) in entries {
            if *k == 0 || *k > dim {
                return Err(Error::Precondition(format!(
                    "generator e{k} out of range 1..={dim}"
                )));
            }
            for (c, i, j) in terms {
                if !(1 <= *i && i < j && *j <= dim) {
                    return Err(Error::MultiIndex(vec![*i, *j]));
                }
                let term = Form::monomial(dim, &[*i, *j], c.clone())?;
                diff1[k - 1] = &diff1[k - 1] + &term;
            }
        }
        Ok(LieAlgebraSpec {
            name: name.into(),
            dim,
            diff1,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `de^k`, 1-based.
    pub fn diff_of_generator(&self, k: usize) -> &Form {
        &self.diff1[k - 1]
    }

    /// `[E_i, E_j]` from the structure constants.
    pub fn bracket(&self, i: usize, j: usize) -> VectorField {
        let coeffs = (1..=self.dim)
            .map(|k| {
                if i == j {
                    return Scalar::zero();
                }
                let (a, b, sign) = if i < j { (i, j, -1) } else { (j, i, 1) };
                let m = MultiIndex::from_indices(&[a, b]).expect("ordered pair");
                self.diff1[k - 1].coeff(m) * Scalar::from_integer(sign.into())
            })
            .collect();
        VectorField::new(coeffs)
    }

    /// Bracket extended bilinearly to arbitrary invariant fields.
    pub fn bracket_fields(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs().iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let b = self.bracket(i + 1, j + 1);
                for (o, bk) in out.iter_mut().zip(b.coeffs()) {
                    *o += xi * yj * bk;
                }
            }
        }
        VectorField::new(out)
    }
}

/// `d` on an arbitrary form, extended from generators as an anti-derivation.
fn differential(spec: &LieAlgebraSpec, frame: &Frame, form: &Form) -> Result<Form> {
    let dim = spec.dim;
    let mut out = Form::zero(dim, form.degree() + 1);
    for (m, c) in form.terms() {
        let indices: Vec<usize> = m.indices().collect();
        for (s, &k) in indices.iter().enumerate() {
            let de = spec.diff_of_generator(k);
            if de.is_zero() {
                continue;
            }
            let left = frame.monomial(MultiIndex::from_indices(&indices[..s])?);
            let right = frame.monomial(MultiIndex::from_indices(&indices[s + 1..])?);
            let mut term = left.wedge(de)?.wedge(&right)?.scale(c);
            if s % 2 == 1 {
                term = -&term;
            }
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Finite invariant-form model `(Λ g*, d)`.
#[derive(Debug)]
pub struct InvariantComplex {
    spec: LieAlgebraSpec,
    frame: Arc<Frame>,
    d: GradedOperator,
}

/// Builds the complex and validates `d∘d = 0` (the Jacobi identity).
pub fn build_complex(spec: LieAlgebraSpec) -> Result<InvariantComplex> {
    let frame = Frame::new(spec.dim)?;
    for k in 1..=spec.dim {
        let dd = differential(&spec, &frame, spec.diff_of_generator(k))?;
        let first = dd.terms().next().map(|(m, c)| (*m, format_scalar(c)));
        if let Some((monomial, coefficient)) = first {
            return Err(Error::Jacobi {
                generator: k,
                monomial,
                coefficient,
            });
        }
    }
    let d = GradedOperator::from_form_map(&frame, 1, |f| differential(&spec, &frame, f))?;
    let dd = d.compose(&d);
    if let Some((p, m)) = dd.first_nonzero() {
        return Err(Error::Invariant(format!(
            "d∘d nonzero on degree {p} monomial {m}"
        )));
    }
    Ok(InvariantComplex { spec, frame, d })
}

impl InvariantComplex {
    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        self.spec.name()
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// `n` with `dim = 2n + 1`; errors for even dimension.
    pub fn contact_half_dim(&self) -> Result<usize> {
        if self.dim() % 2 == 0 {
            return Err(Error::Precondition(format!(
                "contact geometry needs odd dimension, got {}",
                self.dim()
            )));
        }
        Ok((self.dim() - 1) / 2)
    }

    pub fn d(&self) -> &GradedOperator {
        &self.d
    }

    pub fn differential(&self, form: &Form) -> Result<Form> {
        self.d.apply(form)
    }

    pub fn is_closed(&self, form: &Form) -> Result<bool> {
        Ok(self.differential(form)?.is_zero())
    }

    /// Re-checks `d∘d = 0` in every degree.
    pub fn d_squared_vanishes(&self) -> bool {
        self.d.compose(&self.d).is_zero()
    }

    pub fn cohomology(&self, p: usize) -> Result<CohomologySpace> {
        cohomology(self, p)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|p| {
                let cycles = self.frame.len(p as i64) - self.d.matrix(p).rank();
                let boundaries = if p == 0 { 0 } else { self.d.matrix(p - 1).rank() };
                cycles - boundaries
            })
            .collect()
    }
}

/// `H^p` with deterministic representatives and the data to express any
/// closed form's class in that basis.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    degree: usize,
    representatives: Vec<Form>,
    boundary_rank: usize,
    cycle_rank: usize,
    /// Columns `[boundary basis | representatives]`, a basis of `Z^p`.
    cycle_basis: Matrix,
}

impl CohomologySpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Form] {
        &self.representatives
    }

    pub fn cycle_rank(&self) -> usize {
        self.cycle_rank
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }
}

pub fn cohomology(c: &InvariantComplex, p: usize) -> Result<CohomologySpace> {
    if p > c.dim() {
        return Err(Error::Precondition(format!(
            "degree {p} outside 0..={}",
            c.dim()
        )));
    }
    let frame = c.frame();
    let size = frame.len(p as i64);
    let cycles = c.d.matrix(p).kernel();
    let boundaries: Vec<Vec<Scalar>> = if p == 0 {
        Vec::new()
    } else {
        let prev = c.d.matrix(p - 1);
        let cols = prev.columns();
        prev.pivot_columns().into_iter().map(|j| cols[j].clone()).collect()
    };
    let b = boundaries.len();
    let mut all = boundaries.clone();
    all.extend(cycles.iter().cloned());
    let stacked = Matrix::from_columns(size, &all);
    let chosen: Vec<usize> = stacked
        .pivot_columns()
        .into_iter()
        .filter(|&j| j >= b)
        .collect();
    let reps: Vec<Vec<Scalar>> = chosen.iter().map(|&j| all[j].clone()).collect();
    let mut basis = boundaries;
    basis.extend(reps.iter().cloned());
    let representatives = reps
        .iter()
        .map(|v| Form::from_vector(frame, p, v))
        .collect();
    Ok(CohomologySpace {
        degree: p,
        representatives,
        boundary_rank: b,
        cycle_rank: cycles.len(),
        cycle_basis: Matrix::from_columns(size, &basis),
    })
}

/// Coordinates of `[ω]` in the representative basis of `h`.
pub fn class_of(c: &InvariantComplex, h: &CohomologySpace, form: &Form) -> Result<Vec<Scalar>> {
    if form.degree() != h.degree {
        return Err(Error::Degree {
            expected: h.degree,
            found: form.degree(),
        });
    }
    if !c.is_closed(form)? {
        return Err(Error::Precondition(format!(
            "class_of needs a closed form; d({form}) != 0"
        )));
    }
    let v = form.to_vector(c.frame());
    if h.cycle_basis.ncols() == 0 {
        return if is_zero_vector(&v) {
            Ok(Vec::new())
        } else {
            Err(Error::Invariant("closed form outside an empty cycle space".into()))
        };
    }
    let x = h
        .cycle_basis
        .solve_vector(&v)
        .ok_or_else(|| Error::Invariant("closed form not in the cycle basis span".into()))?;
    Ok(x[h.boundary_rank..].to_vec())
}

/// Class coordinates of several closed forms at once, as the columns of a
/// `betti × forms.len()` matrix.
pub fn classes_of(c: &InvariantComplex, h: &CohomologySpace, forms: &[Form]) -> Result<Matrix> {
    let columns = forms
        .iter()
        .map(|f| class_of(c, h, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(h.betti(), &columns))
}
