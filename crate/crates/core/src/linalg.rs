//! Exact sparse linear algebra over the rationals.
//!
//! Every matrix in the engine is a [`Matrix`] of [`Scalar`] entries stored
//! row-major with sorted sparse rows. Kernels, ranks, images and solves all
//! go through [`Echelon`], an incremental row-echelon builder that never
//! densifies its rows.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational coefficient. `BigRational` keeps itself reduced with a
/// positive denominator.
pub type Scalar = BigRational;

/// A sparse row: `(column, value)` pairs sorted by column, no stored zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` (optionally signed, surrounding whitespace ignored).
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("malformed rational literal {text:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("malformed rational literal {text:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Scalar::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(value: &Scalar) -> String {
    value.to_string()
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(value: &Scalar) -> Option<Scalar> {
    if value.is_negative() {
        return None;
    }
    let num = value.numer().sqrt();
    let den = value.denom().sqrt();
    if &(&num * &num) == value.numer() && &(&den * &den) == value.denom() {
        Some(Scalar::new(num, den))
    } else {
        None
    }
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Scalar>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `a + factor * b` on sparse rows.
pub fn axpy_row(a: &[(usize, Scalar)], factor: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = factor * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_from_dense(values: &[Scalar]) -> SparseRow {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Sparse exact matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(format_scalar).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar_identity(n, &Scalar::one())
    }

    pub fn scalar_identity(n: usize, value: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        if !value.is_zero() {
            for (i, row) in m.data.iter_mut().enumerate() {
                row.push((i, value.clone()));
            }
        }
        m
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            if !v.is_zero() {
                m.data[i].push((i, v.clone()));
            }
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of {rows}x{cols}");
            *acc[r].entry(c).or_insert_with(Scalar::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged dense matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| sparse_from_dense(r)).collect(),
        }
    }

    /// Matrix whose columns are the given dense vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        Self::from_triplets(
            rows,
            columns.len(),
            columns.iter().enumerate().flat_map(|(j, col)| {
                assert_eq!(col.len(), rows, "column length mismatch");
                col.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(i, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseRow> {
        self.data.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.data[i][k].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == 1 && row[0].0 == i && row[0].1.is_one())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Scalar::zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        let t = self.transpose();
        t.data
            .iter()
            .map(|row| {
                let mut dense = vec![Scalar::zero(); self.rows];
                for (i, v) in row {
                    dense[*i] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    fn combine(&self, factor: &Scalar, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shapes differ"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| axpy_row(a, factor, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.combine(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.combine(&-Scalar::one(), other)
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        if factor.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * factor)).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Scalar::zero(), |acc, (c, a)| acc + a * &v[*c])
            })
            .collect()
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for (i, row) in b.data.iter().enumerate() {
                data[i].extend(row.iter().map(|(c, v)| (c + offset, v.clone())));
            }
            offset += b.cols;
        }
        Matrix {
            rows,
            cols: offset,
            data,
        }
    }

    pub fn select_columns(&self, keep: &[usize]) -> Matrix {
        let mut position = vec![None; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = Some(new);
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out: SparseRow = row
                    .iter()
                    .filter_map(|(c, v)| position[*c].map(|n| (n, v.clone())))
                    .collect();
                out.sort_by_key(|(c, _)| *c);
                out
            })
            .collect();
        Matrix {
            rows: self.rows,
            cols: keep.len(),
            data,
        }
    }

    pub fn select_rows(&self, keep: &[usize]) -> Matrix {
        Matrix {
            rows: keep.len(),
            cols: self.cols,
            data: keep.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    /// First `(row, col)` holding a nonzero entry, scanning columns in order.
    pub fn first_nonzero_column(&self) -> Option<usize> {
        self.data
            .iter()
            .filter_map(|row| row.first().map(|(c, _)| *c))
            .min()
    }

    pub fn rank(&self) -> usize {
        Echelon::from_matrix(self).rank()
    }

    /// Kernel basis in the deterministic RREF order (one vector per free column).
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut e = Echelon::from_matrix(self);
        e.reduce();
        e.kernel_basis()
    }

    /// Indices of the columns chosen greedily (left to right) as an image basis.
    pub fn pivot_columns(&self) -> Vec<usize> {
        Echelon::from_matrix(self).pivots()
    }

    /// Solves `self * X = rhs`; free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let n = self.cols;
        let augmented = Matrix::hstack(&[self, rhs]);
        let mut e = Echelon::from_matrix(&augmented);
        if e.pivots().iter().any(|&p| p >= n) {
            return None;
        }
        e.reduce();
        let triplets = e.rows.values().flat_map(|row| {
            let pivot = row[0].0;
            row.iter()
                .filter(|(c, _)| *c >= n)
                .map(move |(c, v)| (pivot, c - n, v.clone()))
        });
        Some(Matrix::from_triplets(n, rhs.cols, triplets))
    }

    pub fn solve_vector(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        let b = Matrix::from_columns(self.rows, &[rhs.to_vec()]);
        self.solve(&b).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() || self.rank() != self.rows {
            return None;
        }
        self.solve(&Matrix::identity(self.rows))
    }

    /// Determinant by fraction-carrying Gaussian elimination.
    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut rows = self.to_dense();
        let n = self.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Scalar::zero();
            };
            if pivot != col {
                rows.swap(pivot, col);
                det = -det;
            }
            let p = rows[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = &rows[r][col] / &p;
                for c in col..n {
                    let delta = &f * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
        det
    }

    /// Positive-definiteness by exact leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            self.select_rows(&idx)
                .select_columns(&idx)
                .determinant()
                .is_positive()
        })
    }

    /// Common denominator of all entries.
    pub fn denominator_lcm(&self) -> BigInt {
        lcm_of_denominators(self.data.iter().flatten().map(|(_, v)| v))
    }
}

/// Incremental row-echelon form with sparse rows keyed by pivot column.
///
/// Rows are normalised to a leading 1. [`Echelon::reduce`] turns the echelon
/// form into the reduced form needed for kernel extraction.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: BTreeMap<usize, SparseRow>,
    reduced: bool,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: BTreeMap::new(),
            reduced: true,
        }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let mut e = Echelon::new(m.ncols());
        for row in m.rows_iter() {
            e.insert(row.clone());
        }
        e
    }

    /// Reduces `row` against the current pivots; returns the remainder.
    pub fn remainder(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some(lead) = row.iter().position(|(c, _)| self.rows.contains_key(c)) else {
                return row;
            };
            let (col, coeff) = row[lead].clone();
            row = axpy_row(&row, &-coeff, &self.rows[&col]);
        }
    }

    /// Inserts a row; returns `true` if the rank grew.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        // only the leading entry has to avoid existing pivots
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.rows.get(&lead) {
                Some(pivot_row) => row = axpy_row(&row, &-coeff, pivot_row),
                None => break,
            }
        }
        let Some((lead, coeff)) = row.first().cloned() else {
            return false;
        };
        assert!(lead < self.cols, "row entry beyond column count");
        let inv = coeff.recip();
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.rows.insert(lead, row);
        self.reduced = false;
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Back-substitution to reduced row-echelon form.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &p in &pivots {
            let mut row = self.rows.remove(&p).expect("pivot row");
            loop {
                let target = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| self.rows.contains_key(c) && *c > p)
                    .cloned();
                let Some((col, coeff)) = target else { break };
                row = axpy_row(&row, &-coeff, &self.rows[&col]);
            }
            self.rows.insert(p, row);
        }
        self.reduced = true;
    }

    /// Kernel basis of the inserted rows; requires [`Echelon::reduce`].
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        assert!(self.reduced, "kernel_basis needs a reduced echelon form");
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.rows.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (pivot, row) in &self.rows {
                    if let Ok(k) = row.binary_search_by_key(&f, |(c, _)| *c) {
                        v[*pivot] = -row[k].1.clone();
                    }
                }
                v
            })
            .collect()
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.remainder(row).is_empty()
    }
}

/// Sparse view of a dense vector.
pub fn sparse(values: &[Scalar]) -> SparseRow {
    sparse_from_dense(values)
}

pub fn is_zero_vector(values: &[Scalar]) -> bool {
    values.iter().all(Zero::is_zero)
}
