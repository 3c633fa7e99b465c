//! Exact linear algebra over the rationals on sparse rows.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::symkernel::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("column {0} out of range for {1} columns")]
    ColumnOutOfRange(usize, usize),
}

/// Sparse row: column index to nonzero entry.
pub type SparseRow = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixQ {
    cols: usize,
    rows: Vec<SparseRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixQ,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> MatrixQ {
        MatrixQ { cols, rows: vec![SparseRow::new(); rows] }
    }

    pub fn with_cols(cols: usize) -> MatrixQ {
        MatrixQ { cols, rows: Vec::new() }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Result<MatrixQ, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = MatrixQ::with_cols(cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch(cols, r.len()));
            }
            m.push_dense(r)?;
        }
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> MatrixQ {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&v| Scalar::from_integer(v.into())).collect()).collect();
        MatrixQ::from_dense(&dense).expect("ragged integer matrix")
    }

    pub fn push_dense(&mut self, row: &[Scalar]) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(self.cols, row.len()));
        }
        self.rows.push(row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect());
        Ok(())
    }

    pub fn push_sparse(&mut self, row: SparseRow) -> Result<(), LinalgError> {
        if let Some((&c, _)) = row.iter().next_back() {
            if c >= self.cols {
                return Err(LinalgError::ColumnOutOfRange(c, self.cols));
            }
        }
        self.rows.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        Ok(())
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.rows[r].get(&c).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|c| r.get(&c).cloned().unwrap_or_else(Scalar::zero)).collect())
            .collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(self.cols, v.len()));
        }
        Ok(self.rows.iter().map(|r| r.iter().map(|(&c, a)| a * &v[c]).fold(Scalar::zero(), |acc, x| acc + x)).collect())
    }

    /// Keeps only the listed columns, renumbered in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> MatrixQ {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().filter_map(|(c, v)| pos.get(c).map(|&i| (i, v.clone()))).collect())
            .collect();
        MatrixQ { cols: cols.len(), rows }
    }
}

fn axpy(target: &mut SparseRow, factor: &Scalar, src: &SparseRow) {
    for (&c, v) in src {
        let e = target.entry(c).or_insert_with(Scalar::zero);
        *e += factor * v;
        if e.is_zero() {
            target.remove(&c);
        }
    }
}

/// Incremental echelon basis kept in reduced form.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Echelon {
        Echelon { cols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let cols: Vec<usize> = row.keys().copied().filter(|c| self.rows.contains_key(c)).collect();
        for c in cols {
            if let Some(f) = row.get(&c).cloned() {
                axpy(&mut row, &-f, &self.rows[&c]);
            }
        }
        row
    }

    /// Inserts a row; returns its pivot column if it was independent.
    pub fn insert(&mut self, row: SparseRow) -> Option<usize> {
        let mut row = self.reduce(row);
        let (&p, lead) = row.iter().next()?;
        let inv = Scalar::one() / lead.clone();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(f) = other.get(&p).cloned() {
                axpy(other, &-f, &row);
            }
        }
        self.rows.insert(p, row);
        Some(p)
    }

    pub fn into_rref(self) -> Rref {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let rows = self.rows.into_values().collect();
        Rref { matrix: MatrixQ { cols: self.cols, rows }, pivots }
    }
}

/// Exact reduced row echelon form. Zero rows are kept at the bottom so the
/// shape matches the input.
pub fn rref(m: &MatrixQ) -> Rref {
    let mut e = Echelon::new(m.cols);
    for r in &m.rows {
        e.insert(r.clone());
    }
    let mut out = e.into_rref();
    let n = m.rows.len();
    out.matrix.rows.resize(n, SparseRow::new());
    out
}

pub fn rank(m: &MatrixQ) -> usize {
    rref(m).rank()
}

/// Canonical nullspace basis: one vector per free column with a 1 there.
pub fn nullspace(m: &MatrixQ) -> Vec<Vec<Scalar>> {
    let r = rref(m);
    let pivot_rows: Vec<(usize, &SparseRow)> = r.pivots.iter().copied().zip(r.matrix.rows.iter()).collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &p in &r.pivots {
            v[p] = true;
        }
        v
    };
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Scalar::zero(); m.cols];
            v[free] = Scalar::one();
            for &(p, row) in &pivot_rows {
                if let Some(a) = row.get(&free) {
                    v[p] = -a.clone();
                }
            }
            v
        })
        .collect()
}

fn stacked(vs: &[Vec<Scalar>], dim: usize) -> Result<MatrixQ, LinalgError> {
    let mut m = MatrixQ::with_cols(dim);
    for v in vs {
        m.push_dense(v)?;
    }
    Ok(m)
}

fn ambient(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<usize, LinalgError> {
    let dim = a.first().or(b.first()).map_or(0, Vec::len);
    for v in a.iter().chain(b) {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch(dim, v.len()));
        }
    }
    Ok(dim)
}

/// Row-space basis in reduced form.
pub fn span_basis(vs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, LinalgError> {
    let dim = ambient(vs, &[])?;
    let r = rref(&stacked(vs, dim)?);
    Ok(r.matrix.to_dense().into_iter().take(r.rank()).collect())
}

/// True iff the two families span the same subspace.
pub fn span_equal(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<bool, LinalgError> {
    let dim = ambient(a, b)?;
    let ra = rref(&stacked(a, dim)?);
    let rb = rref(&stacked(b, dim)?);
    Ok(ra.pivots == rb.pivots && ra.matrix.rows[..ra.rank()] == rb.matrix.rows[..rb.rank()])
}

/// Coordinates of `target` in the span of `basis`, if it lies there.
pub fn solve_in_span(basis: &[Vec<Scalar>], target: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let dim = target.len();
    for v in basis {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch(dim, v.len()));
        }
    }
    // Columns are basis vectors; augmented last column is the target.
    let n = basis.len();
    let mut m = MatrixQ::with_cols(n + 1);
    for i in 0..dim {
        let mut row = SparseRow::new();
        for (j, v) in basis.iter().enumerate() {
            if !v[i].is_zero() {
                row.insert(j, v[i].clone());
            }
        }
        if !target[i].is_zero() {
            row.insert(n, target[i].clone());
        }
        m.push_sparse(row)?;
    }
    let r = rref(&m);
    if r.pivots.contains(&n) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n];
    for (&p, row) in r.pivots.iter().zip(&r.matrix.rows) {
        x[p] = row.get(&n).cloned().unwrap_or_else(Scalar::zero);
    }
    Ok(Some(x))
}
