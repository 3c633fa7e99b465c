//! Brackets, structure constants and the derived series of finite-dimensional
//! algebras of polynomial vector fields.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::detsolve::field_vectors;
use crate::exterior::{ExteriorError, VectorField};
use crate::ratlinalg::{rank, solve_in_span, span_basis, MatrixQ};
use crate::symkernel::{scalar, Poly, Scalar};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("[{0}, {1}] leaves the span of the basis")]
    NotClosed(usize, usize),
    #[error("basis fields are linearly dependent")]
    Dependent,
    #[error("structure constant vector has length {0}, expected {1}")]
    BadLength(usize, usize),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

pub fn bracket(a: &VectorField<Poly>, b: &VectorField<Poly>) -> Result<VectorField<Poly>, LieError> {
    Ok(a.bracket(b)?)
}

/// Structure constants `[e_i, e_j] = Σ_k c_ij^k e_k`, stored for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTable {
    n: usize,
    entries: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl BracketTable {
    pub fn zero(n: usize) -> BracketTable {
        BracketTable { n, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `[e_i, e_j]`; the opposite order is implied.
    pub fn set(&mut self, i: usize, j: usize, coeffs: Vec<Scalar>) -> Result<(), LieError> {
        if coeffs.len() != self.n {
            return Err(LieError::BadLength(coeffs.len(), self.n));
        }
        assert!(i < self.n && j < self.n && i != j, "bracket index out of range");
        let (key, v) = if i < j { ((i, j), coeffs) } else { ((j, i), coeffs.into_iter().map(|c| -c).collect()) };
        if v.iter().all(Zero::is_zero) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
        Ok(())
    }

    pub fn set_ints(&mut self, i: usize, j: usize, coeffs: &[i64]) {
        self.set(i, j, coeffs.iter().map(|&c| scalar::int(c)).collect()).expect("length matches");
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn get(&self, i: usize, j: usize) -> Vec<Scalar> {
        let zero = || vec![Scalar::zero(); self.n];
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero(),
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(zero),
            std::cmp::Ordering::Greater => self.entries.get(&(j, i)).map(|v| v.iter().map(|c| -c.clone()).collect()).unwrap_or_else(zero),
        }
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.get(i, j)[k].clone()
    }

    /// Bracket of two elements given in coordinates.
    pub fn apply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.n];
        for (&(i, j), c) in &self.entries {
            let w = &a[i] * &b[j] - &a[j] * &b[i];
            if w.is_zero() {
                continue;
            }
            for (o, ck) in out.iter_mut().zip(c) {
                *o += &w * ck;
            }
        }
        out
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &[Scalar])> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v.as_slice()))
    }

    /// Row `i`, column `j` holds `[e_i, e_j]` written as a combination of `names`.
    pub fn render_matrix(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| render_combination(&self.get(i, j), names)).collect()).collect()
    }
}

/// Renders `Σ c_k name_k` as `3*v2 - v1`, or `0`.
pub fn render_combination(c: &[Scalar], names: &[String]) -> String {
    let mut out = String::new();
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let neg = scalar::is_negative(ck);
        let mag = if neg { -ck.clone() } else { ck.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != Scalar::from_integer(1.into()) {
            out.push_str(&scalar::render(&mag));
            out.push('*');
        }
        out.push_str(&names[k]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n).map(|k| format!("e{k}")).collect();
        for i in 0..self.n {
            for j in i + 1..self.n {
                writeln!(f, "[e{}, e{}] = {}", i + 1, j + 1, render_combination(&self.get(i, j), &names))?;
            }
        }
        Ok(())
    }
}

/// Structure constants of a basis of fields, by exact solves against the basis.
pub fn structure_constants(basis: &[VectorField<Poly>]) -> Result<BracketTable, LieError> {
    let n = basis.len();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            brackets.push(((i, j), bracket(&basis[i], &basis[j])?));
        }
    }
    let mut all = basis.to_vec();
    all.extend(brackets.iter().map(|(_, f)| f.clone()));
    let vecs = field_vectors(&all);
    let (bvecs, cvecs) = vecs.split_at(n);
    if n > 0 && rank(&MatrixQ::from_dense(bvecs).expect("uniform")) < n {
        return Err(LieError::Dependent);
    }
    let mut table = BracketTable::zero(n);
    for (((i, j), _), target) in brackets.iter().zip(cvecs) {
        let c = solve_in_span(bvecs, target).expect("uniform").ok_or(LieError::NotClosed(*i, *j))?;
        table.set(*i, *j, c)?;
    }
    Ok(table)
}

fn derived(table: &BracketTable, sub: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut gens = Vec::new();
    for a in 0..sub.len() {
        for b in a + 1..sub.len() {
            gens.push(table.apply(&sub[a], &sub[b]));
        }
    }
    if gens.is_empty() {
        return Vec::new();
    }
    span_basis(&gens).expect("uniform")
}

/// Dimensions of `g ⊇ g' ⊇ g'' ⊇ ...`. The sequence stops at 0 or at the
/// first repeated dimension, which is included.
pub fn derived_series(table: &BracketTable) -> Vec<usize> {
    let n = table.dim();
    let mut sub: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::from_integer(1.into());
            v
        })
        .collect();
    let mut dims = vec![n];
    while !sub.is_empty() {
        let next = derived(table, &sub);
        let d = next.len();
        dims.push(d);
        if d == sub.len() {
            break;
        }
        sub = next;
    }
    dims
}

pub fn is_solvable(table: &BracketTable) -> bool {
    derived_series(table).last() == Some(&0)
}

/// Checks `Σ_cyc [[e_i, e_j], e_k] = 0` on all triples.
pub fn jacobi_check(table: &BracketTable) -> bool {
    let n = table.dim();
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::from_integer(1.into());
        v
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ei, ej, ek) = (unit(i), unit(j), unit(k));
                let mut s = table.apply(&table.apply(&ei, &ej), &ek);
                for (o, x) in s.iter_mut().zip(table.apply(&table.apply(&ej, &ek), &ei)) {
                    *o += x;
                }
                for (o, x) in s.iter_mut().zip(table.apply(&table.apply(&ek, &ei), &ej)) {
                    *o += x;
                }
                if s.iter().any(|x| !x.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests;
