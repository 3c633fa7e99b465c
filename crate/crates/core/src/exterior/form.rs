use std::collections::BTreeMap;
use std::fmt;

use super::coeff::Coeff;
use super::field::VectorField;
use super::ExteriorError;
use crate::symkernel::chart::compatible;
use crate::symkernel::{Chart, Poly, RatFunc};

/// Sorts an index tuple, returning the permutation parity, or `None` when an
/// index repeats (the wedge vanishes).
pub fn canonicalize(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    // insertion sort; tuples are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// A grade-k differential form `Σ_I a_I dx^{i1} ∧ … ∧ dx^{ik}` with strictly
/// increasing index tuples `I`.
#[derive(Clone, PartialEq)]
pub struct DiffForm<C = RatFunc> {
    chart: Chart,
    grade: usize,
    terms: BTreeMap<Vec<usize>, C>,
}

impl<C: Coeff> DiffForm<C> {
    pub fn zero(chart: &Chart, grade: usize) -> Self {
        DiffForm { chart: chart.clone(), grade, terms: BTreeMap::new() }
    }

    /// Grade-0 form.
    pub fn function(chart: &Chart, f: C) -> Self {
        let mut out = Self::zero(chart, 0);
        out.add_term(&[], f);
        out
    }

    /// `dx^{i1} ∧ … ∧ dx^{ik}` in the given (not necessarily sorted) order.
    pub fn basis(chart: &Chart, idx: &[usize]) -> Self {
        let mut out = Self::zero(chart, idx.len());
        out.add_term(idx, C::one_on(chart));
        out
    }

    pub fn differential(chart: &Chart, idx: usize) -> Self {
        Self::basis(chart, &[idx])
    }

    pub fn from_terms<'a>(
        chart: &Chart,
        grade: usize,
        terms: impl IntoIterator<Item = (&'a [usize], C)>,
    ) -> Self {
        let mut out = Self::zero(chart, grade);
        for (i, c) in terms {
            out.add_term(i, c);
        }
        out
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &C)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `dx^{idx}` for any index order (sign adjusted).
    pub fn component(&self, idx: &[usize]) -> C {
        match canonicalize(idx) {
            None => C::zero_on(&self.chart),
            Some((k, odd)) => {
                let c = self.terms.get(&k).cloned().unwrap_or_else(|| C::zero_on(&self.chart));
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    /// The grade-0 value (zero when the form is empty).
    pub fn as_function(&self) -> C {
        self.component(&[])
    }

    pub fn add_term(&mut self, idx: &[usize], c: C) {
        assert_eq!(idx.len(), self.grade, "grade mismatch in add_term");
        if c.is_zero() {
            return;
        }
        let Some((key, odd)) = canonicalize(idx) else { return };
        let c = if odd { c.neg() } else { c };
        let merged = match self.terms.get(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if merged.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, merged);
        }
    }

    fn check(&self, other: &Self) -> Result<(), ExteriorError> {
        if compatible(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(ExteriorError::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        if self.grade != other.grade && !self.is_zero() && !other.is_zero() {
            return Err(ExteriorError::GradeMismatch(self.grade, other.grade));
        }
        let mut out = if self.is_zero() { Self::zero(&self.chart, other.grade) } else { self.clone() };
        for (k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffForm {
            chart: self.chart.clone(),
            grade: self.grade,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, f: &C) -> Self {
        let mut out = Self::zero(&self.chart, self.grade);
        for (k, c) in &self.terms {
            out.add_term(k, c.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let mut out = Self::zero(&self.chart, self.grade + other.grade);
        if out.grade > self.chart.dim() {
            return Ok(out);
        }
        let mut idx = Vec::with_capacity(out.grade);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                idx.clear();
                idx.extend_from_slice(i);
                idx.extend_from_slice(j);
                out.add_term(&idx, a.mul(b));
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(&self.chart, self.grade + 1);
        let mut idx = Vec::with_capacity(self.grade + 1);
        for (i, a) in &self.terms {
            for k in 0..self.chart.dim() {
                if i.contains(&k) || !a.depends_on(&self.chart, k) {
                    continue;
                }
                let da = a.partial(&self.chart, k);
                if da.is_zero() {
                    continue;
                }
                idx.clear();
                idx.push(k);
                idx.extend_from_slice(i);
                out.add_term(&idx, da);
            }
        }
        out
    }

    /// Contraction `i_v` with a vector field.
    pub fn interior(&self, v: &VectorField<C>) -> Result<Self, ExteriorError> {
        if self.grade == 0 {
            return Err(ExteriorError::InteriorOfFunction);
        }
        if !compatible(&self.chart, v.chart()) {
            return Err(ExteriorError::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart, self.grade - 1);
        for (i, a) in &self.terms {
            for (p, &coord) in i.iter().enumerate() {
                let vc = v.component(coord);
                if vc.is_zero() {
                    continue;
                }
                let mut rest = i.clone();
                rest.remove(p);
                let c = a.mul(&vc);
                out.add_term(&rest, if p % 2 == 1 { c.neg() } else { c });
            }
        }
        Ok(out)
    }

    /// Value `ω(v)` of a 1-form on a vector field.
    pub fn pair(&self, v: &VectorField<C>) -> Result<C, ExteriorError> {
        if self.grade != 1 {
            return Err(ExteriorError::GradeMismatch(1, self.grade));
        }
        Ok(self.interior(v)?.as_function())
    }

    /// Lie derivative by Cartan's formula `L_v = i_v d + d i_v`.
    pub fn lie_derivative(&self, v: &VectorField<C>) -> Result<Self, ExteriorError> {
        if self.grade == 0 {
            return Ok(Self::function(&self.chart, v.apply(&self.as_function())));
        }
        let a = self.d().interior(v)?;
        let b = self.interior(v)?.d();
        a.add(&b)
    }

    /// Lie derivative by transporting each coefficient and each coordinate
    /// differential: `L_v(a dx^I) = v(a) dx^I + a Σ_p dx^{i1} ∧ … d(v^{ip}) … ∧ dx^{ik}`.
    pub fn lie_derivative_components(&self, v: &VectorField<C>) -> Result<Self, ExteriorError> {
        if !compatible(&self.chart, v.chart()) {
            return Err(ExteriorError::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart, self.grade);
        for (i, a) in &self.terms {
            out.add_term(i, v.apply(a));
            for (p, &coord) in i.iter().enumerate() {
                let vc = v.component(coord);
                if vc.is_zero() {
                    continue;
                }
                for k in 0..self.chart.dim() {
                    if !vc.depends_on(&self.chart, k) {
                        continue;
                    }
                    let dv = vc.partial(&self.chart, k);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut idx = i.clone();
                    idx[p] = k;
                    out.add_term(&idx, a.mul(&dv));
                }
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, chart: &Chart, f: impl Fn(&C) -> D) -> DiffForm<D> {
        let mut out = DiffForm::zero(chart, self.grade);
        for (k, c) in &self.terms {
            out.add_term(k, f(c));
        }
        out
    }

    fn basis_text(&self, idx: &[usize]) -> String {
        idx.iter().map(|&i| format!("d{}", self.chart.name(i))).collect::<Vec<_>>().join("^")
    }

    fn push_term(&self, out: &mut String, first: bool, idx: &[usize], c: &C) {
        let (neg, text) = c.factor_text();
        let body = match (text, idx.is_empty()) {
            (Some(t), false) => format!("{t} {}", self.basis_text(idx)),
            (Some(t), true) => t,
            (None, false) => self.basis_text(idx),
            (None, true) => "1".to_string(),
        };
        match (first, neg) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }

    /// Renders as `coef dx^dt + ...` in canonical (chart) order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            self.push_term(&mut out, n == 0, k, c);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Renders using a caller-chosen list of oriented basis elements, in that
    /// order. Fails if the form has a component outside the list.
    pub fn render_with_basis(&self, basis: &[Vec<usize>]) -> Result<String, ExteriorError> {
        let mut covered = std::collections::BTreeSet::new();
        let mut out = String::new();
        let mut first = true;
        for b in basis {
            let Some((key, _)) = canonicalize(b) else { continue };
            covered.insert(key);
            let c = self.component(b);
            if c.is_zero() {
                continue;
            }
            self.push_term(&mut out, first, b, &c);
            first = false;
        }
        if let Some(k) = self.terms.keys().find(|k| !covered.contains(*k)) {
            return Err(ExteriorError::BasisIncomplete(self.basis_text(k)));
        }
        if out.is_empty() {
            out.push('0');
        }
        Ok(out)
    }
}

impl DiffForm<Poly> {
    pub fn to_ratfunc(&self) -> DiffForm<RatFunc> {
        self.map_coeffs(&self.chart, |p| RatFunc::from_poly(p.clone()))
    }
}

impl DiffForm<RatFunc> {
    /// Polynomial version, when every coefficient has a constant denominator.
    pub fn to_poly(&self) -> Option<DiffForm<Poly>> {
        let mut out = DiffForm::zero(&self.chart, self.grade);
        for (k, c) in &self.terms {
            out.add_term(k, c.as_poly()?);
        }
        Some(out)
    }

    /// Returns `λ` with `self = λ·alpha`, if such a rational function exists.
    /// A zero form is proportional to anything with `λ = 0`.
    pub fn proportional_to(&self, alpha: &DiffForm<RatFunc>) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(RatFunc::zero(&self.chart));
        }
        if self.grade != alpha.grade || !compatible(&self.chart, &alpha.chart) {
            return None;
        }
        let (key, a) = alpha.terms.iter().next()?;
        let lambda = self.component(key).checked_div(a).ok()?;
        for k in self.terms.keys() {
            if !alpha.terms.contains_key(k) {
                return None;
            }
        }
        for (k, a) in &alpha.terms {
            if self.component(k) != a * &lambda {
                return None;
            }
        }
        Some(lambda)
    }
}

/// Checks for `β = λ·α`; see [`DiffForm::proportional_to`].
pub fn proportionality_test(beta: &DiffForm<RatFunc>, alpha: &DiffForm<RatFunc>) -> Option<RatFunc> {
    beta.proportional_to(alpha)
}

impl<C: Coeff> fmt::Display for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coeff> fmt::Debug for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm[{}]({})", self.grade, self.render())
    }
}

#[cfg(test)]
#[path = "form_tests.rs"]
mod tests;
