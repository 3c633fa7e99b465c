//! Polynomials whose coefficients are affine-linear in a set of unknown parameters.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::chart::{compatible, Chart};
use super::poly::{Monomial, Poly};
use super::scalar::{self, Scalar};
use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub usize);

/// Names of the unknowns shared by one determining-system build.
#[derive(Clone, Debug, Default)]
pub struct ParamRegistry {
    names: Vec<String>,
}

impl ParamRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>) -> ParamId {
        self.names.push(name.into());
        ParamId(self.names.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// `constant + Σ c·p`, one entry per parameter.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AffineForm {
    pub coeffs: BTreeMap<ParamId, Scalar>,
    pub constant: Scalar,
}

impl AffineForm {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.coeffs.iter().fold(self.constant.clone(), |acc, (id, c)| acc + c * &values[id.0])
    }
}

/// `P₀ + Σ_k c_k·P_k` with polynomial `P_k` and unknown scalars `c_k`.
#[derive(Clone)]
pub struct ParamPoly {
    chart: Chart,
    constant: Poly,
    parts: BTreeMap<ParamId, Poly>,
}

impl ParamPoly {
    pub fn zero(chart: &Chart) -> Self {
        ParamPoly { chart: chart.clone(), constant: Poly::zero(chart), parts: BTreeMap::new() }
    }

    pub fn from_poly(p: Poly) -> Self {
        ParamPoly { chart: p.chart().clone(), constant: p, parts: BTreeMap::new() }
    }

    /// The term `c_id · p`.
    pub fn param_times(id: ParamId, p: Poly) -> Self {
        let mut out = Self::zero(p.chart());
        if !p.is_zero() {
            out.parts.insert(id, p);
        }
        out
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn constant_part(&self) -> &Poly {
        &self.constant
    }

    pub fn parts(&self) -> impl Iterator<Item = (ParamId, &Poly)> {
        self.parts.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.parts.is_empty()
    }

    pub fn has_params(&self) -> bool {
        !self.parts.is_empty()
    }

    fn check(&self, other: &ParamPoly) -> Result<(), KernelError> {
        if compatible(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(KernelError::ChartMismatch(self.chart.to_string(), other.chart.to_string()))
        }
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> ParamPoly {
        let mut parts = BTreeMap::new();
        for (k, p) in &self.parts {
            let q = f(p);
            if !q.is_zero() {
                parts.insert(*k, q);
            }
        }
        ParamPoly { chart: self.chart.clone(), constant: f(&self.constant), parts }
    }

    pub fn add(&self, other: &ParamPoly) -> Result<ParamPoly, KernelError> {
        self.check(other)?;
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (k, p) in &other.parts {
            let merged = match out.parts.get(k) {
                Some(q) => q + p,
                None => p.clone(),
            };
            if merged.is_zero() {
                out.parts.remove(k);
            } else {
                out.parts.insert(*k, merged);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> ParamPoly {
        self.map(|p| -p)
    }

    pub fn sub(&self, other: &ParamPoly) -> Result<ParamPoly, KernelError> {
        self.add(&other.neg())
    }

    pub fn mul_poly(&self, p: &Poly) -> ParamPoly {
        self.map(|q| q * p)
    }

    pub fn scale(&self, c: &Scalar) -> ParamPoly {
        self.map(|q| q.scale(c))
    }

    /// Product; fails when both factors carry parameters (the result would be quadratic).
    pub fn mul(&self, other: &ParamPoly) -> Result<ParamPoly, KernelError> {
        self.check(other)?;
        match (self.has_params(), other.has_params()) {
            (true, true) => Err(KernelError::NonLinearParameters),
            (false, _) => Ok(other.mul_poly(&self.constant)),
            (true, false) => Ok(self.mul_poly(&other.constant)),
        }
    }

    pub fn partial(&self, idx: usize) -> ParamPoly {
        self.map(|p| p.partial(idx))
    }

    /// Applies the same linear map to every component.
    pub fn map_linear(&self, f: impl Fn(&Poly) -> Poly) -> ParamPoly {
        self.map(f)
    }

    /// Plugs in numeric values for every parameter.
    pub fn specialize(&self, values: &[Scalar]) -> Poly {
        let mut out = self.constant.clone();
        for (k, p) in &self.parts {
            let v = &values[k.0];
            if !v.is_zero() {
                out = &out + &p.scale(v);
            }
        }
        out
    }

    /// Coefficient of every monomial as an affine form in the parameters.
    pub fn coefficient_forms(&self) -> BTreeMap<Monomial, AffineForm> {
        let mut out: BTreeMap<Monomial, AffineForm> = BTreeMap::new();
        for (m, c) in self.constant.terms() {
            out.entry(m.clone()).or_default().constant = c.clone();
        }
        for (k, p) in &self.parts {
            for (m, c) in p.terms() {
                out.entry(m.clone()).or_default().coeffs.insert(*k, c.clone());
            }
        }
        out
    }

    pub fn render(&self, registry: &ParamRegistry) -> String {
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(self.constant.render());
        }
        for (k, p) in &self.parts {
            parts.push(format!("{}*({})", registry.name(*k), p.render()));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({}", self.constant)?;
        for (k, p) in &self.parts {
            write!(f, " + c{}*({})", k.0, p)?;
        }
        write!(f, ")")
    }
}

pub fn zero_values(n: usize) -> Vec<Scalar> {
    vec![scalar::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::chart::CoordChart;

    #[test]
    fn quadratic_products_are_rejected() {
        let ch = CoordChart::plain(&["x"]).unwrap();
        let mut reg = ParamRegistry::new();
        let a = reg.add("a");
        let b = reg.add("b");
        let pa = ParamPoly::param_times(a, Poly::var(&ch, 0));
        let pb = ParamPoly::param_times(b, Poly::one(&ch));
        assert!(matches!(pa.mul(&pb), Err(KernelError::NonLinearParameters)));
        let k = ParamPoly::from_poly(Poly::var(&ch, 0));
        assert!(pa.mul(&k).is_ok());
    }

    #[test]
    fn coefficient_forms_collect_by_monomial() {
        let ch = CoordChart::plain(&["x"]).unwrap();
        let mut reg = ParamRegistry::new();
        let a = reg.add("a");
        let x = Poly::var(&ch, 0);
        let p = ParamPoly::param_times(a, x.clone()).add(&ParamPoly::from_poly(x.scale(&scalar::int(2)))).unwrap();
        let rows = p.coefficient_forms();
        assert_eq!(rows.len(), 1);
        let row = rows.values().next().unwrap();
        assert_eq!(row.constant, scalar::int(2));
        assert_eq!(row.coeffs[&a], scalar::int(1));
        assert_eq!(row.eval(&[scalar::int(-2)]), scalar::zero());
    }
}
