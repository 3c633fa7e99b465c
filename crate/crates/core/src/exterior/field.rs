use std::collections::BTreeMap;
use std::fmt;

use super::coeff::Coeff;
use super::ExteriorError;
use crate::symkernel::chart::compatible;
use crate::symkernel::{Chart, Poly, RatFunc};

/// `Σ v^i ∂/∂x^i` over a chart.
#[derive(Clone, PartialEq)]
pub struct VectorField<C = RatFunc> {
    chart: Chart,
    comps: BTreeMap<usize, C>,
}

impl<C: Coeff> VectorField<C> {
    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), comps: BTreeMap::new() }
    }

    pub fn from_components(chart: &Chart, comps: impl IntoIterator<Item = (usize, C)>) -> Self {
        let mut out = Self::zero(chart);
        for (i, c) in comps {
            out.add_component(i, c);
        }
        out
    }

    /// The coordinate field `∂/∂x^idx`.
    pub fn coordinate(chart: &Chart, idx: usize) -> Self {
        Self::from_components(chart, [(idx, C::one_on(chart))])
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn component(&self, idx: usize) -> C {
        self.comps.get(&idx).cloned().unwrap_or_else(|| C::zero_on(&self.chart))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &C)> {
        self.comps.iter().map(|(i, c)| (*i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, idx: usize, c: C) {
        let merged = match self.comps.get(&idx) {
            Some(old) => old.add(&c),
            None => c,
        };
        if merged.is_zero() {
            self.comps.remove(&idx);
        } else {
            self.comps.insert(idx, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.comps {
            out.add_component(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::constant_on(&self.chart, crate::symkernel::scalar::int(-1))))
    }

    pub fn scale(&self, f: &C) -> Self {
        Self::from_components(&self.chart, self.comps.iter().map(|(i, c)| (*i, c.mul(f))))
    }

    /// `v(f) = Σ v^i ∂f/∂x^i`.
    pub fn apply(&self, f: &C) -> C {
        let mut acc = C::zero_on(&self.chart);
        for (i, c) in &self.comps {
            if f.depends_on(&self.chart, *i) {
                acc = acc.add(&c.mul(&f.partial(&self.chart, *i)));
            }
        }
        acc
    }

    /// `[a, b]^i = a(b^i) - b(a^i)`.
    pub fn bracket(&self, other: &Self) -> Result<Self, ExteriorError> {
        if !compatible(&self.chart, &other.chart) {
            return Err(ExteriorError::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        let idxs: std::collections::BTreeSet<usize> =
            self.comps.keys().chain(other.comps.keys()).copied().collect();
        for i in idxs {
            let c = self.apply(&other.component(i)).sub(&other.apply(&self.component(i)));
            out.add_component(i, c);
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, chart: &Chart, f: impl Fn(&C) -> D) -> VectorField<D> {
        VectorField::from_components(chart, self.comps.iter().map(|(i, c)| (*i, f(c))))
    }

    /// Renders as `coef*d_name + ...` in chart order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, (i, c)) in self.comps.iter().enumerate() {
            let (neg, text) = c.factor_text();
            let basis = format!("d_{}", self.chart.name(*i));
            let body = match text {
                Some(t) => format!("{t}*{basis}"),
                None => basis,
            };
            match (k, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl VectorField<Poly> {
    pub fn to_ratfunc(&self) -> VectorField<RatFunc> {
        self.map_coeffs(&self.chart, |p| RatFunc::from_poly(p.clone()))
    }

    pub fn rechart(&self, target: &Chart) -> Result<VectorField<Poly>, ExteriorError> {
        let mut out = VectorField::zero(target);
        for (i, c) in &self.comps {
            let j = target
                .index(self.chart.name(*i))
                .ok_or_else(|| ExteriorError::UnknownCoordinate(self.chart.name(*i).to_string()))?;
            out.add_component(j, c.rechart(target)?);
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for VectorField<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coeff> fmt::Debug for VectorField<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({})", self.render())
    }
}
