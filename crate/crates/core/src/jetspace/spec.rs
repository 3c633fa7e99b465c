use std::fmt;

use super::JetError;
use crate::symkernel::{Chart, CoordChart, CoordKind, Poly};

/// What a jet coordinate stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetCoord {
    Independent(usize),
    /// Dependent variable `dep` differentiated along the sorted multi-index `multi`
    /// (empty for the variable itself).
    Dependent { dep: usize, multi: Vec<usize> },
}

impl JetCoord {
    pub fn order(&self) -> usize {
        match self {
            JetCoord::Independent(_) => 0,
            JetCoord::Dependent { multi, .. } => multi.len(),
        }
    }
}

/// Independent and dependent variable names plus a maximum derivative order.
///
/// Coordinates are ordered: independents, dependents, then derivatives by
/// increasing order, multi-indices sorted lexicographically. For `(t, x; u)`
/// at order 2 this gives `(t, x, u, u_t, u_x, u_tt, u_tx, u_xx)`.
#[derive(Clone)]
pub struct JetSpec {
    independents: Vec<String>,
    dependents: Vec<String>,
    order: usize,
    coords: Vec<JetCoord>,
    chart: Chart,
}

fn multi_indices(p: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(p: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..p {
            cur.push(i);
            rec(p, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, k, 0, &mut Vec::new(), &mut out);
    out
}

impl JetSpec {
    pub fn new<S: AsRef<str>>(independents: &[S], dependents: &[S], order: usize) -> Result<Self, JetError> {
        let independents: Vec<String> = independents.iter().map(|s| s.as_ref().to_string()).collect();
        let dependents: Vec<String> = dependents.iter().map(|s| s.as_ref().to_string()).collect();
        if independents.is_empty() || dependents.is_empty() {
            return Err(JetError::BadSpec("need at least one independent and one dependent variable".into()));
        }
        if order > 0 && independents.iter().any(|n| n.chars().count() != 1) {
            return Err(JetError::BadSpec("independent variable names must be single letters".into()));
        }
        let mut coords = Vec::new();
        let mut named = Vec::new();
        for (i, n) in independents.iter().enumerate() {
            coords.push(JetCoord::Independent(i));
            named.push((n.clone(), CoordKind::Independent));
        }
        for k in 0..=order {
            for (a, dep) in dependents.iter().enumerate() {
                for multi in multi_indices(independents.len(), k) {
                    let name = if multi.is_empty() {
                        dep.clone()
                    } else {
                        let letters: String = multi.iter().map(|&i| independents[i].as_str()).collect();
                        format!("{dep}_{letters}")
                    };
                    let kind = if k == 0 { CoordKind::Dependent } else { CoordKind::Derivative };
                    coords.push(JetCoord::Dependent { dep: a, multi });
                    named.push((name, kind));
                }
            }
        }
        let chart = CoordChart::new(&named)?;
        Ok(JetSpec { independents, dependents, order, coords, chart })
    }

    /// Two independents `(t, x)`, one dependent `u`.
    pub fn kdv(order: usize) -> Self {
        Self::new(&["t", "x"], &["u"], order).expect("valid KdV jet spec")
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn independents(&self) -> &[String] {
        &self.independents
    }

    pub fn dependents(&self) -> &[String] {
        &self.dependents
    }

    pub fn num_independent(&self) -> usize {
        self.independents.len()
    }

    pub fn num_dependent(&self) -> usize {
        self.dependents.len()
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(&self.independents, &self.dependents, order).expect("same names, different order")
    }

    pub fn coord(&self, idx: usize) -> &JetCoord {
        &self.coords[idx]
    }

    pub fn coords(&self) -> &[JetCoord] {
        &self.coords
    }

    pub fn independent_index(&self, i: usize) -> usize {
        i
    }

    /// Chart index of `u^dep_multi` (multi-index in any order).
    pub fn derivative_index(&self, dep: usize, multi: &[usize]) -> Option<usize> {
        let mut m = multi.to_vec();
        m.sort_unstable();
        self.coords.iter().position(|c| matches!(c, JetCoord::Dependent { dep: d, multi: mm } if *d == dep && *mm == m))
    }

    /// Index of `u_{J,i}` for the coordinate `u_J` at `idx`.
    pub fn shift(&self, idx: usize, i: usize) -> Option<usize> {
        match &self.coords[idx] {
            JetCoord::Independent(_) => None,
            JetCoord::Dependent { dep, multi } => {
                let mut m = multi.clone();
                m.push(i);
                self.derivative_index(*dep, &m)
            }
        }
    }

    /// Coordinates of order zero: independents then dependents.
    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i].order() == 0).collect()
    }

    pub fn is_base(&self, idx: usize) -> bool {
        self.coords[idx].order() == 0
    }

    pub fn var(&self, name: &str) -> Result<Poly, JetError> {
        Ok(Poly::var_named(&self.chart, name)?)
    }
}

impl fmt::Debug for JetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetSpec{}", self.chart)
    }
}

impl PartialEq for JetSpec {
    fn eq(&self, other: &Self) -> bool {
        self.independents == other.independents && self.dependents == other.dependents && self.order == other.order
    }
}

/// A scalar equation `Δ = 0` on a jet chart, solved for a leading derivative.
#[derive(Clone, Debug)]
pub struct PdeSpec {
    jet: JetSpec,
    delta: Poly,
    leading: usize,
}

impl PdeSpec {
    pub fn new(jet: JetSpec, delta: Poly, leading: &str) -> Result<Self, JetError> {
        let delta = delta.rechart(jet.chart())?;
        let leading_idx = jet.chart().require(leading)?;
        if !delta.depends_on(leading_idx) {
            return Err(JetError::LeadingAbsent(leading.to_string()));
        }
        Ok(PdeSpec { jet, delta, leading: leading_idx })
    }

    pub fn parse(jet: JetSpec, delta: &str, leading: &str) -> Result<Self, JetError> {
        let p = crate::symkernel::parse_poly(delta, jet.chart())?;
        Self::new(jet, p, leading)
    }

    pub fn jet(&self) -> &JetSpec {
        &self.jet
    }

    pub fn delta(&self) -> &Poly {
        &self.delta
    }

    pub fn leading(&self) -> usize {
        self.leading
    }

    pub fn leading_name(&self) -> &str {
        self.jet.chart().name(self.leading)
    }
}
