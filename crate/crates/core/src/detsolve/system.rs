use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exterior::{DiffForm, VectorField};
use crate::jetspace::{apply_to_equation, on_solution_reduce_all, prolong, PdeSpec};
use crate::par::{self, Exec};
use crate::ratlinalg::{MatrixQ, SparseRow};
use crate::symkernel::{Chart, Monomial, ParamRegistry, Poly, Scalar};

use super::{ContactIdeal, DetError};

/// How the Lie derivative of one generator is required to fall back into the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionMode {
    /// `L_v α^i = λ_i α^i`
    Proportional,
    /// `L_v α^i = Σ_k f_k α^k`
    Module,
    /// `L_v α^i = Σ_k f_k α^k + Σ_j σ^j ∧ θ^j`
    Ideal,
}

impl ConditionMode {
    pub fn name(self) -> &'static str {
        match self {
            ConditionMode::Proportional => "proportional",
            ConditionMode::Module => "module",
            ConditionMode::Ideal => "ideal",
        }
    }

    pub fn parse(s: &str) -> Option<ConditionMode> {
        match s {
            "proportional" | "p" => Some(ConditionMode::Proportional),
            "module" | "m" => Some(ConditionMode::Module),
            "ideal" | "i" => Some(ConditionMode::Ideal),
            _ => None,
        }
    }

    /// Mode used when only a generator number is given.
    pub fn default_for(generator: usize) -> ConditionMode {
        if generator <= 3 {
            ConditionMode::Proportional
        } else {
            ConditionMode::Ideal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    /// 1-based generator number.
    pub generator: usize,
    pub mode: ConditionMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSet(Vec<Condition>);

impl ConditionSet {
    pub fn new(mut conds: Vec<Condition>) -> ConditionSet {
        conds.sort();
        conds.dedup_by_key(|c| c.generator);
        ConditionSet(conds)
    }

    pub fn empty() -> ConditionSet {
        ConditionSet(Vec::new())
    }

    pub fn of(generators: &[usize]) -> ConditionSet {
        ConditionSet::new(generators.iter().map(|&g| Condition { generator: g, mode: ConditionMode::default_for(g) }).collect())
    }

    pub fn uniform(generators: &[usize], mode: ConditionMode) -> ConditionSet {
        ConditionSet::new(generators.iter().map(|&g| Condition { generator: g, mode }).collect())
    }

    /// Parses `1,2,3`, `1-7`, `none`, and per-generator modes like `1:module,4:ideal`.
    pub fn parse(s: &str) -> Result<ConditionSet, DetError> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(ConditionSet::empty());
        }
        let bad = || DetError::BadConditions(s.to_string());
        let mut out = Vec::new();
        for part in s.split(',') {
            let (gens, mode) = match part.split_once(':') {
                Some((g, m)) => (g.trim(), Some(ConditionMode::parse(m.trim()).ok_or_else(bad)?)),
                None => (part.trim(), None),
            };
            let range: Vec<usize> = match gens.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                    (a..=b).collect()
                }
                None => vec![gens.parse().map_err(|_| bad())?],
            };
            for g in range {
                if !(1..=7).contains(&g) {
                    return Err(bad());
                }
                out.push(Condition { generator: g, mode: mode.unwrap_or(ConditionMode::default_for(g)) });
            }
        }
        Ok(ConditionSet::new(out))
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for ConditionSet {
    /// All seven generators with module membership.
    fn default() -> Self {
        ConditionSet::uniform(&[1, 2, 3, 4, 5, 6, 7], ConditionMode::Module)
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "none");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let start = self.0[i];
            let mut end = i;
            while end + 1 < self.0.len() && self.0[end + 1].mode == start.mode && self.0[end + 1].generator == self.0[end].generator + 1 {
                end += 1;
            }
            let last = self.0[end].generator;
            if last == start.generator {
                parts.push(format!("{}:{}", start.generator, start.mode.name()));
            } else {
                parts.push(format!("{}-{}:{}", start.generator, last, start.mode.name()));
            }
            i = end + 1;
        }
        write!(f, "{}", parts.join(","))
    }
}

/// One unknown of a determining system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unknown {
    /// Coefficient of `mono` in the component of the field along `coord`.
    Field { coord: usize, mono: Monomial },
    /// Coefficient of `mono` in the multiplier of `α^other` for condition `generator`.
    Multiplier { generator: usize, other: usize, mono: Monomial },
    /// Coefficient of `mono` in the `d coord` component of `σ^theta` for condition `generator`.
    Sigma { generator: usize, theta: usize, coord: usize, mono: Monomial },
}

impl Unknown {
    pub fn is_field(&self) -> bool {
        matches!(self, Unknown::Field { .. })
    }

    pub fn label(&self, chart: &Chart, mode: Option<ConditionMode>) -> String {
        match self {
            Unknown::Field { coord, mono } => format!("A{}[{}]", coord + 1, mono.render(chart.names())),
            Unknown::Multiplier { generator, other, mono } => match mode {
                Some(ConditionMode::Proportional) => format!("lambda{}[{}]", generator, mono.render(chart.names())),
                _ => format!("f{}_{}[{}]", generator, other, mono.render(chart.names())),
            },
            Unknown::Sigma { generator, theta, coord, mono } => {
                format!("sigma{}_{}.d{}[{}]", generator, theta, chart.name(*coord), mono.render(chart.names()))
            }
        }
    }
}

/// Where a row came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowTag {
    /// Generator number for form conditions, `None` for the classical condition.
    pub generator: Option<usize>,
    /// Form component (sorted coordinate indices), empty for the classical condition.
    pub component: Vec<usize>,
    pub monomial: Monomial,
}

impl RowTag {
    pub fn describe(&self, chart: &Chart) -> String {
        let mono = self.monomial.render(chart.names());
        match self.generator {
            Some(g) => {
                let comp: Vec<String> = self.component.iter().map(|&k| format!("d{}", chart.name(k))).collect();
                format!("alpha{} {} [{}]", g, comp.join("^"), mono)
            }
            None => format!("residual [{}]", mono),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Harrison,
    Classical,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Harrison => "harrison",
            SystemKind::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeterminingSystem {
    pub kind: SystemKind,
    /// Chart the unknown field lives on.
    pub chart: Chart,
    pub registry: ParamRegistry,
    pub unknowns: Vec<Unknown>,
    pub matrix: MatrixQ,
    pub rows: Vec<RowTag>,
    pub conditions: ConditionSet,
    pub degree: u32,
    pub mult_degree: u32,
}

impl DeterminingSystem {
    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn field_columns(&self) -> Vec<usize> {
        (0..self.unknowns.len()).filter(|&i| self.unknowns[i].is_field()).collect()
    }

    pub fn mode_of(&self, generator: usize) -> Option<ConditionMode> {
        self.conditions.conditions().iter().find(|c| c.generator == generator).map(|c| c.mode)
    }

    /// Field described by a parameter vector.
    pub fn field_from(&self, values: &[Scalar]) -> VectorField<Poly> {
        let mut v = VectorField::zero(&self.chart);
        for (u, val) in self.unknowns.iter().zip(values) {
            if let Unknown::Field { coord, mono } = u {
                v.add_component(*coord, Poly::term(&self.chart, mono.clone(), val.clone()));
            }
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct HarrisonOptions {
    pub degree: u32,
    pub mult_degree: u32,
    pub conditions: ConditionSet,
    pub max_unknowns: usize,
    pub exec: Exec,
}

impl Default for HarrisonOptions {
    fn default() -> Self {
        HarrisonOptions { degree: 1, mult_degree: 1, conditions: ConditionSet::default(), max_unknowns: 20_000, exec: Exec::default() }
    }
}

type RowKey = (usize, Vec<usize>, Monomial);

fn all_vars(chart: &Chart) -> Vec<usize> {
    (0..chart.dim()).collect()
}

pub(crate) fn multiplier_unknowns(ideal: &ContactIdeal, cond: Condition, mult_degree: u32) -> Vec<Unknown> {
    let chart = ideal.chart();
    let monos = Monomial::all_up_to_in(chart.dim(), &all_vars(chart), mult_degree);
    let others: Vec<usize> = match cond.mode {
        ConditionMode::Proportional => vec![cond.generator],
        ConditionMode::Module => (1..=ideal.alphas().len()).collect(),
        ConditionMode::Ideal => (4..=ideal.alphas().len()).collect(),
    };
    let mut out = Vec::new();
    for &k in &others {
        for m in &monos {
            out.push(Unknown::Multiplier { generator: cond.generator, other: k, mono: m.clone() });
        }
    }
    if cond.mode == ConditionMode::Ideal {
        for j in 1..=ideal.thetas().len() {
            for c in 0..chart.dim() {
                for m in &monos {
                    out.push(Unknown::Sigma { generator: cond.generator, theta: j, coord: c, mono: m.clone() });
                }
            }
        }
    }
    out
}

fn push_form(out: &mut Vec<(RowKey, Scalar)>, pos: usize, form: &DiffForm<Poly>) {
    for (idx, c) in form.terms() {
        for (m, s) in c.terms() {
            out.push(((pos, idx.to_vec(), m.clone()), s.clone()));
        }
    }
}

/// Contribution of one multiplier unknown, already negated so the condition
/// reads `L_v α - Σ multipliers = 0`.
pub(crate) fn multiplier_form(ideal: &ContactIdeal, u: &Unknown) -> DiffForm<Poly> {
    let chart = ideal.chart();
    match u {
        Unknown::Multiplier { other, mono, .. } => {
            let m = Poly::term(chart, mono.clone(), Scalar::from_integer((-1).into()));
            ideal.alpha(*other).scale(&m)
        }
        Unknown::Sigma { theta, coord, mono, .. } => {
            let m = Poly::term(chart, mono.clone(), Scalar::from_integer((-1).into()));
            let dc = DiffForm::<Poly>::differential(chart, *coord).scale(&m);
            dc.wedge(&ideal.thetas()[theta - 1]).expect("same chart")
        }
        Unknown::Field { .. } => unreachable!("field unknowns have no multiplier form"),
    }
}

fn harrison_column(ideal: &ContactIdeal, conds: &[Condition], u: &Unknown) -> Vec<(RowKey, Scalar)> {
    let mut out = Vec::new();
    match u {
        Unknown::Field { coord, mono } => {
            let chart = ideal.chart();
            let b = VectorField::from_components(chart, [(*coord, Poly::term(chart, mono.clone(), Scalar::from_integer(1.into())))]);
            for (pos, c) in conds.iter().enumerate() {
                let l = ideal.alpha(c.generator).lie_derivative(&b).expect("same chart");
                push_form(&mut out, pos, &l);
            }
        }
        Unknown::Multiplier { generator, .. } | Unknown::Sigma { generator, .. } => {
            let pos = conds.iter().position(|c| c.generator == *generator).expect("registered condition");
            push_form(&mut out, pos, &multiplier_form(ideal, u));
        }
    }
    out
}

fn merge_columns(
    columns: Vec<Vec<(RowKey, Scalar)>>,
    ncols: usize,
    tag: impl Fn(&RowKey) -> RowTag,
) -> (MatrixQ, Vec<RowTag>) {
    let keys: BTreeSet<RowKey> = columns.iter().flat_map(|c| c.iter().map(|(k, _)| k.clone())).collect();
    let index: BTreeMap<&RowKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut rows = vec![SparseRow::new(); keys.len()];
    for (col, entries) in columns.iter().enumerate() {
        for (k, v) in entries {
            let e = rows[index[k]].entry(col).or_insert_with(|| Scalar::from_integer(0.into()));
            *e += v;
        }
    }
    let mut m = MatrixQ::with_cols(ncols);
    let mut tags = Vec::with_capacity(rows.len());
    for (k, r) in keys.iter().zip(rows) {
        if r.values().any(|v| *v != Scalar::from_integer(0.into())) {
            m.push_sparse(r).expect("columns in range");
            tags.push(tag(k));
        }
    }
    (m, tags)
}

/// Linear system for `L_v α^i` conditions with a polynomial ansatz for the
/// components of `v` and for the multipliers.
pub fn assemble_harrison(ideal: &ContactIdeal, opts: &HarrisonOptions) -> Result<DeterminingSystem, DetError> {
    let chart = ideal.chart().clone();
    let field_monos = Monomial::all_up_to_in(chart.dim(), &all_vars(&chart), opts.degree);
    let mut unknowns: Vec<Unknown> = Vec::new();
    for coord in 0..chart.dim() {
        for m in &field_monos {
            unknowns.push(Unknown::Field { coord, mono: m.clone() });
        }
    }
    let conds = opts.conditions.conditions().to_vec();
    for c in &conds {
        if c.generator > ideal.alphas().len() {
            return Err(DetError::BadConditions(opts.conditions.to_string()));
        }
        let n = unknowns.len() + multiplier_unknowns(ideal, *c, opts.mult_degree).len();
        if n > opts.max_unknowns {
            return Err(DetError::TooManyUnknowns(n, opts.max_unknowns));
        }
        unknowns.extend(multiplier_unknowns(ideal, *c, opts.mult_degree));
    }
    let mut registry = ParamRegistry::new();
    for u in &unknowns {
        let mode = match u {
            Unknown::Multiplier { generator, .. } => conds.iter().find(|c| c.generator == *generator).map(|c| c.mode),
            _ => None,
        };
        registry.add(u.label(&chart, mode));
    }
    let columns = par::map(opts.exec, &unknowns, |u| harrison_column(ideal, &conds, u));
    let (matrix, rows) = merge_columns(columns, unknowns.len(), |(pos, comp, m)| RowTag {
        generator: Some(conds[*pos].generator),
        component: comp.clone(),
        monomial: m.clone(),
    });
    Ok(DeterminingSystem {
        kind: SystemKind::Harrison,
        chart,
        registry,
        unknowns,
        matrix,
        rows,
        conditions: opts.conditions.clone(),
        degree: opts.degree,
        mult_degree: opts.mult_degree,
    })
}

#[derive(Debug, Clone)]
pub struct ClassicalOptions {
    pub degree: u32,
    /// Prolongation order; `None` uses the order of the equation.
    pub order: Option<usize>,
    pub max_unknowns: usize,
    pub exec: Exec,
}

impl Default for ClassicalOptions {
    fn default() -> Self {
        ClassicalOptions { degree: 2, order: None, max_unknowns: 20_000, exec: Exec::default() }
    }
}

/// Linear system for `pr X (Δ) ≡ 0` on solutions with a polynomial point-field ansatz.
pub fn assemble_classical(pde: &PdeSpec, opts: &ClassicalOptions) -> Result<DeterminingSystem, DetError> {
    let jet = pde.jet();
    let order = opts.order.unwrap_or(jet.order());
    if order < jet.order() {
        return Err(DetError::OrderTooLow(order, jet.order()));
    }
    let base = jet.with_order(0);
    let chart = base.chart().clone();
    let monos = Monomial::all_up_to_in(chart.dim(), &all_vars(&chart), opts.degree);
    let mut unknowns = Vec::new();
    for coord in 0..chart.dim() {
        for m in &monos {
            unknowns.push(Unknown::Field { coord, mono: m.clone() });
        }
    }
    if unknowns.len() > opts.max_unknowns {
        return Err(DetError::TooManyUnknowns(unknowns.len(), opts.max_unknowns));
    }
    let applied = par::map(opts.exec, &unknowns, |u| -> Result<Poly, DetError> {
        let Unknown::Field { coord, mono } = u else { unreachable!() };
        let b = VectorField::from_components(&chart, [(*coord, Poly::term(&chart, mono.clone(), Scalar::from_integer(1.into())))]);
        let pr = prolong(&b, order, &base)?;
        Ok(apply_to_equation(&pr, pde)?)
    });
    let applied = applied.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (remainders, _) = on_solution_reduce_all(&applied, pde)?;
    let columns: Vec<Vec<(RowKey, Scalar)>> =
        remainders.iter().map(|r| r.terms().map(|(m, s)| ((0, Vec::new(), m.clone()), s.clone())).collect()).collect();
    let (matrix, rows) =
        merge_columns(columns, unknowns.len(), |(_, _, m)| RowTag { generator: None, component: Vec::new(), monomial: m.clone() });
    let mut registry = ParamRegistry::new();
    for u in &unknowns {
        registry.add(u.label(&chart, None));
    }
    Ok(DeterminingSystem {
        kind: SystemKind::Classical,
        chart,
        registry,
        unknowns,
        matrix,
        rows,
        conditions: ConditionSet::empty(),
        degree: opts.degree,
        mult_degree: 0,
    })
}
