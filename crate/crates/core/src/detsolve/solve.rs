use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exterior::VectorField;
use crate::ratlinalg::{nullspace, rref, solve_in_span, span_basis, MatrixQ, SparseRow};
use crate::symkernel::{Chart, Monomial, Poly, Scalar};

use super::system::{multiplier_form, multiplier_unknowns, Condition, ConditionMode, DeterminingSystem, SystemKind, Unknown};
use super::{ContactIdeal, DetError};

/// Independent symmetry fields recovered from a determining system.
#[derive(Debug, Clone)]
pub struct SymmetryBasis {
    pub kind: SystemKind,
    pub chart: Chart,
    pub fields: Vec<VectorField<Poly>>,
    /// Nonzero multiplier unknowns accompanying each field, by label.
    pub multipliers: Vec<BTreeMap<String, Scalar>>,
    /// Dimension of the full solution space including multiplier freedom.
    pub nullity: usize,
}

impl SymmetryBasis {
    pub fn dim(&self) -> usize {
        self.fields.len()
    }
}

/// Coefficient vector of a field over the monomials of its components, with
/// a fixed frame shared by all inputs.
pub fn field_vectors(fields: &[VectorField<Poly>]) -> Vec<Vec<Scalar>> {
    let mut frame: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for f in fields {
        for (k, c) in f.components() {
            for (m, _) in c.terms() {
                frame.entry((k, m.clone())).or_insert(0);
            }
        }
    }
    for (i, v) in frame.values_mut().enumerate() {
        *v = i;
    }
    fields
        .iter()
        .map(|f| {
            let mut v = vec![Scalar::zero(); frame.len()];
            for (k, c) in f.components() {
                for (m, s) in c.terms() {
                    v[frame[&(k, m.clone())]] = s.clone();
                }
            }
            v
        })
        .collect()
}

/// True iff the two families of fields span the same space.
pub fn fields_span_equal(a: &[VectorField<Poly>], b: &[VectorField<Poly>]) -> bool {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    let vs = field_vectors(&all);
    let (va, vb) = vs.split_at(a.len());
    crate::ratlinalg::span_equal(va, vb).expect("shared frame")
}

pub fn solve_system(sys: &DeterminingSystem) -> SymmetryBasis {
    let null = nullspace(&sys.matrix);
    let field_cols = sys.field_columns();
    let projected: Vec<Vec<Scalar>> = null.iter().map(|v| field_cols.iter().map(|&c| v[c].clone()).collect()).collect();
    let basis = if field_cols.is_empty() { Vec::new() } else { span_basis(&projected).expect("uniform length") };
    let mut fields = Vec::new();
    let mut multipliers = Vec::new();
    for b in &basis {
        let coords = solve_in_span(&projected, b).expect("uniform length").expect("basis lies in span");
        let mut full = vec![Scalar::zero(); sys.num_unknowns()];
        for (c, n) in coords.iter().zip(&null) {
            if c.is_zero() {
                continue;
            }
            for (f, x) in full.iter_mut().zip(n) {
                *f += c * x;
            }
        }
        fields.push(sys.field_from(&full));
        let mult: BTreeMap<String, Scalar> = sys
            .unknowns
            .iter()
            .enumerate()
            .filter(|(i, u)| !u.is_field() && !full[*i].is_zero())
            .map(|(i, _)| (sys.registry.names()[i].clone(), full[i].clone()))
            .collect();
        multipliers.push(mult);
    }
    SymmetryBasis { kind: sys.kind, chart: sys.chart.clone(), fields, multipliers, nullity: null.len() }
}

/// Outcome of checking one generator.
#[derive(Debug, Clone)]
pub struct GeneratorVerdict {
    pub generator: usize,
    pub mode: ConditionMode,
    pub passed: bool,
    /// Multiplier polynomials realising the membership, by label; empty on failure.
    pub witnesses: BTreeMap<String, Poly>,
}

/// Checks `L_v α^i` against each condition, solving for multipliers of
/// degree at most `mult_degree`.
pub fn verify_symmetry(
    field: &VectorField<Poly>,
    ideal: &ContactIdeal,
    conditions: &[Condition],
    mult_degree: u32,
) -> Result<Vec<GeneratorVerdict>, DetError> {
    let chart = ideal.chart();
    let v = field.rechart(chart)?;
    let mut out = Vec::new();
    for &cond in conditions {
        if cond.generator == 0 || cond.generator > ideal.alphas().len() {
            return Err(DetError::BadConditions(format!("generator {}", cond.generator)));
        }
        let target = ideal.alpha(cond.generator).lie_derivative(&v)?;
        let unknowns = multiplier_unknowns(ideal, cond, mult_degree);
        let forms: Vec<_> = unknowns.iter().map(|u| multiplier_form(ideal, u)).collect();
        // rows: (component, monomial); columns: multipliers then the right-hand side
        let mut keys: BTreeMap<(Vec<usize>, Monomial), usize> = BTreeMap::new();
        let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
        let n = unknowns.len();
        let mut push = |col: usize, form: &crate::exterior::DiffForm<Poly>, sign: bool| {
            for (idx, c) in form.terms() {
                for (m, s) in c.terms() {
                    let next = keys.len();
                    let r = *keys.entry((idx.to_vec(), m.clone())).or_insert(next);
                    entries.push((r, col, if sign { -s.clone() } else { s.clone() }));
                }
            }
        };
        for (i, f) in forms.iter().enumerate() {
            push(i, f, true);
        }
        push(n, &target, false);
        let mut rows = vec![SparseRow::new(); keys.len()];
        for (r, c, s) in entries {
            let e = rows[r].entry(c).or_insert_with(Scalar::zero);
            *e += s;
        }
        let mut m = MatrixQ::with_cols(n + 1);
        for r in rows {
            m.push_sparse(r).expect("in range");
        }
        let red = rref(&m);
        let passed = !red.pivots.contains(&n);
        let mut witnesses = BTreeMap::new();
        if passed {
            let mut sol = vec![Scalar::zero(); n];
            for (&p, row) in red.pivots.iter().zip(red.matrix.rows()) {
                sol[p] = row.get(&n).cloned().unwrap_or_else(Scalar::zero);
            }
            for (u, s) in unknowns.iter().zip(&sol) {
                if s.is_zero() {
                    continue;
                }
                let (label, mono) = match u {
                    Unknown::Multiplier { other, mono, .. } => match cond.mode {
                        ConditionMode::Proportional => (format!("lambda{}", cond.generator), mono),
                        _ => (format!("f{}", other), mono),
                    },
                    Unknown::Sigma { theta, coord, mono, .. } => (format!("sigma{}.d{}", theta, chart.name(*coord)), mono),
                    Unknown::Field { .. } => unreachable!(),
                };
                let e = witnesses.entry(label).or_insert_with(|| Poly::zero(chart));
                *e = &*e + &Poly::term(chart, mono.clone(), s.clone());
            }
        }
        out.push(GeneratorVerdict { generator: cond.generator, mode: cond.mode, passed, witnesses });
    }
    Ok(out)
}
