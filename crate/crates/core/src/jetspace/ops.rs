use super::spec::{JetCoord, JetSpec, PdeSpec};
use super::JetError;
use crate::exterior::{DiffForm, VectorField};
use crate::symkernel::{ParamPoly, Poly};

/// `du_J - Σ_i u_{J,i} dx^i` for every `u_J` of order below the spec's order.
pub fn contact_forms(spec: &JetSpec) -> Vec<DiffForm<Poly>> {
    let chart = spec.chart();
    let mut out = Vec::new();
    for (idx, c) in spec.coords().iter().enumerate() {
        if let JetCoord::Dependent { .. } = c {
            if c.order() >= spec.order() {
                continue;
            }
            let mut f = DiffForm::differential(chart, idx);
            for i in 0..spec.num_independent() {
                let next = spec.shift(idx, i).expect("order checked");
                f.add_term(&[i], -Poly::var(chart, next));
            }
            out.push(f);
        }
    }
    out
}

/// `D_i f = ∂_i f + Σ_J u_{J,i} ∂f/∂u_J`.
pub fn total_derivative(expr: &Poly, wrt: usize, spec: &JetSpec) -> Result<Poly, JetError> {
    let chart = spec.chart();
    let expr = expr.rechart(chart)?;
    let mut out = expr.partial(wrt);
    for idx in expr.support() {
        if let JetCoord::Dependent { .. } = spec.coord(idx) {
            let next = spec
                .shift(idx, wrt)
                .ok_or_else(|| JetError::OrderOverflow(chart.name(idx).to_string(), spec.independents()[wrt].clone()))?;
            out = &out + &(&Poly::var(chart, next) * &expr.partial(idx));
        }
    }
    Ok(out)
}

/// Named-variable convenience for [`total_derivative`].
pub fn total_derivative_named(expr: &Poly, wrt: &str, spec: &JetSpec) -> Result<Poly, JetError> {
    let i = spec
        .independents()
        .iter()
        .position(|n| n == wrt)
        .ok_or_else(|| JetError::BadSpec(format!("`{wrt}` is not an independent variable")))?;
    total_derivative(expr, i, spec)
}

/// Prolongs a point vector field to the jet chart of the given order using
/// `φ^{J,i} = D_i φ^J - Σ_j u_{J,j} D_i ξ^j`.
pub fn prolong(field: &VectorField<Poly>, order: usize, spec: &JetSpec) -> Result<VectorField<Poly>, JetError> {
    let target = spec.with_order(order);
    let chart = target.chart();
    let field = field.rechart(chart)?;
    for (idx, c) in field.components() {
        if !target.is_base(idx) {
            return Err(JetError::NotPointField(format!("component along {}", chart.name(idx))));
        }
        if let Some(bad) = c.support().into_iter().find(|&k| !target.is_base(k)) {
            return Err(JetError::NotPointField(format!("coefficient depends on {}", chart.name(bad))));
        }
    }
    let p = target.num_independent();
    let xi: Vec<Poly> = (0..p).map(|j| field.component(j)).collect();
    // D_i ξ^j, reused for every multi-index.
    let mut dxi = vec![vec![Poly::zero(chart); p]; p];
    for i in 0..p {
        for j in 0..p {
            dxi[i][j] = total_derivative(&xi[j], i, &target)?;
        }
    }
    let mut phi: Vec<Option<Poly>> = vec![None; chart.dim()];
    for idx in target.base_indices() {
        phi[idx] = Some(field.component(idx));
    }
    for (idx, c) in target.coords().iter().enumerate() {
        let JetCoord::Dependent { dep, multi } = c else { continue };
        if multi.is_empty() {
            continue;
        }
        let (&i, parent_multi) = multi.split_last().unwrap();
        let parent = target.derivative_index(*dep, parent_multi).unwrap();
        let parent_phi = phi[parent].clone().expect("parents precede children");
        let mut value = total_derivative(&parent_phi, i, &target)?;
        for j in 0..p {
            if dxi[i][j].is_zero() {
                continue;
            }
            let ujj = target.shift(parent, j).unwrap();
            value = &value - &(&Poly::var(chart, ujj) * &dxi[i][j]);
        }
        phi[idx] = Some(value);
    }
    Ok(VectorField::from_components(
        chart,
        phi.into_iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p))),
    ))
}

/// `pr X(Δ)` for an already-prolonged field.
pub fn apply_to_equation(prolonged: &VectorField<Poly>, pde: &PdeSpec) -> Result<Poly, JetError> {
    let delta = pde.delta().rechart(prolonged.chart())?;
    let mut acc = Poly::zero(prolonged.chart());
    for (idx, c) in prolonged.components() {
        if delta.depends_on(idx) {
            acc = &acc + &(c * &delta.partial(idx));
        }
    }
    Ok(acc)
}

/// Outcome of reducing an expression modulo an equation and its differential consequences.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Pseudo-remainder: free of every reducer's leading derivative.
    pub remainder: Poly,
    /// Product of leading coefficients multiplied in along the way.
    pub multiplier: Poly,
    /// Exact `h` with `expr = h·Δ`, when one exists.
    pub cofactor: Option<Poly>,
}

impl Reduction {
    pub fn vanishes(&self) -> bool {
        self.remainder.is_zero()
    }
}

struct Reducer {
    poly: Poly,
    var: usize,
    degree: u32,
    lead: Poly,
}

fn reducers(pde: &PdeSpec) -> Vec<Reducer> {
    let spec = pde.jet();
    let mut out = Vec::new();
    let mut frontier = vec![(pde.delta().clone(), pde.leading())];
    while let Some((poly, var)) = frontier.pop() {
        let coeffs = poly.coeffs_in(var);
        let degree = (coeffs.len() - 1) as u32;
        out.push(Reducer { lead: coeffs.last().unwrap().clone(), poly: poly.clone(), var, degree });
        for i in 0..spec.num_independent() {
            let Some(next) = spec.shift(var, i) else { continue };
            if out.iter().any(|r| r.var == next) || frontier.iter().any(|(_, v)| *v == next) {
                continue;
            }
            if let Ok(dp) = total_derivative(&poly, i, spec) {
                if dp.depends_on(next) {
                    frontier.push((dp, next));
                }
            }
        }
    }
    // higher-order leading derivatives first
    out.sort_by_key(|r| std::cmp::Reverse(spec.coord(r.var).order()));
    out
}

/// Pseudo-divides every component by `r` with a shared step sequence, so the
/// map is linear across components.
fn pseudo_reduce_components(comps: &mut [Poly], r: &Reducer, multiplier: &mut Poly) -> bool {
    let mut changed = false;
    loop {
        let k = comps.iter().map(|p| p.degree_in(r.var)).max().unwrap_or(0);
        if k < r.degree || comps.iter().all(|p| !p.depends_on(r.var)) {
            return changed;
        }
        let shift = Poly::var(r.poly.chart(), r.var).pow(k - r.degree);
        let g = &shift * &r.poly;
        let tops: Vec<Poly> = comps
            .iter()
            .map(|p| p.coeffs_in(r.var).get(k as usize).cloned().unwrap_or_else(|| Poly::zero(p.chart())))
            .collect();
        let quotients: Option<Vec<Poly>> = tops.iter().map(|t| t.div_exact(&r.lead)).collect();
        match quotients {
            Some(qs) => {
                for (p, q) in comps.iter_mut().zip(qs) {
                    *p = &*p - &(&q * &g);
                }
            }
            None => {
                for (p, top) in comps.iter_mut().zip(tops) {
                    *p = &(&r.lead * p) - &(&top * &g);
                }
                *multiplier = &*multiplier * &r.lead;
            }
        }
        changed = true;
    }
}

fn reduce_components(comps: &mut [Poly], pde: &PdeSpec) -> Poly {
    let rs = reducers(pde);
    let mut multiplier = Poly::one(pde.jet().chart());
    loop {
        let mut changed = false;
        for r in &rs {
            changed |= pseudo_reduce_components(comps, r, &mut multiplier);
        }
        if !changed {
            return multiplier;
        }
    }
}

/// Reduces `expr` modulo `Δ = 0` (and its total derivatives that fit in the
/// chart) by pseudo-division in the leading derivative.
pub fn on_solution_reduce(expr: &Poly, pde: &PdeSpec) -> Result<Reduction, JetError> {
    let chart = pde.jet().chart();
    let expr = expr.rechart(chart)?;
    let mut comps = [expr.clone()];
    let multiplier = reduce_components(&mut comps, pde);
    let [remainder] = comps;
    let cofactor = if remainder.is_zero() { expr.div_exact(pde.delta()) } else { None };
    Ok(Reduction { remainder, multiplier, cofactor })
}

/// Same reduction applied to every component of a parameter-linear polynomial.
pub fn on_solution_reduce_param(expr: &ParamPoly, pde: &PdeSpec) -> Result<ParamPoly, JetError> {
    let chart = pde.jet().chart();
    let mut comps = vec![expr.constant_part().rechart(chart)?];
    let ids: Vec<_> = expr.parts().map(|(id, p)| (id, p.clone())).collect();
    for (_, p) in &ids {
        comps.push(p.rechart(chart)?);
    }
    reduce_components(&mut comps, pde);
    let mut out = ParamPoly::from_poly(comps[0].clone());
    for ((id, _), p) in ids.iter().zip(comps.into_iter().skip(1)) {
        out = out.add(&ParamPoly::param_times(*id, p))?;
    }
    Ok(out)
}

/// Reduces a family of polynomials with one shared step sequence, so linear
/// combinations of the remainders are remainders of the combinations. Returns
/// the remainders and the common multiplier.
pub fn on_solution_reduce_all(exprs: &[Poly], pde: &PdeSpec) -> Result<(Vec<Poly>, Poly), JetError> {
    let chart = pde.jet().chart();
    let mut comps = exprs.iter().map(|e| e.rechart(chart)).collect::<Result<Vec<_>, _>>()?;
    let multiplier = reduce_components(&mut comps, pde);
    Ok((comps, multiplier))
}
