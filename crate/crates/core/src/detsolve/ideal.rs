use crate::exterior::DiffForm;
use crate::jetspace::{contact_forms, JetCoord, JetSpec, PdeSpec};
use crate::symkernel::{parse_poly, Chart, Poly};

use super::DetError;

/// Which 2-form carries the equation itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EquationForm {
    /// `u dt^du - dt^du_xx - dx^du`, available for KdV only.
    #[default]
    Printed,
    /// `a du_J^dx^j + R dx^i^dx^j` built from `Δ = a u_{J,i} + R`.
    FromEquation,
}

impl EquationForm {
    pub fn parse(s: &str) -> Option<EquationForm> {
        match s {
            "printed" => Some(EquationForm::Printed),
            "equation" | "derived" => Some(EquationForm::FromEquation),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationForm::Printed => "printed",
            EquationForm::FromEquation => "equation",
        }
    }
}

/// Contact forms `θ^i` and the 2-form generators `α^1..α^7` on the
/// second-order jet space of a third-order evolution-type equation.
#[derive(Debug, Clone)]
pub struct ContactIdeal {
    jet: JetSpec,
    thetas: Vec<DiffForm<Poly>>,
    alphas: Vec<DiffForm<Poly>>,
    equation_form: EquationForm,
}

fn kdv_delta(chart: &Chart) -> Poly {
    parse_poly("u_xxx + u*u_x + u_t", chart).expect("static polynomial")
}

pub fn build_ideal(pde: &PdeSpec, equation_form: EquationForm) -> Result<ContactIdeal, DetError> {
    let full = pde.jet();
    if full.num_independent() != 2 || full.num_dependent() != 1 || full.order() != 3 {
        return Err(DetError::UnsupportedShape("two independents, one dependent, third order".into()));
    }
    let lead = pde.leading();
    if full.coord(lead).order() != 3 {
        return Err(DetError::UnsupportedShape("leading derivative must be third order".into()));
    }
    let delta = pde.delta();
    for idx in 0..full.chart().dim() {
        if idx != lead && full.coord(idx).order() == 3 && delta.depends_on(idx) {
            return Err(DetError::UnsupportedShape(format!("extra third-order term {}", full.chart().name(idx))));
        }
    }
    if delta.degree_in(lead) != 1 {
        return Err(DetError::UnsupportedShape("leading derivative must occur linearly".into()));
    }
    let jet = full.with_order(2);
    let chart = jet.chart().clone();
    let thetas = contact_forms(&jet);
    debug_assert_eq!(thetas.len(), 3);
    let wedge = |a: usize, b: usize| thetas[a].wedge(&thetas[b]).expect("same chart");
    let mut alphas = vec![wedge(0, 1), wedge(0, 2), wedge(1, 2)];
    alphas.extend(thetas.iter().map(DiffForm::d));
    let seventh = match equation_form {
        EquationForm::Printed => {
            if !full.chart().same_as(JetSpec::kdv(3).chart()) || *delta != kdv_delta(full.chart()) {
                return Err(DetError::UnsupportedShape("the printed equation form exists for KdV only".into()));
            }
            let c = |n: &str| chart.require(n).expect("kdv chart");
            let mut f = DiffForm::zero(&chart, 2);
            f.add_term(&[c("t"), c("u")], Poly::var_named(&chart, "u").expect("kdv chart"));
            f.add_term(&[c("t"), c("u_xx")], Poly::constant(&chart, crate::symkernel::scalar::int(-1)));
            f.add_term(&[c("x"), c("u")], Poly::constant(&chart, crate::symkernel::scalar::int(-1)));
            f
        }
        EquationForm::FromEquation => equation_two_form(pde, &jet)?,
    };
    alphas.push(seventh);
    Ok(ContactIdeal { jet, thetas, alphas, equation_form })
}

fn equation_two_form(pde: &PdeSpec, jet: &JetSpec) -> Result<DiffForm<Poly>, DetError> {
    let full = pde.jet();
    let lead = pde.leading();
    let JetCoord::Dependent { dep, multi } = full.coord(lead).clone() else {
        return Err(DetError::UnsupportedShape("leading coordinate is not a derivative".into()));
    };
    let (&i, parent) = multi.split_last().expect("third order");
    let j = 1 - i;
    let coeffs = pde.delta().coeffs_in(lead);
    let a = coeffs[1].rechart(jet.chart())?;
    let r = coeffs[0].rechart(jet.chart())?;
    let parent_idx = jet.derivative_index(dep, parent).expect("second-order parent");
    let (xi, xj) = (jet.independent_index(i), jet.independent_index(j));
    let mut f = DiffForm::zero(jet.chart(), 2);
    f.add_term(&[parent_idx, xj], a);
    f.add_term(&[xi, xj], r);
    Ok(f)
}

impl ContactIdeal {
    pub fn jet(&self) -> &JetSpec {
        &self.jet
    }

    pub fn chart(&self) -> &Chart {
        self.jet.chart()
    }

    pub fn thetas(&self) -> &[DiffForm<Poly>] {
        &self.thetas
    }

    pub fn alphas(&self) -> &[DiffForm<Poly>] {
        &self.alphas
    }

    /// Generator `α^i`, 1-based.
    pub fn alpha(&self, i: usize) -> &DiffForm<Poly> {
        &self.alphas[i - 1]
    }

    pub fn equation_form(&self) -> EquationForm {
        self.equation_form
    }

    fn display_rank(&self, idx: usize) -> usize {
        // x before t, then the dependent coordinates in chart order
        match idx {
            0 => 1,
            1 => 0,
            k => k,
        }
    }

    /// Basis order used for display: `θ^i` lists `du_J` first, then `dt`, `dx`;
    /// `α^1..α^6` list pairs with `dx` ranked before `dt`; `α^7` uses chart order.
    pub fn display_basis(&self, grade_two_index: Option<usize>) -> Vec<Vec<usize>> {
        let n = self.chart().dim();
        match grade_two_index {
            None => {
                let mut b: Vec<Vec<usize>> = (2..n).map(|k| vec![k]).collect();
                b.insert(0, vec![0]);
                b.insert(1, vec![1]);
                b
            }
            Some(i) => {
                let mut pairs: Vec<Vec<usize>> = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        if a != b {
                            pairs.push(vec![a, b]);
                        }
                    }
                }
                if i == 7 {
                    pairs.retain(|p| p[0] < p[1]);
                } else {
                    pairs.retain(|p| self.display_rank(p[0]) < self.display_rank(p[1]));
                    pairs.sort_by_key(|p| (self.display_rank(p[0]), self.display_rank(p[1])));
                }
                pairs
            }
        }
    }

    pub fn render_theta(&self, i: usize) -> String {
        let th = &self.thetas[i - 1];
        let lead = th.terms().find(|(_, c)| c.is_one()).map(|(idx, _)| idx[0]).expect("unit leading term");
        let mut basis = vec![vec![lead]];
        basis.extend((0..self.chart().dim()).filter(|&k| k != lead).map(|k| vec![k]));
        th.render_with_basis(&basis).expect("complete basis")
    }

    pub fn render_alpha(&self, i: usize) -> String {
        self.alpha(i).render_with_basis(&self.display_basis(Some(i))).expect("complete basis")
    }
}
