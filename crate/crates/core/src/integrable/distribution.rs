use crate::exterior::{Coeff, DiffForm, ExteriorError, VectorField};
use crate::ratlinalg::{rank, MatrixQ};
use crate::symkernel::{scalar, Chart, RatFunc, Scalar};

use super::ratmat;
use super::IntegrableError;

/// A distribution given by spanning fields, annihilating 1-forms, or both.
#[derive(Debug, Clone)]
pub struct Distribution {
    chart: Chart,
    fields: Vec<VectorField<RatFunc>>,
    forms: Vec<DiffForm<RatFunc>>,
}

impl Distribution {
    pub fn from_forms(chart: &Chart, forms: Vec<DiffForm<RatFunc>>) -> Result<Distribution, IntegrableError> {
        for f in &forms {
            if f.grade() != 1 {
                return Err(IntegrableError::WrongGrade(f.grade()));
            }
        }
        Ok(Distribution { chart: chart.clone(), fields: Vec::new(), forms })
    }

    pub fn from_fields(chart: &Chart, fields: Vec<VectorField<RatFunc>>) -> Distribution {
        Distribution { chart: chart.clone(), fields, forms: Vec::new() }
    }

    /// Both descriptions; every form must annihilate every field.
    pub fn with_both(
        chart: &Chart,
        fields: Vec<VectorField<RatFunc>>,
        forms: Vec<DiffForm<RatFunc>>,
    ) -> Result<Distribution, IntegrableError> {
        let mut d = Distribution::from_forms(chart, forms)?;
        for (i, w) in d.forms.iter().enumerate() {
            for (j, v) in fields.iter().enumerate() {
                if !w.pair(v)?.is_zero() {
                    return Err(IntegrableError::NotAnnihilating(i, j));
                }
            }
        }
        d.fields = fields;
        Ok(d)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn forms(&self) -> &[DiffForm<RatFunc>] {
        &self.forms
    }

    pub fn fields(&self) -> &[VectorField<RatFunc>] {
        &self.fields
    }
}

/// `ω ∧ dω` and whether it vanishes.
pub fn frobenius_1form<C: Coeff>(omega: &DiffForm<C>) -> Result<(bool, DiffForm<C>), IntegrableError> {
    if omega.grade() != 1 {
        return Err(IntegrableError::WrongGrade(omega.grade()));
    }
    let w = omega.wedge(&omega.d())?;
    Ok((w.is_zero(), w))
}

fn sample_point(chart: &Chart, attempt: usize) -> Vec<Scalar> {
    const PRIMES: [i64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    (0..chart.dim()).map(|i| scalar::frac(PRIMES[(i + attempt) % PRIMES.len()] + attempt as i64, 37 + 2 * i as i64)).collect()
}

/// Rank of the coefficient matrix of 1-forms at a generic rational point.
pub fn generic_rank(chart: &Chart, forms: &[DiffForm<RatFunc>]) -> usize {
    'attempt: for attempt in 0..16 {
        let p = sample_point(chart, attempt);
        let mut rows = Vec::new();
        for f in forms {
            let mut row = Vec::with_capacity(chart.dim());
            for k in 0..chart.dim() {
                match f.component(&[k]).eval_exact(&p) {
                    Some(v) => row.push(v),
                    None => continue 'attempt,
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return 0;
        }
        return rank(&MatrixQ::from_dense(&rows).expect("uniform rows"));
    }
    0
}

/// Per form: whether `dω^i ∧ ω^1 ∧ ... ∧ ω^m` vanishes.
pub fn involutivity(forms: &[DiffForm<RatFunc>]) -> Result<Vec<bool>, IntegrableError> {
    let Some(first) = forms.first() else { return Ok(Vec::new()) };
    let chart = first.chart().clone();
    for f in forms {
        if f.grade() != 1 {
            return Err(IntegrableError::WrongGrade(f.grade()));
        }
    }
    if generic_rank(&chart, forms) < forms.len() {
        return Err(IntegrableError::Dependent);
    }
    let mut all = forms[0].clone();
    for f in &forms[1..] {
        all = all.wedge(f)?;
    }
    forms.iter().map(|f| Ok(f.d().wedge(&all)?.is_zero())).collect()
}

fn one_form_column(chart: &Chart, f: &DiffForm<RatFunc>) -> Vec<RatFunc> {
    (0..chart.dim()).map(|k| f.component(&[k])).collect()
}

/// Multipliers `g_j` with `L_v ω^i = Σ_j g_j ω^j` for every annihilator, or
/// `None` when some Lie derivative leaves the annihilator.
pub fn sym_of_distribution(v: &VectorField<RatFunc>, d: &Distribution) -> Result<Option<Vec<Vec<RatFunc>>>, IntegrableError> {
    let chart = d.chart();
    let cols: Vec<Vec<RatFunc>> = d.forms.iter().map(|f| one_form_column(chart, f)).collect();
    let mut out = Vec::new();
    for w in &d.forms {
        let l = w.lie_derivative(v)?;
        match ratmat::solve(chart, &cols, &one_form_column(chart, &l)) {
            Some(g) => out.push(g),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone)]
pub struct ZReport {
    /// `Z_ij = ω^i(v_j)`
    pub z: Vec<Vec<RatFunc>>,
    pub inverse: Vec<Vec<RatFunc>>,
    /// `ω̄ = Z^{-1} ω`
    pub barred: Vec<DiffForm<RatFunc>>,
    pub closed: Vec<bool>,
}

pub fn z_matrix(d: &Distribution, fields: &[VectorField<RatFunc>]) -> Result<ZReport, IntegrableError> {
    let chart = d.chart();
    let k = d.forms.len();
    if fields.len() != k {
        return Err(IntegrableError::NotSquare(k, fields.len()));
    }
    let z: Vec<Vec<RatFunc>> = d.forms.iter().map(|w| fields.iter().map(|v| w.pair(v)).collect::<Result<_, _>>()).collect::<Result<_, ExteriorError>>()?;
    let inverse = ratmat::inverse(chart, &z).ok_or(IntegrableError::SingularZ)?;
    let mut barred = Vec::with_capacity(k);
    for row in &inverse {
        let mut f = DiffForm::zero(chart, 1);
        for (c, w) in row.iter().zip(&d.forms) {
            f = f.add(&w.scale(c))?;
        }
        barred.push(f);
    }
    let closed = barred.iter().map(|f| f.d().is_zero()).collect();
    Ok(ZReport { z, inverse, barred, closed })
}
