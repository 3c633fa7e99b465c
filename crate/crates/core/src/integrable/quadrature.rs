use crate::exterior::{Coeff, DiffForm};
use crate::symkernel::Chart;

use super::IntegrableError;

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> Option<f64>, a: f64, b: f64, tol: f64) -> Result<f64, IntegrableError> {
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| f(x).ok_or(IntegrableError::SingularOnPath(x));
    let (fa, fb, m) = (eval(a)?, eval(b)?, 0.5 * (a + b));
    let fm = eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&eval, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> Result<f64, IntegrableError>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, IntegrableError> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)? + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// Closed 1-form with a base point, integrated along axis-parallel paths.
#[derive(Debug, Clone)]
pub struct FirstIntegralSpec<C: Coeff> {
    form: DiffForm<C>,
    base: Vec<f64>,
    tol: f64,
}

/// Axis-parallel polyline: visit each waypoint, then the target, moving one
/// coordinate at a time in `axis_order`.
#[derive(Debug, Clone, Default)]
pub struct PathPlan {
    pub waypoints: Vec<Vec<f64>>,
    pub axis_order: Option<Vec<usize>>,
}

impl<C: Coeff> FirstIntegralSpec<C> {
    /// Fails unless `dω = 0` exactly.
    pub fn new(form: DiffForm<C>, base: Vec<f64>, tol: f64) -> Result<Self, IntegrableError> {
        if form.grade() != 1 {
            return Err(IntegrableError::WrongGrade(form.grade()));
        }
        if base.len() != form.chart().dim() {
            return Err(IntegrableError::PointDimension(base.len(), form.chart().dim()));
        }
        if !form.d().is_zero() {
            return Err(IntegrableError::NotClosed);
        }
        Ok(FirstIntegralSpec { form, base, tol })
    }

    pub fn form(&self) -> &DiffForm<C> {
        &self.form
    }

    pub fn chart(&self) -> &Chart {
        self.form.chart()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `φ(p) = ∫ ω̄` from the base point to `p`.
    pub fn value(&self, point: &[f64], plan: &PathPlan) -> Result<f64, IntegrableError> {
        let chart = self.chart().clone();
        let n = chart.dim();
        if point.len() != n {
            return Err(IntegrableError::PointDimension(point.len(), n));
        }
        let order: Vec<usize> = plan.axis_order.clone().unwrap_or_else(|| (0..n).collect());
        let mut cur = self.base.clone();
        let mut total = 0.0;
        for target in plan.waypoints.iter().map(Vec::as_slice).chain([point]) {
            for &k in &order {
                if cur[k] == target[k] {
                    continue;
                }
                let coeff = self.form.component(&[k]);
                let here = cur.clone();
                let f = |s: f64| {
                    let mut p = here.clone();
                    p[k] = s;
                    coeff.eval_at(&chart, &p)
                };
                total += adaptive_simpson(&f, cur[k], target[k], self.tol)?;
                cur[k] = target[k];
            }
        }
        Ok(total)
    }
}

/// `φ(p)` along the default path.
pub fn first_integral_numeric<C: Coeff>(spec: &FirstIntegralSpec<C>, point: &[f64]) -> Result<f64, IntegrableError> {
    spec.value(point, &PathPlan::default())
}
