use crate::closedform::{Expr, Func};
use crate::exterior::{DiffForm, VectorField};
use crate::par::{self, Exec};
use crate::symkernel::{scalar, Chart, CoordChart, Scalar};

use super::quadrature::{FirstIntegralSpec, PathPlan};
use super::IntegrableError;

/// Orbits stop once the radicand drops below this, ahead of the turning point.
pub const TURNING_Q: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `v' = +√Q`
    #[default]
    Ascending,
    /// `v' = -√Q`
    Descending,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Ascending => 1.0,
            Branch::Descending => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KdvFirstIntegralOptions {
    /// Initial value; defaults to `3c sech²(eps)(1 - 1e-6)` when `c1 = c2 = 0`.
    pub v0: Option<f64>,
    pub eps: f64,
    pub y0: f64,
    pub y_end: f64,
    pub step: f64,
    pub sample_spacing: f64,
    pub branch: Branch,
    pub tol: f64,
    pub exec: Exec,
}

impl Default for KdvFirstIntegralOptions {
    fn default() -> Self {
        KdvFirstIntegralOptions {
            v0: None,
            eps: -3.0,
            y0: 0.0,
            y_end: 2.0,
            step: 1e-3,
            sample_spacing: 0.1,
            branch: Branch::Ascending,
            tol: 1e-10,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KdvFirstIntegral {
    pub omega: DiffForm<Expr>,
    /// `ω(∂_y)`
    pub z: Expr,
    /// `None` at an equilibrium, where `Z` vanishes.
    pub spec: Option<FirstIntegralSpec<Expr>>,
    pub closed: bool,
    /// `(y, v, φ)` along the computed trajectory.
    pub samples: Vec<(f64, f64, f64)>,
    pub max_drift: f64,
    /// Where the trajectory hit a turning point, if it did.
    pub truncated_at: Option<f64>,
    pub degenerate: bool,
}

/// The `(y, v)` chart of the reduced equation.
pub fn yv_chart() -> Chart {
    CoordChart::plain(&["y", "v"]).expect("static chart")
}

/// `c v² + 2 c1 v + 2 c2 - v³/3`
pub fn radicand(c: &Scalar, c1: &Scalar, c2: &Scalar) -> Expr {
    let v = Expr::var("v");
    Expr::add(vec![
        Expr::mul(vec![Expr::scalar(c.clone()), Expr::powi(v.clone(), 2)]),
        Expr::mul(vec![Expr::int(2), Expr::scalar(c1.clone()), v.clone()]),
        Expr::mul(vec![Expr::int(2), Expr::scalar(c2.clone())]),
        Expr::mul(vec![Expr::frac(-1, 3), Expr::powi(v, 3)]),
    ])
}

fn rk4(c: f64, c1: f64, y: f64, v: f64, w: f64, h: f64) -> (f64, f64) {
    let acc = |v: f64| -v * v / 2.0 + c * v + c1;
    let (k1v, k1w) = (w, acc(v));
    let (k2v, k2w) = (w + 0.5 * h * k1w, acc(v + 0.5 * h * k1v));
    let (k3v, k3w) = (w + 0.5 * h * k2w, acc(v + 0.5 * h * k2v));
    let (k4v, k4w) = (w + h * k3w, acc(v + h * k3v));
    let _ = y;
    (v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v), w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w))
}

/// Builds `ω̄ = ω / ω(∂_y)` for the once-reduced traveling-wave equation and
/// checks that `φ = ∫ ω̄` stays constant along a numerically integrated orbit.
pub fn kdv_first_integral(c: &Scalar, c1: &Scalar, c2: &Scalar, opts: &KdvFirstIntegralOptions) -> Result<KdvFirstIntegral, IntegrableError> {
    let chart = yv_chart();
    let q = radicand(c, c1, c2);
    let mut omega = DiffForm::<Expr>::differential(&chart, 1);
    omega.add_term(&[0], Expr::func(Func::Sqrt, q.clone()).neg());
    let dy = VectorField::<Expr>::coordinate(&chart, 0);
    let z = omega.pair(&dy)?;
    let (cf, c1f) = (scalar::to_f64(c), scalar::to_f64(c1));
    let v0 = match opts.v0 {
        Some(v) => v,
        None if c1 == &scalar::zero() && c2 == &scalar::zero() => 3.0 * cf * (1.0 / opts.eps.cosh()).powi(2) * (1.0 - 1e-6),
        None => return Err(IntegrableError::MissingInitialValue),
    };
    let qv = |v: f64| q.eval_at(&["v"], &[v]).map_err(|_| IntegrableError::SingularOnPath(v));
    let q0 = qv(v0)?;
    let dq0 = q.diff("v").eval_at(&["v"], &[v0]).map_err(|_| IntegrableError::SingularOnPath(v0))?;
    if q0.abs() <= 1e-12 && dq0.abs() <= 1e-12 {
        // equilibrium: the orbit is constant and ω itself vanishes on it
        let n = ((opts.y_end - opts.y0) / opts.sample_spacing).round() as usize;
        let samples = (0..=n).map(|i| (opts.y0 + opts.sample_spacing * i as f64, v0, 0.0)).collect();
        return Ok(KdvFirstIntegral { omega, z, spec: None, closed: true, samples, max_drift: 0.0, truncated_at: None, degenerate: true });
    }
    if q0 <= 0.0 {
        return Err(IntegrableError::RadicandNonPositive(v0));
    }
    let barred = omega.scale(&Expr::powi(z.clone(), -1));
    let closed = barred.d().is_zero();
    let spec = FirstIntegralSpec::new(barred, vec![opts.y0, v0], opts.tol)?;

    let sign = opts.branch.sign();
    let (mut y, mut v, mut w) = (opts.y0, v0, sign * q0.sqrt());
    let steps = ((opts.y_end - opts.y0) / opts.step).round() as usize;
    let every = ((opts.sample_spacing / opts.step).round() as usize).max(1);
    let mut orbit = vec![(y, v)];
    let mut truncated_at = None;
    for i in 1..=steps {
        let (nv, nw) = rk4(cf, c1f, y, v, w, opts.step);
        if nw * sign <= 0.0 || qv(nv).map_or(true, |q| q <= TURNING_Q) {
            truncated_at = Some(y);
            break;
        }
        y = opts.y0 + opts.step * i as f64;
        v = nv;
        w = nw;
        if i % every == 0 {
            orbit.push((y, v));
        }
    }
    let plan = PathPlan::default();
    let phis = par::map(opts.exec, &orbit, |&(y, v)| spec.value(&[y, v], &plan));
    let mut samples = Vec::with_capacity(orbit.len());
    for (&(y, v), phi) in orbit.iter().zip(phis) {
        samples.push((y, v, phi?));
    }
    let phi0 = samples[0].2;
    let max_drift = samples.iter().map(|s| (s.2 - phi0).abs()).fold(0.0, f64::max);
    Ok(KdvFirstIntegral { omega, z, spec: Some(spec), closed, samples, max_drift, truncated_at, degenerate: false })
}
