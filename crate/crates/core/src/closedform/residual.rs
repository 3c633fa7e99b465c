use crate::par::{self, Exec};
use crate::symkernel::{Chart, CoordChart, RatFunc, Scalar};

use super::expr::Expr;
use super::ClosedFormError;

/// KdV residual `u_t + u u_x + u_xxx` as a tree.
pub fn kdv_residual(u: &Expr) -> Expr {
    Expr::add(vec![u.diff("t"), u.times(&u.diff("x")), u.diff_n("x", 3)])
}

/// Sample points `(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub points: Vec<(f64, f64)>,
}

impl Grid {
    /// `t ∈ {-2, -1.5, ..., 2}`, `x ∈ {-5, -4.5, ..., 5}`.
    pub fn standard() -> Grid {
        Grid::rect((-2.0, 2.0, 0.5), (-5.0, 5.0, 0.5))
    }

    /// Inclusive rectangular lattice from `(start, end, step)` triples.
    pub fn rect(t: (f64, f64, f64), x: (f64, f64, f64)) -> Grid {
        let axis = |(a, b, h): (f64, f64, f64)| -> Vec<f64> {
            let n = ((b - a) / h + 1e-9).floor() as usize;
            (0..=n).map(|i| a + h * i as f64).collect()
        };
        let (ts, xs) = (axis(t), axis(x));
        Grid { points: ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect() }
    }

    /// Parses `t0:t1:dt,x0:x1:dx` or `standard`.
    pub fn parse(s: &str) -> Result<Grid, ClosedFormError> {
        if s.trim() == "standard" {
            return Ok(Grid::standard());
        }
        let bad = || ClosedFormError::BadGrid(s.to_string());
        let triple = |p: &str| -> Result<(f64, f64, f64), ClosedFormError> {
            let v: Vec<f64> = p.split(':').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
            match v[..] {
                [a, b, h] if h > 0.0 && b >= a => Ok((a, b, h)),
                _ => Err(bad()),
            }
        };
        let (t, x) = s.split_once(',').ok_or_else(bad)?;
        Ok(Grid::rect(triple(t)?, triple(x)?))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularPolicy {
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max: f64,
    pub argmax: Option<(f64, f64)>,
    pub evaluated: usize,
    pub skipped: usize,
}

impl ResidualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.evaluated > 0 && self.max < tol
    }
}

fn eval_tx(e: &Expr, t: f64, x: f64) -> Result<f64, ClosedFormError> {
    e.eval(&|n: &str| match n {
        "t" => Some(t),
        "x" => Some(x),
        _ => None,
    })
}

/// Max `|u_t + u u_x + u_xxx|` over a grid using symbolic derivatives.
pub fn residual_numeric(u: &Expr, grid: &Grid, policy: SingularPolicy, exec: Exec) -> Result<ResidualReport, ClosedFormError> {
    let (ut, ux, uxxx) = (u.diff("t"), u.diff("x"), u.diff_n("x", 3));
    let values = par::map(exec, &grid.points, |&(t, x)| -> Result<f64, ClosedFormError> {
        // each sub-expression is evaluated separately so singular pieces are caught
        let v = eval_tx(u, t, x)?;
        Ok(eval_tx(&ut, t, x)? + v * eval_tx(&ux, t, x)? + eval_tx(&uxxx, t, x)?)
    });
    let mut rep = ResidualReport { max: 0.0, argmax: None, evaluated: 0, skipped: 0 };
    for (p, r) in grid.points.iter().zip(values) {
        match r {
            Ok(v) => {
                rep.evaluated += 1;
                if v.abs() > rep.max || rep.argmax.is_none() {
                    rep.max = rep.max.max(v.abs());
                    if v.abs() >= rep.max {
                        rep.argmax = Some(*p);
                    }
                }
            }
            Err(ClosedFormError::Singular | ClosedFormError::Domain) if policy == SingularPolicy::Skip => rep.skipped += 1,
            Err(ClosedFormError::Singular) => return Err(ClosedFormError::SingularAt(p.0, p.1)),
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

/// The chart `(t, x)` used for exact residuals.
pub fn tx_chart() -> Chart {
    CoordChart::plain(&["t", "x"]).expect("static chart")
}

/// Exact residual of a rational candidate.
pub fn residual_exact_rational(u: &RatFunc) -> Result<RatFunc, ClosedFormError> {
    let chart = u.chart();
    let (t, x) = (chart.index("t").ok_or(ClosedFormError::MissingCoordinate("t"))?, chart.index("x").ok_or(ClosedFormError::MissingCoordinate("x"))?);
    let ux = u.partial(x);
    let uxxx = ux.partial(x).partial(x);
    Ok(&(&u.partial(t) + &(u * &ux)) + &uxxx)
}

/// Exact residual of a tree that is rational in `(t, x)`.
pub fn residual_exact(u: &Expr) -> Result<RatFunc, ClosedFormError> {
    residual_exact_rational(&u.to_ratfunc(&tx_chart())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TravelingWaveReport {
    /// Max of `|v'^2/2 + v^3/6 - c v^2/2 - c1 v - c2|`.
    pub first_integral: f64,
    /// Max of `|v' (v'' + v^2/2 - c v - c1)|`.
    pub integrated_once: f64,
    pub evaluated: usize,
}

impl TravelingWaveReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.evaluated > 0 && self.first_integral < tol && self.integrated_once < tol
    }
}

/// Checks a profile `v(y)` against the reduced traveling-wave equations on sample points.
pub fn traveling_wave_check(c: &Scalar, c1: &Scalar, c2: &Scalar, v: &Expr, ys: &[f64]) -> Result<TravelingWaveReport, ClosedFormError> {
    let (c, c1, c2) = (Expr::scalar(c.clone()), Expr::scalar(c1.clone()), Expr::scalar(c2.clone()));
    let v1 = v.diff("y");
    let v2 = v1.diff("y");
    let half = Expr::frac(1, 2);
    let first = Expr::add(vec![
        Expr::mul(vec![half.clone(), Expr::powi(v1.clone(), 2)]),
        Expr::mul(vec![Expr::frac(1, 6), Expr::powi(v.clone(), 3)]),
        Expr::mul(vec![Expr::frac(-1, 2), c.clone(), Expr::powi(v.clone(), 2)]),
        c1.times(v).neg(),
        c2.neg(),
    ]);
    let once = v1.times(&Expr::add(vec![v2, Expr::mul(vec![half, Expr::powi(v.clone(), 2)]), c.times(v).neg(), c1.neg()]));
    let mut rep = TravelingWaveReport { first_integral: 0.0, integrated_once: 0.0, evaluated: 0 };
    for &y in ys {
        let env = |n: &str| (n == "y").then_some(y);
        let a = first.eval(&env).map_err(|_| ClosedFormError::SingularAt(y, f64::NAN))?;
        let b = once.eval(&env).map_err(|_| ClosedFormError::SingularAt(y, f64::NAN))?;
        rep.first_integral = rep.first_integral.max(a.abs());
        rep.integrated_once = rep.integrated_once.max(b.abs());
        rep.evaluated += 1;
    }
    Ok(rep)
}

/// `y ∈ {-5, -4.75, ..., 5}`.
pub fn standard_profile_points() -> Vec<f64> {
    (0..=40).map(|i| -5.0 + 0.25 * i as f64).collect()
}
