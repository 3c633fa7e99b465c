use std::collections::BTreeMap;

use crate::symkernel::Scalar;

use super::expr::{Expr, Func};
use super::ClosedFormError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    Printed,
    #[default]
    Corrected,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "printed" => Some(Variant::Printed),
            "corrected" => Some(Variant::Corrected),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Printed => "printed",
            Variant::Corrected => "corrected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Soliton,
    Rational,
    Tanh,
    Constant,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Option<FamilyKind> {
        match s {
            "soliton" => Some(FamilyKind::Soliton),
            "rational" => Some(FamilyKind::Rational),
            "tanh" => Some(FamilyKind::Tanh),
            "constant" => Some(FamilyKind::Constant),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Soliton => "soliton",
            FamilyKind::Rational => "rational",
            FamilyKind::Tanh => "tanh",
            FamilyKind::Constant => "constant",
        }
    }

    /// Parameter names with their defaults.
    pub fn parameters(self) -> &'static [(&'static str, i64)] {
        match self {
            FamilyKind::Soliton => &[("c", 4), ("eps", 0)],
            FamilyKind::Rational | FamilyKind::Tanh => &[("alpha", 0), ("beta", 0), ("gamma", 1)],
            FamilyKind::Constant => &[("k", 1)],
        }
    }
}

/// Parameter values by name; missing names take the family defaults.
pub type FamilyParams = BTreeMap<String, Expr>;

fn param(params: &FamilyParams, kind: FamilyKind, name: &str) -> Expr {
    params.get(name).cloned().unwrap_or_else(|| {
        let d = kind.parameters().iter().find(|(n, _)| *n == name).map(|(_, v)| *v).unwrap_or(0);
        Expr::int(d)
    })
}

fn t() -> Expr {
    Expr::var("t")
}

fn x() -> Expr {
    Expr::var("x")
}

/// `β t + γ x + α`
fn linear_phase(params: &FamilyParams, kind: FamilyKind) -> Expr {
    let (a, b, g) = (param(params, kind, "alpha"), param(params, kind, "beta"), param(params, kind, "gamma"));
    Expr::add(vec![b.times(&t()), g.times(&x()), a])
}

/// Solution candidate `u(t, x)` of a named family.
pub fn family(kind: FamilyKind, variant: Variant, params: &FamilyParams) -> Result<Expr, ClosedFormError> {
    for name in params.keys() {
        if !kind.parameters().iter().any(|(n, _)| n == name) {
            return Err(ClosedFormError::UnknownParameter(name.clone()));
        }
    }
    let p = |n: &str| param(params, kind, n);
    Ok(match kind {
        FamilyKind::Soliton => {
            let c = p("c");
            let arg = Expr::add(vec![
                Expr::mul(vec![Expr::frac(1, 2), Expr::func(Func::Sqrt, c.clone()), x().sub(&c.times(&t()))]),
                p("eps"),
            ]);
            Expr::mul(vec![Expr::int(3), c, Expr::powi(Expr::func(Func::Sech, arg), 2)])
        }
        FamilyKind::Rational => {
            let g = p("gamma");
            if g.as_const().is_some_and(|c| *c == Scalar::from_integer(0.into())) {
                return Err(ClosedFormError::InvalidParameter("gamma must be nonzero".into()));
            }
            let sign = match variant {
                Variant::Printed => 12,
                Variant::Corrected => -12,
            };
            let lead = Expr::mul(vec![Expr::int(sign), Expr::powi(g.clone(), 2), Expr::powi(linear_phase(params, kind), -2)]);
            lead.sub(&p("beta").div(&g))
        }
        FamilyKind::Tanh => match variant {
            Variant::Printed => Expr::add(vec![
                Expr::mul(vec![Expr::int(-12), Expr::func(Func::Tanh, Expr::powi(x(), 2))]),
                Expr::int(8),
            ]),
            Variant::Corrected => {
                let g = p("gamma");
                if g.as_const().is_some_and(|c| *c == Scalar::from_integer(0.into())) {
                    return Err(ClosedFormError::InvalidParameter("gamma must be nonzero".into()));
                }
                let g2 = Expr::powi(g.clone(), 2);
                Expr::add(vec![
                    Expr::mul(vec![Expr::int(-12), g2.clone(), Expr::powi(Expr::func(Func::Tanh, linear_phase(params, kind)), 2)]),
                    Expr::int(8).times(&g2),
                    p("beta").div(&g).neg(),
                ])
            }
        },
        FamilyKind::Constant => p("k"),
    })
}

/// Traveling-wave profile `v(y)` of the soliton; the printed variant lacks the `y` factor.
pub fn soliton_profile(variant: Variant, c: &Expr, eps: &Expr) -> Expr {
    let half_root = Expr::mul(vec![Expr::frac(1, 2), Expr::func(Func::Sqrt, c.clone())]);
    let arg = match variant {
        Variant::Printed => half_root.plus(eps),
        Variant::Corrected => half_root.times(&Expr::var("y")).plus(eps),
    };
    Expr::mul(vec![Expr::int(3), c.clone(), Expr::powi(Expr::func(Func::Sech, arg), 2)])
}

/// One-parameter symmetry flows and the combined five-parameter map.
#[derive(Debug, Clone, PartialEq)]
pub enum Flow {
    /// `x -> x + s`
    Translate { s: Expr },
    /// `t -> t + s`
    TimeShift { s: Expr },
    /// `(x, u) -> (x + t s, u + s)`
    Galilean { s: Expr },
    /// `(t, x, u) -> (t e^{3s}, x e^s, u e^{-2s})`
    Scaling { s: Expr },
    /// `u(t, x) = δ² H(δ³ t + α, δ x + β + γ δ t) - λ`
    FiveParameter { alpha: Expr, beta: Expr, gamma: Expr, delta: Expr, lambda: Expr },
}

impl Flow {
    pub fn name(&self) -> &'static str {
        match self {
            Flow::Translate { .. } => "theta1",
            Flow::TimeShift { .. } => "theta2",
            Flow::Galilean { .. } => "theta3",
            Flow::Scaling { .. } => "theta4",
            Flow::FiveParameter { .. } => "five-param",
        }
    }

    /// The five-parameter map with `λ = γ`, which keeps KdV solutions.
    pub fn five_parameter(alpha: Expr, beta: Expr, gamma: Expr, delta: Expr) -> Flow {
        Flow::FiveParameter { alpha, beta, lambda: gamma.clone(), gamma, delta }
    }
}

fn compose(u: &Expr, new_t: Expr, new_x: Expr) -> Expr {
    u.substitute(&BTreeMap::from([("t".to_string(), new_t), ("x".to_string(), new_x)]))
}

/// Image of the solution `u(t, x)` under a flow.
pub fn apply_flow(u: &Expr, flow: &Flow) -> Result<Expr, ClosedFormError> {
    Ok(match flow {
        Flow::Translate { s } => compose(u, t(), x().sub(s)),
        Flow::TimeShift { s } => compose(u, t().sub(s), x()),
        Flow::Galilean { s } => compose(u, t(), x().sub(&s.times(&t()))).plus(s),
        Flow::Scaling { s } => {
            let e = |k: i64| Expr::func(Func::Exp, Expr::int(k).times(s));
            e(-2).times(&compose(u, e(-3).times(&t()), e(-1).times(&x())))
        }
        Flow::FiveParameter { alpha, beta, gamma, delta, lambda } => {
            if delta.is_zero() {
                return Err(ClosedFormError::InvalidParameter("delta must be nonzero".into()));
            }
            let new_t = Expr::powi(delta.clone(), 3).times(&t()).plus(alpha);
            let new_x = Expr::add(vec![delta.times(&x()), beta.clone(), Expr::mul(vec![gamma.clone(), delta.clone(), t()])]);
            Expr::powi(delta.clone(), 2).times(&compose(u, new_t, new_x)).sub(lambda)
        }
    })
}
