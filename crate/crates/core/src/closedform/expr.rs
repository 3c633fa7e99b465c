use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exterior::Coeff;
use crate::symkernel::{parse_ast, scalar, Ast, Chart, RatFunc, Scalar};

use super::ClosedFormError;

/// Closeness to zero below which a negative power counts as singular.
pub const SINGULAR_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sech,
    Tanh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sech => "sech",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" | "log" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "sech" => Some(Func::Sech),
            "tanh" => Some(Func::Tanh),
            _ => None,
        }
    }
}

/// Elementary-function expression tree. Build values through the smart
/// constructors so sums and products stay flat and constants stay folded.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, Scalar),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalError {
    Singular,
    Domain,
}

fn exact_sqrt(s: &Scalar) -> Option<Scalar> {
    if s.is_negative() {
        return None;
    }
    let (n, d) = (s.numer(), s.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Scalar::new(rn, rd))
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(scalar::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::Const(scalar::frac(n, d))
    }

    pub fn scalar(s: Scalar) -> Expr {
        Expr::Const(s)
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Scalar> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        for t in terms {
            match t {
                Expr::Add(ts) => flat.extend(ts),
                other => flat.push(other),
            }
        }
        let mut constant = Scalar::zero();
        let mut groups: Vec<(Scalar, Expr)> = Vec::new();
        for t in flat {
            if let Expr::Const(c) = &t {
                constant += c;
                continue;
            }
            let (c, rest) = t.split_coefficient();
            match groups.iter_mut().find(|(_, r)| *r == rest) {
                Some(g) => g.0 += c,
                None => groups.push((c, rest)),
            }
        }
        let mut out: Vec<Expr> =
            groups.into_iter().filter(|(c, _)| !c.is_zero()).map(|(c, r)| Expr::mul(vec![Expr::Const(c), r])).collect();
        if !constant.is_zero() {
            out.push(Expr::Const(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Add(out),
        }
    }

    /// `c * rest` with `c` the folded constant factor.
    fn split_coefficient(self) -> (Scalar, Expr) {
        match self {
            Expr::Const(c) => (c, Expr::one()),
            Expr::Mul(fs) => {
                let mut c = Scalar::one();
                let mut rest = Vec::new();
                for f in fs {
                    match f {
                        Expr::Const(k) => c *= k,
                        other => rest.push(other),
                    }
                }
                let rest = match rest.len() {
                    0 => Expr::one(),
                    1 => rest.pop().unwrap(),
                    _ => Expr::Mul(rest),
                };
                (c, rest)
            }
            other => (Scalar::one(), other),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut stack = factors;
        stack.reverse();
        while let Some(f) = stack.pop() {
            match f {
                Expr::Mul(fs) => stack.extend(fs.into_iter().rev()),
                other => flat.push(other),
            }
        }
        let mut constant = Scalar::one();
        let mut groups: Vec<(Expr, Scalar)> = Vec::new();
        for f in flat {
            let (base, e) = match f {
                Expr::Const(c) => {
                    constant *= c;
                    continue;
                }
                Expr::Pow(b, e) => (*b, e),
                other => (other, Scalar::one()),
            };
            match groups.iter_mut().find(|(b, _)| *b == base) {
                Some(g) => g.1 += e,
                None => groups.push((base, e)),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        let mut out = Vec::new();
        let mut extra = Scalar::one();
        for (b, e) in groups {
            match Expr::pow(b, e) {
                Expr::Const(c) => extra *= c,
                Expr::Mul(fs) => {
                    for f in fs {
                        match f {
                            Expr::Const(c) => extra *= c,
                            other => out.push(other),
                        }
                    }
                }
                p => out.push(p),
            }
        }
        constant *= extra;
        if constant.is_zero() {
            return Expr::zero();
        }
        if !constant.is_one() {
            out.insert(0, Expr::Const(constant));
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::Mul(out),
        }
    }

    pub fn pow(base: Expr, e: Scalar) -> Expr {
        if e.is_zero() {
            return Expr::one();
        }
        if e.is_one() {
            return base;
        }
        let integer = e.is_integer();
        match base {
            Expr::Const(c) => {
                if integer {
                    if c.is_zero() && e.is_negative() {
                        return Expr::Pow(Box::new(Expr::Const(c)), e);
                    }
                    let n = e.to_integer().to_i64().expect("small exponent");
                    return Expr::Const(scalar::powi(&c, n));
                }
                if e == scalar::frac(1, 2) {
                    if let Some(r) = exact_sqrt(&c) {
                        return Expr::Const(r);
                    }
                }
                Expr::Pow(Box::new(Expr::Const(c)), e)
            }
            Expr::Pow(b, a) if integer => Expr::pow(*b, a * e),
            Expr::Mul(fs) if integer => Expr::mul(fs.into_iter().map(|f| Expr::pow(f, e.clone())).collect()),
            Expr::Func(Func::Sqrt, a) if e.is_integer() && (e.to_integer() % BigInt::from(2)).is_zero() => {
                Expr::pow(*a, e / scalar::int(2))
            }
            b => Expr::Pow(Box::new(b), e),
        }
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, scalar::int(n))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        if let Expr::Const(c) = &arg {
            match f {
                Func::Exp if c.is_zero() => return Expr::one(),
                Func::Ln if c.is_one() => return Expr::zero(),
                Func::Sqrt => {
                    if let Some(r) = exact_sqrt(c) {
                        return Expr::Const(r);
                    }
                }
                Func::Sech if c.is_zero() => return Expr::one(),
                Func::Tanh if c.is_zero() => return Expr::zero(),
                _ => {}
            }
        }
        Expr::Func(f, Box::new(arg))
    }

    pub fn neg(&self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self.clone()])
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        Expr::add(vec![self.clone(), other.neg()])
    }

    pub fn plus(&self, other: &Expr) -> Expr {
        Expr::add(vec![self.clone(), other.clone()])
    }

    pub fn times(&self, other: &Expr) -> Expr {
        Expr::mul(vec![self.clone(), other.clone()])
    }

    pub fn div(&self, other: &Expr) -> Expr {
        Expr::mul(vec![self.clone(), Expr::powi(other.clone(), -1)])
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => v == name,
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().any(|t| t.contains_var(name)),
            Expr::Pow(b, _) => b.contains_var(name),
            Expr::Func(_, a) => a.contains_var(name),
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut std::collections::BTreeSet<String>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(v) => {
                    out.insert(v.clone());
                }
                Expr::Add(ts) | Expr::Mul(ts) => ts.iter().for_each(|t| walk(t, out)),
                Expr::Pow(b, _) => walk(b, out),
                Expr::Func(_, a) => walk(a, out),
            }
        }
        let mut s = std::collections::BTreeSet::new();
        walk(self, &mut s);
        s.into_iter().collect()
    }

    pub fn diff(&self, var: &str) -> Expr {
        if !self.contains_var(var) {
            return Expr::zero();
        }
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(_) => Expr::one(),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.diff(var)).collect()),
            Expr::Mul(fs) => Expr::add(
                (0..fs.len())
                    .filter(|&i| fs[i].contains_var(var))
                    .map(|i| {
                        let mut g = fs.clone();
                        g[i] = fs[i].diff(var);
                        Expr::mul(g)
                    })
                    .collect(),
            ),
            Expr::Pow(b, e) => Expr::mul(vec![Expr::Const(e.clone()), Expr::pow((**b).clone(), e - Scalar::one()), b.diff(var)]),
            Expr::Func(f, a) => {
                let da = a.diff(var);
                let a = (**a).clone();
                let outer = match f {
                    Func::Exp => Expr::func(Func::Exp, a),
                    Func::Ln => Expr::powi(a, -1),
                    Func::Sqrt => Expr::mul(vec![Expr::frac(1, 2), Expr::powi(Expr::func(Func::Sqrt, a), -1)]),
                    Func::Sech => Expr::mul(vec![Expr::int(-1), Expr::func(Func::Sech, a.clone()), Expr::func(Func::Tanh, a)]),
                    Func::Tanh => Expr::one().sub(&Expr::powi(Expr::func(Func::Tanh, a), 2)),
                };
                Expr::mul(vec![outer, da])
            }
        }
    }

    pub fn diff_n(&self, var: &str, n: usize) -> Expr {
        (0..n).fold(self.clone(), |e, _| e.diff(var))
    }

    /// Replaces variables and re-simplifies.
    pub fn substitute(&self, map: &BTreeMap<String, Expr>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.substitute(map)).collect()),
            Expr::Mul(fs) => Expr::mul(fs.iter().map(|f| f.substitute(map)).collect()),
            Expr::Pow(b, e) => Expr::pow(b.substitute(map), e.clone()),
            Expr::Func(f, a) => Expr::func(*f, a.substitute(map)),
        }
    }

    pub fn substitute_one(&self, name: &str, value: &Expr) -> Expr {
        self.substitute(&BTreeMap::from([(name.to_string(), value.clone())]))
    }

    /// Double-precision evaluation; unbound variables are reported by name.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<f64>) -> Result<f64, ClosedFormError> {
        self.eval_inner(env).map_err(|e| match e {
            Ok(EvalError::Singular) => ClosedFormError::Singular,
            Ok(EvalError::Domain) => ClosedFormError::Domain,
            Err(name) => ClosedFormError::Unbound(name),
        })
    }

    fn eval_inner(&self, env: &dyn Fn(&str) -> Option<f64>) -> Result<f64, Result<EvalError, String>> {
        let v = match self {
            Expr::Const(c) => scalar::to_f64(c),
            Expr::Var(n) => env(n).ok_or_else(|| Err(n.clone()))?,
            Expr::Add(ts) => {
                let mut s = 0.0;
                for t in ts {
                    s += t.eval_inner(env)?;
                }
                s
            }
            Expr::Mul(fs) => {
                let mut p = 1.0;
                for f in fs {
                    p *= f.eval_inner(env)?;
                }
                p
            }
            Expr::Pow(b, e) => {
                let bv = b.eval_inner(env)?;
                let ef = scalar::to_f64(e);
                if e.is_negative() && bv.abs() < SINGULAR_EPS {
                    return Err(Ok(EvalError::Singular));
                }
                if e.is_integer() {
                    bv.powi(e.to_integer().to_i32().ok_or(Ok(EvalError::Domain))?)
                } else {
                    if bv < 0.0 {
                        return Err(Ok(EvalError::Domain));
                    }
                    bv.powf(ef)
                }
            }
            Expr::Func(f, a) => {
                let x = a.eval_inner(env)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(Ok(EvalError::Domain));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(Ok(EvalError::Domain));
                        }
                        x.sqrt()
                    }
                    Func::Sech => 1.0 / x.cosh(),
                    Func::Tanh => x.tanh(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Ok(EvalError::Singular))
        }
    }

    pub fn eval_at(&self, names: &[&str], values: &[f64]) -> Result<f64, ClosedFormError> {
        self.eval(&|n: &str| names.iter().position(|m| *m == n).map(|i| values[i]))
    }

    pub fn parse(src: &str) -> Result<Expr, ClosedFormError> {
        Expr::from_ast(&parse_ast(src)?)
    }

    pub fn from_ast(ast: &Ast) -> Result<Expr, ClosedFormError> {
        Ok(match ast {
            Ast::Num(c) => Expr::Const(c.clone()),
            Ast::Ident(n) => Expr::Var(n.clone()),
            Ast::Neg(a) => Expr::from_ast(a)?.neg(),
            Ast::Add(a, b) => Expr::from_ast(a)?.plus(&Expr::from_ast(b)?),
            Ast::Sub(a, b) => Expr::from_ast(a)?.sub(&Expr::from_ast(b)?),
            Ast::Mul(a, b) => Expr::from_ast(a)?.times(&Expr::from_ast(b)?),
            Ast::Div(a, b) => Expr::from_ast(a)?.div(&Expr::from_ast(b)?),
            Ast::Pow(a, b) => {
                let e = b.as_constant().ok_or(ClosedFormError::NonConstantExponent)?;
                Expr::pow(Expr::from_ast(a)?, e)
            }
            Ast::Call(name, a) => Expr::func(Func::from_name(name).ok_or_else(|| ClosedFormError::UnknownFunction(name.clone()))?, Expr::from_ast(a)?),
        })
    }

    /// Exact conversion when the tree is rational in chart coordinates.
    pub fn to_ratfunc(&self, chart: &Chart) -> Result<RatFunc, ClosedFormError> {
        Ok(match self {
            Expr::Const(c) => RatFunc::constant(chart, c.clone()),
            Expr::Var(n) => {
                let idx = chart.index(n).ok_or_else(|| ClosedFormError::NotRational(format!("free symbol {n}")))?;
                RatFunc::from_poly(crate::symkernel::Poly::var(chart, idx))
            }
            Expr::Add(ts) => {
                let mut acc = RatFunc::zero(chart);
                for t in ts {
                    acc = &acc + &t.to_ratfunc(chart)?;
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = RatFunc::one(chart);
                for f in fs {
                    acc = &acc * &f.to_ratfunc(chart)?;
                }
                acc
            }
            Expr::Pow(b, e) => {
                if !e.is_integer() {
                    return Err(ClosedFormError::NotRational(format!("exponent {}", scalar::render(e))));
                }
                let n = e.to_integer().to_i64().ok_or_else(|| ClosedFormError::NotRational("huge exponent".into()))?;
                let base = b.to_ratfunc(chart)?;
                let base = if n < 0 { base.recip().map_err(|_| ClosedFormError::Singular)? } else { base };
                let mut acc = RatFunc::one(chart);
                for _ in 0..n.unsigned_abs() {
                    acc = &acc * &base;
                }
                acc
            }
            Expr::Func(f, _) => return Err(ClosedFormError::NotRational(f.name().to_string())),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(_) => 1,
            Expr::Mul(_) => 2,
            Expr::Const(c) if c.is_negative() || !c.is_integer() => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn wrap(&self, min: u8) -> String {
        let s = self.render();
        if self.precedence() < min {
            format!("({s})")
        } else {
            s
        }
    }

    fn is_negative_term(&self) -> bool {
        match self {
            Expr::Const(c) => c.is_negative(),
            Expr::Mul(fs) => matches!(fs.first(), Some(Expr::Const(c)) if c.is_negative()),
            _ => false,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Expr::Const(c) => scalar::render(c),
            Expr::Var(v) => v.clone(),
            Expr::Add(ts) => {
                let mut out = String::new();
                for (i, t) in ts.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&t.render());
                    } else if t.is_negative_term() {
                        out.push_str(" - ");
                        out.push_str(&t.neg().wrap(2));
                    } else {
                        out.push_str(" + ");
                        out.push_str(&t.render());
                    }
                }
                out
            }
            Expr::Mul(fs) => {
                let mut num = Vec::new();
                let mut den = Vec::new();
                let mut sign = "";
                for f in fs {
                    match f {
                        Expr::Const(c) => {
                            let mag = c.abs();
                            if c.is_negative() {
                                sign = "-";
                            }
                            if !mag.numer().is_one() {
                                num.push(mag.numer().to_string());
                            }
                            if !mag.denom().is_one() {
                                den.push(mag.denom().to_string());
                            }
                        }
                        Expr::Pow(b, e) if e.is_negative() => den.push(Expr::pow((**b).clone(), -e.clone()).wrap(3)),
                        other => num.push(other.wrap(3)),
                    }
                }
                let n = if num.is_empty() { "1".to_string() } else { num.join("*") };
                match den.len() {
                    0 => format!("{sign}{n}"),
                    1 => format!("{sign}{n}/{}", den[0]),
                    _ => format!("{sign}{n}/({})", den.join("*")),
                }
            }
            Expr::Pow(b, e) => {
                if e.is_negative() {
                    return format!("1/{}", Expr::pow((**b).clone(), -e.clone()).wrap(3));
                }
                let es = if e.is_integer() { scalar::render(e) } else { format!("({})", scalar::render(e)) };
                format!("{}^{}", b.wrap(4), es)
            }
            Expr::Func(f, a) => format!("{}({})", f.name(), a.render()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Coeff for Expr {
    fn zero_on(_chart: &Chart) -> Self {
        Expr::zero()
    }
    fn constant_on(_chart: &Chart, c: Scalar) -> Self {
        Expr::Const(c)
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn neg(&self) -> Self {
        Expr::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn partial(&self, chart: &Chart, idx: usize) -> Self {
        self.diff(chart.name(idx))
    }
    fn depends_on(&self, chart: &Chart, idx: usize) -> bool {
        self.contains_var(chart.name(idx))
    }
    fn eval_at(&self, chart: &Chart, point: &[f64]) -> Option<f64> {
        self.eval(&|n: &str| chart.index(n).map(|i| point[i])).ok()
    }
    fn factor_text(&self) -> (bool, Option<String>) {
        let neg = self.is_negative_term();
        let mag = if neg { self.neg() } else { self.clone() };
        if mag.is_one() {
            (neg, None)
        } else if matches!(mag, Expr::Add(_)) {
            (neg, Some(format!("({})", mag.render())))
        } else {
            (neg, Some(mag.render()))
        }
    }
}
