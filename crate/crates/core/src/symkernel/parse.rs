//! Recursive-descent parser for the expression grammar shared by polynomials,
//! rational functions and closed-form expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use num_traits::{ToPrimitive, Zero};

use super::chart::Chart;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{self, Scalar};
use super::KernelError;

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(Scalar),
    Ident(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Call(String, Box<Ast>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, KernelError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let mut text = src[start..i].to_string();
            let mut exp = 0i64;
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    exp = src[i + 1..j].parse().map_err(|_| syntax(i, "bad exponent"))?;
                    i = j;
                }
            }
            if text.starts_with('.') {
                text.insert(0, '0');
            }
            let mut v = scalar::parse(&text).ok_or_else(|| syntax(start, "bad number"))?;
            if exp != 0 {
                v *= scalar::powi(&scalar::int(10), exp);
            }
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(syntax(i, &format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

fn syntax(pos: usize, msg: &str) -> KernelError {
    KernelError::Syntax { pos, message: msg.to_string() }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, KernelError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, KernelError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, KernelError> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, KernelError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, KernelError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Ast::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(syntax(self.pos(), "expected ')'"));
                    }
                    Ok(Ast::Call(name, Box::new(arg)))
                } else {
                    Ok(Ast::Ident(name))
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(syntax(pos, &format!("unexpected '{c}'"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses text into a syntax tree without interpreting identifiers.
pub fn parse_ast(src: &str) -> Result<Ast, KernelError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

impl Ast {
    /// Evaluates to an exact constant when the tree contains no identifiers or calls.
    pub fn as_constant(&self) -> Option<Scalar> {
        Some(match self {
            Ast::Num(v) => v.clone(),
            Ast::Ident(_) | Ast::Call(..) => return None,
            Ast::Neg(a) => -a.as_constant()?,
            Ast::Add(a, b) => a.as_constant()? + b.as_constant()?,
            Ast::Sub(a, b) => a.as_constant()? - b.as_constant()?,
            Ast::Mul(a, b) => a.as_constant()? * b.as_constant()?,
            Ast::Div(a, b) => {
                let d = b.as_constant()?;
                if d.is_zero() {
                    return None;
                }
                a.as_constant()? / d
            }
            Ast::Pow(a, b) => {
                let e = b.as_constant()?;
                if !e.is_integer() {
                    return None;
                }
                let base = a.as_constant()?;
                let e = e.to_integer().to_i64()?;
                if e < 0 && base.is_zero() {
                    return None;
                }
                scalar::powi(&base, e)
            }
        })
    }
}

fn integer_exponent(e: &Ast) -> Result<i64, KernelError> {
    let v = e.as_constant().ok_or(KernelError::NonPolynomial("non-constant exponent".into()))?;
    if !v.is_integer() {
        return Err(KernelError::NonPolynomial(format!("exponent {} is not an integer", scalar::render(&v))));
    }
    v.to_integer().to_i64().ok_or(KernelError::NonPolynomial("exponent too large".into()))
}

pub fn ast_to_poly(ast: &Ast, chart: &Chart) -> Result<Poly, KernelError> {
    Ok(match ast {
        Ast::Num(v) => Poly::constant(chart, v.clone()),
        Ast::Ident(name) => Poly::var_named(chart, name)?,
        Ast::Neg(a) => -ast_to_poly(a, chart)?,
        Ast::Add(a, b) => ast_to_poly(a, chart)? + ast_to_poly(b, chart)?,
        Ast::Sub(a, b) => ast_to_poly(a, chart)? - ast_to_poly(b, chart)?,
        Ast::Mul(a, b) => ast_to_poly(a, chart)? * ast_to_poly(b, chart)?,
        Ast::Div(a, b) => {
            let d = ast_to_poly(b, chart)?;
            match d.as_constant() {
                Some(c) if !c.is_zero() => ast_to_poly(a, chart)?.scale(&c.recip()),
                Some(_) => return Err(KernelError::ZeroDenominator),
                None => return Err(KernelError::NonPolynomial("division by a non-constant".into())),
            }
        }
        Ast::Pow(a, b) => {
            let e = integer_exponent(b)?;
            if e < 0 {
                return Err(KernelError::NonPolynomial("negative power".into()));
            }
            ast_to_poly(a, chart)?.pow(e as u32)
        }
        Ast::Call(f, _) => return Err(KernelError::NonPolynomial(format!("function call {f}(...)"))),
    })
}

pub fn ast_to_ratfunc(ast: &Ast, chart: &Chart) -> Result<RatFunc, KernelError> {
    Ok(match ast {
        Ast::Num(_) | Ast::Ident(_) => RatFunc::from_poly(ast_to_poly(ast, chart)?),
        Ast::Neg(a) => -ast_to_ratfunc(a, chart)?,
        Ast::Add(a, b) => ast_to_ratfunc(a, chart)? + ast_to_ratfunc(b, chart)?,
        Ast::Sub(a, b) => ast_to_ratfunc(a, chart)? - ast_to_ratfunc(b, chart)?,
        Ast::Mul(a, b) => ast_to_ratfunc(a, chart)? * ast_to_ratfunc(b, chart)?,
        Ast::Div(a, b) => ast_to_ratfunc(a, chart)?.checked_div(&ast_to_ratfunc(b, chart)?)?,
        Ast::Pow(a, b) => {
            let e = integer_exponent(b)?;
            let base = ast_to_ratfunc(a, chart)?;
            let p = RatFunc::new(base.numer().pow(e.unsigned_abs() as u32), base.denom().pow(e.unsigned_abs() as u32))?;
            if e.is_negative() {
                p.recip()?
            } else {
                p
            }
        }
        Ast::Call(f, _) => return Err(KernelError::NonPolynomial(format!("function call {f}(...)"))),
    })
}

pub fn parse_poly(src: &str, chart: &Chart) -> Result<Poly, KernelError> {
    ast_to_poly(&parse_ast(src)?, chart)
}

pub fn parse_ratfunc(src: &str, chart: &Chart) -> Result<RatFunc, KernelError> {
    ast_to_ratfunc(&parse_ast(src)?, chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::chart::CoordChart;

    fn kdv3() -> Chart {
        CoordChart::plain(&["t", "x", "u", "u_t", "u_x", "u_xxx"]).unwrap()
    }

    #[test]
    fn kdv_equation_parses_to_three_terms() {
        let p = parse_poly("u_xxx + u*u_x + u_t", &kdv3()).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn zero_and_rational_coefficients() {
        let ch = kdv3();
        assert!(parse_poly("0", &ch).unwrap().is_zero());
        let p = parse_poly("(1/3)*x", &ch).unwrap();
        assert_eq!(p, Poly::var(&ch, 1).scale(&scalar::frac(1, 3)));
        assert_eq!(parse_poly("x/3", &ch).unwrap(), p);
    }

    #[test]
    fn errors_carry_positions() {
        let ch = kdv3();
        match parse_poly("u + * x", &ch) {
            Err(KernelError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("u + w", &ch), Err(KernelError::UnknownCoordinate(_))));
        assert!(matches!(parse_poly("u / x", &ch), Err(KernelError::NonPolynomial(_))));
        assert!(parse_poly("(u + 1", &ch).is_err());
    }

    #[test]
    fn precedence_and_powers() {
        let ch = kdv3();
        let p = parse_poly("-u^2 + 2*x^3 - (t - 1)^2", &ch).unwrap();
        let u = Poly::var(&ch, 2);
        let x = Poly::var(&ch, 1);
        let t = Poly::var(&ch, 0);
        let one = Poly::one(&ch);
        let expected = &(&(-&u.pow(2)) + &x.pow(3).scale(&scalar::int(2))) - &(&t - &one).pow(2);
        assert_eq!(p, expected);
    }

    #[test]
    fn decimals_and_exponent_notation() {
        let ch = kdv3();
        assert_eq!(parse_poly("0.25*x", &ch).unwrap(), Poly::var(&ch, 1).scale(&scalar::frac(1, 4)));
        assert_eq!(parse_ast("1e-3").unwrap().as_constant(), Some(scalar::frac(1, 1000)));
    }

    #[test]
    fn rational_functions() {
        let ch = kdv3();
        let r = parse_ratfunc("12/(x+1)^2 - 2", &ch).unwrap();
        assert_eq!(r.eval_f64(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]), 1.0);
    }
}
