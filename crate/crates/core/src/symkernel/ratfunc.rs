use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::chart::{compatible, Chart};
use super::poly::Poly;
use super::scalar::Scalar;
use super::KernelError;

/// Quotient of two polynomials.
///
/// Only monomial and scalar content are cancelled (plus exact cofactors when
/// one side divides the other); equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, KernelError> {
        if den.is_zero() {
            return Err(KernelError::ZeroDenominator);
        }
        if !compatible(num.chart(), den.chart()) {
            return Err(KernelError::ChartMismatch(num.chart().to_string(), den.chart().to_string()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.chart());
        RatFunc { num: p, den }
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::from_poly(Poly::zero(chart))
    }

    pub fn one(chart: &Chart) -> Self {
        Self::from_poly(Poly::one(chart))
    }

    pub fn constant(chart: &Chart, c: Scalar) -> Self {
        Self::from_poly(Poly::constant(chart, c))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(num.chart());
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g), den.div_monomial(&g))
        };
        let mut k = den.scalar_content();
        if den.leading_sign_negative() {
            k = -k;
        }
        if !k.is_one() {
            let inv = k.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.as_constant().is_none() {
            if let Some(q) = num.div_exact(&den) {
                return Self::from_poly(q);
            }
            if num.as_constant().is_none() {
                if let Some(q) = den.div_exact(&num) {
                    // num / (num * q) = 1 / q
                    return Self::normalized(Poly::one(num.chart()), q);
                }
            }
        }
        RatFunc { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn chart(&self) -> &Chart {
        self.num.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this equals, when the denominator is a nonzero constant.
    pub fn as_poly(&self) -> Option<Poly> {
        let d = self.den.as_constant()?;
        Some(if d.is_one() { self.num.clone() } else { self.num.scale(&d.recip()) })
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_poly()?.as_constant()
    }

    pub fn recip(&self) -> Result<Self, KernelError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, KernelError> {
        if other.is_zero() {
            return Err(KernelError::ZeroDenominator);
        }
        Ok(Self::normalized(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn partial(&self, idx: usize) -> Self {
        let dn = self.num.partial(idx);
        let dd = self.den.partial(idx);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalized(top, self.den.pow(2))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn eval_exact(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval_exact(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_exact(point) / d)
        }
    }

    pub fn rechart(&self, target: &Chart) -> Result<Self, KernelError> {
        Ok(RatFunc { num: self.num.rechart(target)?, den: self.den.rechart(target)? })
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.num.depends_on(idx) || self.den.depends_on(idx)
    }

    pub fn render(&self) -> String {
        match self.as_poly() {
            Some(p) => p.render(),
            None => {
                let wrap = |p: &Poly| {
                    if p.len() == 1 && !p.leading_sign_negative() {
                        p.render()
                    } else {
                        format!("({})", p.render())
                    }
                };
                format!("{}/{}", wrap(&self.num), wrap(&self.den))
            }
        }
    }

    pub fn is_negative_monomial(&self) -> bool {
        self.num.len() == 1 && self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

/// Semantic equality: `a/b == c/d` iff `a*d - b*c == 0`.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        compatible(self.chart(), other.chart())
            && (&self.num * &other.den) == (&other.num * &self.den)
    }
}

pub fn ratfunc_equal(a: &RatFunc, b: &RatFunc) -> Result<bool, KernelError> {
    if !compatible(a.chart(), b.chart()) {
        return Err(KernelError::ChartMismatch(a.chart().to_string(), b.chart().to_string()));
    }
    Ok(a == b)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.render())
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalized(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.chart());
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}
