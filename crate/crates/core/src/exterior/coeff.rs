use std::fmt::Debug;

use num_traits::{One, Signed};

use crate::symkernel::{Chart, Poly, RatFunc, Scalar};

/// Coefficient ring for forms and vector fields.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero_on(chart: &Chart) -> Self;
    fn constant_on(chart: &Chart, c: Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn partial(&self, chart: &Chart, idx: usize) -> Self;
    /// Conservative: `true` unless the coefficient provably ignores coordinate `idx`.
    fn depends_on(&self, _chart: &Chart, _idx: usize) -> bool {
        true
    }
    fn eval_at(&self, chart: &Chart, point: &[f64]) -> Option<f64>;
    /// Rendering as a factor in front of a basis element:
    /// `(negative, magnitude text)`, with `None` text meaning a unit factor.
    fn factor_text(&self) -> (bool, Option<String>);

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn one_on(chart: &Chart) -> Self {
        Self::constant_on(chart, Scalar::one())
    }
}

fn poly_factor_text(p: &Poly) -> (bool, Option<String>) {
    if p.len() == 1 {
        let (m, c) = p.terms().next().unwrap();
        let neg = c.is_negative();
        let mag = Poly::term(p.chart(), m.clone(), c.abs());
        if mag.is_one() {
            (neg, None)
        } else {
            (neg, Some(mag.render()))
        }
    } else {
        (false, Some(format!("({})", p.render())))
    }
}

impl Coeff for Poly {
    fn zero_on(chart: &Chart) -> Self {
        Poly::zero(chart)
    }
    fn constant_on(chart: &Chart, c: Scalar) -> Self {
        Poly::constant(chart, c)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn partial(&self, _chart: &Chart, idx: usize) -> Self {
        Poly::partial(self, idx)
    }
    fn depends_on(&self, _chart: &Chart, idx: usize) -> bool {
        Poly::depends_on(self, idx)
    }
    fn eval_at(&self, _chart: &Chart, point: &[f64]) -> Option<f64> {
        Some(self.eval_f64(point))
    }
    fn factor_text(&self) -> (bool, Option<String>) {
        poly_factor_text(self)
    }
}

impl Coeff for RatFunc {
    fn zero_on(chart: &Chart) -> Self {
        RatFunc::zero(chart)
    }
    fn constant_on(chart: &Chart, c: Scalar) -> Self {
        RatFunc::constant(chart, c)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn partial(&self, _chart: &Chart, idx: usize) -> Self {
        RatFunc::partial(self, idx)
    }
    fn depends_on(&self, _chart: &Chart, idx: usize) -> bool {
        RatFunc::depends_on(self, idx)
    }
    fn eval_at(&self, _chart: &Chart, point: &[f64]) -> Option<f64> {
        let v = self.eval_f64(point);
        v.is_finite().then_some(v)
    }
    fn factor_text(&self) -> (bool, Option<String>) {
        match self.as_poly() {
            Some(p) => poly_factor_text(&p),
            None => (false, Some(format!("({})", self.render()))),
        }
    }
}
