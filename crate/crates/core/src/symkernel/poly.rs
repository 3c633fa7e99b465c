//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::chart::{compatible, Chart};
use super::scalar::{self, Scalar};
use super::KernelError;

/// Exponent vector, one entry per chart coordinate.
///
/// Ordered graded-lexicographically: total degree first, then the monomial
/// with the larger exponent at the earliest differing coordinate is larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize) -> Self {
        let mut e = vec![0; n];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// All exponent vectors over `n` coordinates of total degree at most `max_degree`,
    /// listed in ascending monomial order.
    pub fn all_up_to(n: usize, max_degree: u32) -> Vec<Monomial> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() == n {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_degree, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// Same as [`Monomial::all_up_to`] but only varying the coordinates in `vars`.
    pub fn all_up_to_in(n: usize, vars: &[usize], max_degree: u32) -> Vec<Monomial> {
        Monomial::all_up_to(vars.len(), max_degree)
            .into_iter()
            .map(|m| {
                let mut e = vec![0; n];
                for (k, &v) in vars.iter().enumerate() {
                    e[v] = m.0[k];
                }
                Monomial(e)
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct Poly {
    chart: Chart,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(chart: &Chart) -> Self {
        Poly { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, scalar::one())
    }

    pub fn constant(chart: &Chart, c: Scalar) -> Self {
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(chart.dim()), c);
        }
        p
    }

    pub fn var(chart: &Chart, idx: usize) -> Self {
        Self::term(chart, Monomial::var(chart.dim(), idx), scalar::one())
    }

    pub fn var_named(chart: &Chart, name: &str) -> Result<Self, KernelError> {
        Ok(Self::var(chart, chart.require(name)?))
    }

    pub fn term(chart: &Chart, m: Monomial, c: Scalar) -> Self {
        debug_assert_eq!(m.0.len(), chart.dim());
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(chart: &Chart, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(chart);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    /// Indices of the coordinates that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.chart.dim()).filter(|&i| self.depends_on(i)).collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_chart(&self, other: &Poly) {
        assert!(
            compatible(&self.chart, &other.chart),
            "chart mismatch: {} vs {}",
            self.chart,
            other.chart
        );
    }

    fn check_chart(&self, other: &Poly) -> Result<(), KernelError> {
        if compatible(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(KernelError::ChartMismatch(self.chart.to_string(), other.chart.to_string()))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, KernelError> {
        self.check_chart(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, KernelError> {
        self.check_chart(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, KernelError> {
        self.check_chart(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.chart);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[idx] -= 1;
                out.add_term(m2, c * scalar::int(e as i64));
            }
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<Poly, KernelError> {
        Ok(self.partial(self.chart.require(name)?))
    }

    /// Coefficients of `self` viewed as a univariate polynomial in coordinate `idx`:
    /// entry `k` multiplies `coord^k`.
    pub fn coeffs_in(&self, idx: usize) -> Vec<Poly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![Poly::zero(&self.chart); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[idx] as usize;
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// Replaces coordinate `idx` by `value`.
    pub fn substitute(&self, idx: usize, value: &Poly) -> Poly {
        self.assert_chart(value);
        let coeffs = self.coeffs_in(idx);
        // Horner in the substituted coordinate.
        let mut acc = Poly::zero(&self.chart);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = scalar::to_f64(c);
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        v *= point[i].powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    pub fn eval_exact(&self, point: &[Scalar]) -> Scalar {
        let mut total = scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Moves the polynomial onto another chart, matching coordinates by name.
    pub fn rechart(&self, target: &Chart) -> Result<Poly, KernelError> {
        if compatible(&self.chart, target) {
            return Ok(Poly { chart: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<Option<usize>> = self.chart.names().iter().map(|n| target.index(n)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.dim()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += k,
                    None => {
                        return Err(KernelError::UnknownCoordinate(self.chart.name(i).to_string()))
                    }
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` when the division leaves no remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_chart(divisor);
        let (dm, dc) = divisor.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.chart);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_of(rm);
            let qc = rc / &dc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.chart.dim()),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn scalar_content(&self) -> Scalar {
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            scalar::one()
        } else {
            Scalar::new(num, den)
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(k, c)| (m.quotient_of(k), c.clone())).collect(),
        }
    }

    pub fn leading_sign_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter(), self.chart.names())
    }
}

pub(crate) fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a Scalar)>,
    names: &[String],
) -> String {
    let mut out = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&scalar::render(&mag));
        } else if mag.is_one() {
            out.push_str(&m.render(names));
        } else {
            out.push_str(&scalar::render(&mag));
            out.push('*');
            out.push_str(&m.render(names));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        compatible(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.assert_chart(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.assert_chart(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.assert_chart(rhs);
        let mut out = Poly::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::chart::CoordChart;

    fn chart() -> Chart {
        CoordChart::plain(&["t", "x", "u", "u_t", "u_x", "u_tt", "u_tx", "u_xx"]).unwrap()
    }

    fn v(c: &Chart, n: &str) -> Poly {
        Poly::var_named(c, n).unwrap()
    }

    #[test]
    fn distributivity_example() {
        let c = chart();
        let lhs = &v(&c, "u_x") * &(&v(&c, "u_t") + &v(&c, "u"));
        let rhs = &(&v(&c, "u_x") * &v(&c, "u_t")) + &(&v(&c, "u") * &v(&c, "u_x"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_of_squares() {
        let c = chart();
        let one = Poly::one(&c);
        let u = v(&c, "u");
        let p = &(&u - &one) * &(&u + &one);
        assert_eq!(p, &u.pow(2) - &one);
    }

    #[test]
    fn cancellation_leaves_alpha1_coefficient() {
        let c = chart();
        let a = &(&v(&c, "u_x") * &v(&c, "u_tt")) - &(&v(&c, "u_t") * &v(&c, "u_tx"));
        let b = &v(&c, "u_t") * &v(&c, "u_tx");
        assert_eq!(&a + &b, &v(&c, "u_x") * &v(&c, "u_tt"));
    }

    #[test]
    fn partial_examples() {
        let c = chart();
        let p = &(&v(&c, "u") * &v(&c, "u_x")) + &v(&c, "u_t");
        assert_eq!(p.partial_named("u_x").unwrap(), v(&c, "u"));
        let q = &v(&c, "t") * &v(&c, "u_x");
        assert_eq!(q.partial_named("t").unwrap(), v(&c, "u_x"));
        let a = &(&v(&c, "u_x") * &v(&c, "u_tt")) - &(&v(&c, "u_t") * &v(&c, "u_tx"));
        assert_eq!(a.partial_named("u_tt").unwrap(), v(&c, "u_x"));
        assert!(a.partial_named("w").is_err());
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = Poly::one(&chart());
        let b = Poly::one(&CoordChart::plain(&["y"]).unwrap());
        assert!(matches!(a.checked_add(&b), Err(KernelError::ChartMismatch(..))));
    }

    #[test]
    fn exact_division() {
        let c = chart();
        let u = v(&c, "u");
        let x = v(&c, "x");
        let d = &(&u * &x) + &Poly::one(&c);
        let q = &u.pow(2) - &x;
        assert_eq!((&d * &q).div_exact(&d), Some(q));
        assert_eq!((&d + &u).div_exact(&d), None);
    }

    #[test]
    fn grlex_rendering_order() {
        let c = chart();
        let a = &(&v(&c, "u_x") * &v(&c, "u_tt")) - &(&v(&c, "u_t") * &v(&c, "u_tx"));
        assert_eq!(a.render(), "u_x*u_tt - u_t*u_tx");
        assert_eq!(Poly::zero(&c).render(), "0");
        assert_eq!(v(&c, "x").scale(&scalar::frac(-1, 3)).render(), "-1/3*x");
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(Monomial::all_up_to(8, 1).len(), 9);
        assert_eq!(Monomial::all_up_to(3, 2).len(), 10);
        assert_eq!(Monomial::all_up_to_in(8, &[0, 1, 2], 2).len(), 10);
    }
}
