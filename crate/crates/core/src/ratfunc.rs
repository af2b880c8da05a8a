//! Rational functions as numerator/denominator polynomial pairs.
//!
//! There is no multivariate gcd here. Normalization strips common monomials,
//! folds constant denominators and cancels a denominator (or one of the
//! factors it was built from) when it divides the numerator exactly. Equality
//! is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::mpoly::MPoly;
use crate::scalar::FieldCoeff;

#[derive(Clone, Debug)]
pub struct RatFunc<C> {
    num: MPoly<C>,
    den: MPoly<C>,
}

impl<C: FieldCoeff> RatFunc<C> {
    pub fn new(num: MPoly<C>, den: MPoly<C>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: MPoly<C>) -> Self {
        let nv = p.nvars();
        RatFunc { num: p, den: MPoly::one(nv) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MPoly<C> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MPoly<C>> {
        match self.den.as_constant() {
            Some(c) if c == C::one() => Some(&self.num),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<C> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    fn normalize(&mut self) {
        let nv = self.num.nvars();
        if self.num.is_zero() {
            self.den = MPoly::one(nv);
            return;
        }
        let gn = self.num.monomial_gcd();
        let gd = self.den.monomial_gcd();
        let g: Vec<u32> = gn.iter().zip(&gd).map(|(a, b)| (*a).min(*b)).collect();
        if g.iter().any(|&d| d > 0) {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&(C::one() / c));
            self.den = MPoly::one(nv);
            return;
        }
        if let Some(qt) = self.num.div_exact(&self.den) {
            self.num = qt;
            self.den = MPoly::one(nv);
            return;
        }
        let lc = self.den.leading().unwrap().1.clone();
        if lc != C::one() {
            let inv = C::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one(self.nvars());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        if self.den.as_constant().is_some() {
            return Self::new(self.num.derivative(var), self.den.clone());
        }
        let n = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        if let Some(qt) = n.div_exact(&self.den) {
            return Self::new(qt, self.den.clone());
        }
        Self::new(n, &self.den * &self.den)
    }

    pub fn substitute(&self, var: usize, v: &C) -> Self {
        Self::new(self.num.substitute(var, v), self.den.substitute(var, v))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn eval(&self, point: &[C]) -> C {
        self.num.eval(point) / self.den.eval(point)
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.den.as_constant().is_some() {
            self.num.fmt_with(names)
        } else {
            format!("({}) / ({})", self.num.fmt_with(names), self.den.fmt_with(names))
        }
    }
}

impl<C: FieldCoeff> PartialEq for RatFunc<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<C: FieldCoeff> From<MPoly<C>> for RatFunc<C> {
    fn from(p: MPoly<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<C: FieldCoeff> Add for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        if let Some(f) = self.den.div_exact(&rhs.den) {
            return RatFunc::new(&self.num + &(&rhs.num * &f), self.den.clone());
        }
        if let Some(f) = rhs.den.div_exact(&self.den) {
            return RatFunc::new(&(&self.num * &f) + &rhs.num, rhs.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        if let Some(qt) = num.div_exact(&self.den) {
            return RatFunc::new(qt, rhs.den.clone());
        }
        if let Some(qt) = num.div_exact(&rhs.den) {
            return RatFunc::new(qt, self.den.clone());
        }
        RatFunc::new(num, &self.den * &rhs.den)
    }
}

impl<C: FieldCoeff> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: FieldCoeff> Sub for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        self + &(-rhs)
    }
}

impl<C: FieldCoeff> Mul for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        let (mut n1, mut d2) = (self.num.clone(), rhs.den.clone());
        if d2.as_constant().is_none() {
            if let Some(qt) = n1.div_exact(&d2) {
                n1 = qt;
                d2 = MPoly::one(d2.nvars());
            }
        }
        let (mut n2, mut d1) = (rhs.num.clone(), self.den.clone());
        if d1.as_constant().is_none() {
            if let Some(qt) = n2.div_exact(&d1) {
                n2 = qt;
                d1 = MPoly::one(d1.nvars());
            }
        }
        RatFunc::new(&n1 * &n2, &d1 * &d2)
    }
}

impl<C: FieldCoeff> Div for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn div(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        self * &rhs.inv()
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: FieldCoeff> $tr for RatFunc<C> {
            type Output = RatFunc<C>;
            fn $m(self, rhs: RatFunc<C>) -> RatFunc<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<C: FieldCoeff> Neg for RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        -&self
    }
}

impl<C: FieldCoeff + fmt::Display> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type R = RatFunc<BigRational>;

    #[test]
    fn cancellation_and_equality() {
        let x = R::var(2, 0);
        let y = R::var(2, 1);
        let a = &(&x + &y) / &(&x - &y);
        let b = &(&x - &y) / &(&x + &y);
        assert_eq!(&a * &b, R::one(2));
        assert_eq!((&a * &b).as_poly().cloned(), Some(MPoly::one(2)));
        let s = &a + &b;
        let expected = &(&(&x * &x) + &(&y * &y)).scale(&q(2)) / &(&(&x * &x) - &(&y * &y));
        assert_eq!(s, expected);
    }

    #[test]
    fn derivative_quotient_rule() {
        let x = R::var(1, 0);
        let f = &R::one(1) / &x;
        assert_eq!(f.derivative(0), -&(&R::one(1) / &(&x * &x)));
    }
}
