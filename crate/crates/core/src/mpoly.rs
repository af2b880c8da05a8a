//! Sparse multivariate polynomials with exponent vectors as keys.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Coeff, FieldCoeff};

/// Sparse polynomial in `nvars` variables. Keys are exponent vectors, so the
/// last entry of the map is the lexicographic leading term with variable 0
/// most significant.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: C) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&d| d == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.nvars);
        match self.terms.get_mut(&exps) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, v)| {
                let p = v.clone() * c.clone();
                (!p.is_zero()).then(|| (e.clone(), p))
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c.clone() * C::from_i64(e[var] as i64));
        }
        out
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn monomial_gcd(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.nvars],
        };
        for e in it {
            for (a, b) in g.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        g
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, exps: &[u32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e2 = e
                    .iter()
                    .zip(exps)
                    .map(|(a, b)| a.checked_sub(*b).expect("monomial does not divide"))
                    .collect();
                (e2, c.clone())
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, subs: &[MPoly<C>]) -> MPoly<C> {
        let nv = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut out = MPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(nv, c.clone());
            for (v, &d) in e.iter().enumerate() {
                if d > 0 {
                    t = &t * &subs[v].pow(d);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Fixes `var` to the value `v`; the variable stays in the signature.
    pub fn substitute(&self, var: usize, v: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut p = c.clone();
            for _ in 0..e[var] {
                p = p * v.clone();
            }
            let mut e2 = e.clone();
            e2[var] = 0;
            out.add_term(e2, p);
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.approx_f64();
                for (p, &d) in point.iter().zip(e) {
                    t *= p.powi(d as i32);
                }
                t
            })
            .sum()
    }

    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (p, &d) in point.iter().zip(e) {
                for _ in 0..d {
                    t = t * p.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(v, &d)| {
                        let name = names.get(v).copied().unwrap_or("?");
                        if d == 1 {
                            name.to_string()
                        } else {
                            format!("{name}^{d}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{c:?}")
                } else {
                    format!("({c:?})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: FieldCoeff> MPoly<C> {
    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly<C>) -> Option<MPoly<C>> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(C::one() / c)));
        }
        let (lde, ldc) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let mut qe = Vec::with_capacity(self.nvars);
            for (a, b) in re.iter().zip(&lde) {
                qe.push(a.checked_sub(*b)?);
            }
            let qc = rc / ldc.clone();
            let t = MPoly::monomial(self.nvars, qe, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl<C: Coeff> Add for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = MPoly::zero(self.nvars.max(rhs.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        MPoly { nvars: self.nvars, terms }
    }
}

impl<C: Coeff> Add for MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: MPoly<C>) -> MPoly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: MPoly<C>) -> MPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: MPoly<C>) -> MPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.fmt_with(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type P = MPoly<BigRational>;

    #[test]
    fn product_and_exact_division_round_trip() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let a = &(&x + &y) * &(&x - &P::constant(2, q(3)));
        let b = &y + &P::one(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn derivative_and_substitution() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = &(&x.pow(3) * &y) + &P::constant(2, q(5));
        assert_eq!(p.derivative(0), (&x.pow(2) * &y).scale(&q(3)));
        assert_eq!(p.substitute(1, &q(2)), &x.pow(3).scale(&q(2)) + &P::constant(2, q(5)));
        assert_eq!(p.eval_f64(&[2.0, 0.5]), 9.0);
    }

    #[test]
    fn monomial_gcd_strips_common_powers() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = &(&x.pow(2) * &y) + &(&x * &y.pow(3));
        assert_eq!(p.monomial_gcd(), vec![1, 1]);
        assert_eq!(p.div_monomial(&[1, 1]), &x + &y.pow(2));
    }
}
