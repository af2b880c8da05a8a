//! Truncated power series in λ₁..λ_m with coefficients in the exact
//! exponential-polynomial ring, and the λ-series of F, R and ψ.

mod build;
mod schur;

pub use build::{build_cdf_series, build_f_series, cdf_expansion, build_psi_series, build_r_series, lemma7_check, PsiSeries};
pub use schur::{
    alternant_poly, det_series, schur_poly, split_antisymmetric, vandermonde_poly, SchurExpansion,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exp_poly::ExpPolyEvaluator;
use crate::scalar::q;
use crate::{QExpPoly, QPoly, Rational};

/// Σ_α c_α(x) λ^α with every coefficient of total degree ≤ `order` exact.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries {
    m: usize,
    order: usize,
    coeffs: BTreeMap<Vec<u32>, QExpPoly>,
}

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&d| d as usize).sum()
}

impl LambdaSeries {
    pub fn zero(m: usize, order: usize) -> Self {
        LambdaSeries { m, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, order: usize, c: QExpPoly) -> Self {
        Self::monomial(m, order, vec![0; m], c)
    }

    pub fn monomial(m: usize, order: usize, exps: Vec<u32>, c: QExpPoly) -> Self {
        let mut s = Self::zero(m, order);
        s.add_term(exps, c);
        s
    }

    /// Series of a polynomial in λ with constant (in x) rational coefficients.
    pub fn from_poly(p: &QPoly, order: usize) -> Self {
        let mut s = Self::zero(p.nvars(), order);
        for (e, c) in p.terms() {
            s.add_term(e.clone(), QExpPoly::constant(c.clone()));
        }
        s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QExpPoly)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> QExpPoly {
        self.coeffs.get(exps).cloned().unwrap_or_default()
    }

    /// Adds c·λ^exps; terms beyond the order are dropped.
    pub fn add_term(&mut self, exps: Vec<u32>, c: QExpPoly) {
        debug_assert_eq!(exps.len(), self.m);
        if c.is_zero() || degree(&exps) > self.order {
            return;
        }
        match self.coeffs.get_mut(&exps) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.coeffs.remove(&exps);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(exps, c);
            }
        }
    }

    fn check_m(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::InvalidParams(format!("series in {} and {} variables", self.m, other.m)));
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut s = Self::zero(self.m, order);
        for (e, c) in &self.coeffs {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_m(other)?;
        let mut s = self.truncate(self.order.min(other.order));
        for (e, c) in &other.coeffs {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_rational(&q(-1))
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.m, self.order);
        for (e, v) in &self.coeffs {
            s.add_term(e.clone(), v.scale(c));
        }
        s
    }

    /// Multiplies every coefficient by an x-dependent factor.
    pub fn scale(&self, c: &QExpPoly) -> Self {
        let mut s = Self::zero(self.m, self.order);
        for (e, v) in &self.coeffs {
            s.add_term(e.clone(), v * c);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_m(other)?;
        let mut s = Self::zero(self.m, self.order.min(other.order));
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if degree(&e) <= s.order {
                    s.add_term(e, ca * cb);
                }
            }
        }
        Ok(s)
    }

    /// ∂/∂λ_i; the exact range shrinks by one degree.
    pub fn diff_lambda(&self, i: usize) -> Self {
        let mut s = Self::zero(self.m, self.order.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            s.add_term(e2, c.scale(&q(e[i] as i64)));
        }
        s
    }

    /// Multiplication by λ^exps; the exact range grows by the degree.
    pub fn mul_lambda_monomial(&self, exps: &[u32]) -> Self {
        let mut s = Self::zero(self.m, self.order + degree(exps));
        for (e, c) in &self.coeffs {
            s.add_term(e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone());
        }
        s
    }

    /// d/dx applied coefficient-wise.
    pub fn diff_x(&self) -> Self {
        let mut s = Self::zero(self.m, self.order);
        for (e, c) in &self.coeffs {
            s.add_term(e.clone(), c.differentiate());
        }
        s
    }

    pub fn map_coeffs(&self, f: impl Fn(&QExpPoly) -> QExpPoly) -> Self {
        let mut s = Self::zero(self.m, self.order);
        for (e, c) in &self.coeffs {
            s.add_term(e.clone(), f(c));
        }
        s
    }

    /// Exchanges λ_i and λ_j.
    pub fn swap(&self, i: usize, j: usize) -> Self {
        let mut s = Self::zero(self.m, self.order);
        for (e, c) in &self.coeffs {
            let mut e2 = e.clone();
            e2.swap(i, j);
            s.add_term(e2, c.clone());
        }
        s
    }

    /// Largest total degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|e| degree(e)).max()
    }

    /// Numeric value of the truncated series at (x, λ).
    pub fn eval(&self, x: f64, lambdas: &[f64]) -> Result<f64> {
        let ev = ExpPolyEvaluator::new(x)?;
        let mut acc = 0.0;
        for (e, c) in &self.coeffs {
            let mono: f64 = lambdas.iter().zip(e).map(|(l, &d)| l.powi(d as i32)).product();
            if mono != 0.0 {
                acc += ev.eval(c)? * mono;
            }
        }
        Ok(acc)
    }

    /// Like [`eval`](Self::eval) but also returns the magnitude of the terms
    /// of the top exact degree, a truncation-error proxy.
    pub fn eval_with_tail(&self, x: f64, lambdas: &[f64]) -> Result<(f64, f64)> {
        let ev = ExpPolyEvaluator::new(x)?;
        let top = self.order;
        let mut acc = 0.0;
        let mut tail = 0.0;
        for (e, c) in &self.coeffs {
            let mono: f64 = lambdas.iter().zip(e).map(|(l, &d)| l.powi(d as i32)).product();
            if mono != 0.0 {
                let v = ev.eval(c)? * mono;
                acc += v;
                if degree(e) == top {
                    tail += v.abs();
                }
            }
        }
        Ok((acc, tail))
    }

    /// One line per coefficient: "q1 q2 ... qm : <ring element>".
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.coeffs {
            let idx: Vec<String> = e.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "{} : {}", idx.join(" "), c);
        }
        out
    }

    /// Parses the output of [`dump`](Self::dump).
    pub fn parse_dump(text: &str, m: usize, order: usize) -> Result<Self> {
        let mut s = Self::zero(m, order);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (lhs, rhs) = line
                .split_once(" : ")
                .ok_or_else(|| Error::Parse(format!("missing ' : ' in '{line}'")))?;
            let e: Vec<u32> = lhs
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad exponent '{t}'"))))
                .collect::<Result<_>>()?;
            if e.len() != m {
                return Err(Error::Parse(format!("expected {m} exponents in '{line}'")));
            }
            s.add_term(e, rhs.parse()?);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(m: usize, order: usize, e: Vec<u32>) -> LambdaSeries {
        LambdaSeries::monomial(m, order, e, QExpPoly::one())
    }

    #[test]
    fn arithmetic_contracts() {
        let one = LambdaSeries::constant(1, 4, QExpPoly::one());
        let l = lam(1, 4, vec![1]);
        let p = one.add(&l).unwrap().mul(&one.sub(&l).unwrap()).unwrap();
        assert_eq!(p, one.sub(&lam(1, 4, vec![2])).unwrap());
        let l12 = lam(2, 5, vec![1, 1]);
        assert_eq!(l12.diff_lambda(0), lam(2, 4, vec![0, 1]));
        let cube = lam(1, 3, vec![2]).mul(&lam(1, 3, vec![2])).unwrap();
        assert!(cube.is_zero());
    }

    #[test]
    fn dump_round_trip() {
        let mut s = LambdaSeries::zero(2, 3);
        s.add_term(vec![1, 0], QExpPoly::monomial(q(3), 2, 1));
        s.add_term(vec![0, 2], QExpPoly::monomial(q(-1), -1, 0));
        let text = s.dump();
        assert!(text.contains("1 0 : 3*x^2*E^1"));
        assert_eq!(LambdaSeries::parse_dump(&text, 2, 3).unwrap(), s);
    }
}
