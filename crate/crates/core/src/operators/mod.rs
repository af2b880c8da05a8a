//! Linear differential operators in (x, λ₁..λ_m) with rational-function
//! coefficients, kept in normal form Σ c(x,λ) ∂^α (coefficients on the left).

mod builders;
mod lclm;
mod printed;
mod verify;

pub use builders::{
    build_p, build_q, euler_op, gauge_translate, t_op, theorem1_factors, theorem2_op, OpBuilderParams,
};
pub use lclm::{lclm, URat, UOperator, UPoly};
pub use printed::PrintedOperator;
pub use verify::{
    verify_gauge_psi, verify_printed, verify_theorem1, verify_theorem2, CheckReport, ReportParams,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::series::LambdaSeries;
use crate::{QExpPoly, QPoly, QRatFunc, Rational};

/// Σ c_α ∂^α over variables (x, λ₁, …, λ_m); index 0 is x.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    m: usize,
    terms: BTreeMap<Vec<u32>, QRatFunc>,
}

fn binom(n: u32, k: u32) -> Rational {
    let mut r = q(1);
    for i in 0..k {
        r = r * q((n - i) as i64) / q((i + 1) as i64);
    }
    r
}

impl DiffOperator {
    pub fn zero(m: usize) -> Self {
        DiffOperator { m, terms: BTreeMap::new() }
    }

    /// Multiplication by a coefficient.
    pub fn coeff(m: usize, c: QRatFunc) -> Self {
        let mut d = Self::zero(m);
        d.add_term(vec![0; m + 1], c);
        d
    }

    pub fn scalar(m: usize, v: i64) -> Self {
        Self::coeff(m, QRatFunc::constant(m + 1, q(v)))
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, 1)
    }

    /// Multiplication by variable `v` (0 = x, i = λ_i).
    pub fn var(m: usize, v: usize) -> Self {
        Self::coeff(m, QRatFunc::var(m + 1, v))
    }

    /// ∂/∂(variable `v`).
    pub fn d(m: usize, v: usize) -> Self {
        Self::d_pow(m, v, 1)
    }

    pub fn d_pow(m: usize, v: usize, k: u32) -> Self {
        let mut e = vec![0; m + 1];
        e[v] = k;
        let mut d = Self::zero(m);
        d.add_term(e, QRatFunc::one(m + 1));
        d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QRatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> QRatFunc {
        self.terms.get(alpha).cloned().unwrap_or_else(|| QRatFunc::zero(self.m + 1))
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, c: QRatFunc) {
        debug_assert_eq!(alpha.len(), self.m + 1);
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&alpha) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(alpha, merged);
        }
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    /// Highest derivative order in variable `v`.
    pub fn order_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|a| a[v]).max().unwrap_or(0)
    }

    /// Left multiplication by a coefficient.
    pub fn scale_left(&self, c: &QRatFunc) -> Self {
        let mut out = Self::zero(self.m);
        for (a, t) in &self.terms {
            out.add_term(a.clone(), t * c);
        }
        out
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "operators in different variable counts");
        let mut out = Self::zero(self.m);
        for (a, c1) in &self.terms {
            for (b, c2) in &rhs.terms {
                // c1 ∂^a c2 ∂^b = c1 Σ_β C(a,β) (∂^β c2) ∂^{a−β+b}
                let mut beta = vec![0u32; a.len()];
                loop {
                    let mut dc = c2.clone();
                    let mut w = q(1);
                    for (v, &k) in beta.iter().enumerate() {
                        for _ in 0..k {
                            dc = dc.derivative(v);
                        }
                        w = w * binom(a[v], k);
                    }
                    if !dc.is_zero() {
                        let alpha: Vec<u32> = (0..a.len()).map(|v| a[v] - beta[v] + b[v]).collect();
                        out.add_term(alpha, (c1 * &dc).scale(&w));
                    }
                    // next β ≤ a in mixed radix
                    let mut v = 0;
                    while v < beta.len() {
                        if beta[v] < a[v] {
                            beta[v] += 1;
                            break;
                        }
                        beta[v] = 0;
                        v += 1;
                    }
                    if v == beta.len() {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.m);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Specializes variable `v` to a rational value in every coefficient.
    /// Derivatives in `v` are kept as they are.
    pub fn substitute(&self, v: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.m);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.substitute(v, value));
        }
        out
    }

    /// Left-multiplies by a product of the denominators so every coefficient
    /// is a polynomial in λ; powers of x may stay in the denominator since the
    /// series coefficient ring contains x⁻¹.
    pub fn clear_denominators(&self) -> Self {
        let mut big = QPoly::one(self.m + 1);
        for c in self.terms.values() {
            let (_, rest) = split_x_monomial(c.den());
            if rest.as_constant().is_some() {
                continue;
            }
            if big.div_exact(&rest).is_none() {
                big = &big * &rest;
            }
        }
        self.scale_left(&QRatFunc::from_poly(big))
    }

    /// Applies the operator to a λ-series. Coefficients must be polynomial
    /// in λ (denominators x^a only); the result's order is the safe order.
    pub fn apply(&self, s: &LambdaSeries) -> Result<LambdaSeries> {
        if s.m() != self.m {
            return Err(Error::InvalidParams(format!("operator in {} λ's applied to series in {}", self.m, s.m())));
        }
        let mut derivs: HashMap<Vec<u32>, LambdaSeries> = HashMap::new();
        let mut out: Option<LambdaSeries> = None;
        for (alpha, c) in &self.terms {
            let need: u32 = alpha[1..].iter().sum();
            if need as usize > s.order() {
                return Err(Error::OrderDeficit { have: s.order(), need: need as usize });
            }
            let (xpow, rest) = split_x_monomial(c.den());
            let den_c = rest.as_constant().ok_or_else(|| {
                Error::Precondition(format!("coefficient {} has a λ-dependent denominator", c))
            })?;
            if !derivs.contains_key(alpha) {
                let mut d = s.clone();
                for _ in 0..alpha[0] {
                    d = d.diff_x();
                }
                for (i, &k) in alpha[1..].iter().enumerate() {
                    for _ in 0..k {
                        d = d.diff_lambda(i);
                    }
                }
                derivs.insert(alpha.clone(), d);
            }
            let d = &derivs[alpha];
            let mut term: Option<LambdaSeries> = None;
            for (e, cc) in c.num().terms() {
                let k = QExpPoly::monomial(cc / &den_c, e[0] as i32 - xpow as i32, 0);
                let piece = d.mul_lambda_monomial(&e[1..]).scale(&k);
                term = Some(match term {
                    None => piece,
                    Some(t) => t.add(&piece)?,
                });
            }
            if let Some(t) = term {
                out = Some(match out {
                    None => t,
                    Some(o) => o.add(&t)?,
                });
            }
        }
        Ok(out.unwrap_or_else(|| LambdaSeries::zero(self.m, s.order())))
    }

    /// Applies the operator to r·exp(Σ a_v v) and returns the rational factor
    /// of the result (the exponential is unchanged).
    pub fn apply_exp_rational(&self, r: &QRatFunc, a: &[Rational]) -> QRatFunc {
        let mut out = QRatFunc::zero(self.m + 1);
        let mut cache: HashMap<Vec<u32>, QRatFunc> = HashMap::new();
        for (alpha, c) in &self.terms {
            let d = cache
                .entry(alpha.clone())
                .or_insert_with(|| {
                    let mut f = r.clone();
                    for (v, &k) in alpha.iter().enumerate() {
                        for _ in 0..k {
                            let fa = if a[v].is_zero() { QRatFunc::zero(self.m + 1) } else { f.scale(&a[v]) };
                            f = &f.derivative(v) + &fa;
                        }
                    }
                    f
                })
                .clone();
            out = &out + &(c * &d);
        }
        out
    }

    pub fn fmt_with(&self) -> String {
        let mut names = vec!["x".to_string()];
        names.extend((1..=self.m).map(|i| format!("l{i}")));
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let mut d = String::new();
                for (v, &k) in a.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => d.push_str(&format!("*D{}", refs[v])),
                        _ => d.push_str(&format!("*D{}^{k}", refs[v])),
                    }
                }
                format!("({}){d}", c.fmt_with(&refs))
            })
            .collect();
        parts.join(" + ")
    }
}

/// Splits a polynomial into x^a · rest with rest free of a common x power.
fn split_x_monomial(p: &QPoly) -> (u32, QPoly) {
    let g = p.monomial_gcd();
    let mut ex = vec![0; g.len()];
    ex[0] = g[0];
    let rest = p.div_monomial(&ex);
    if rest.terms().all(|(e, _)| e[0] == 0) {
        (g[0], rest)
    } else {
        (0, p.clone())
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with())
    }
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        self.scale_left(&QRatFunc::constant(self.m + 1, q(-1)))
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        self + &(-rhs)
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        self.compose(rhs)
    }
}

macro_rules! owned_op {
    ($tr:ident, $f:ident) => {
        impl $tr for DiffOperator {
            type Output = DiffOperator;
            fn $f(self, rhs: DiffOperator) -> DiffOperator {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl Neg for DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        -&self
    }
}
