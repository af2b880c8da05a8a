//! The ring ℚ[x, x⁻¹, e^{−x}] with exact coefficients.
//!
//! A term `c·x^i·E^j` stands for `c·x^i·e^{−jx}`. Sums are kept in a sorted
//! map with zero coefficients removed, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExpPoly<C> {
    terms: BTreeMap<(i32, u32), C>,
}

impl<C: Coeff> ExpPoly<C> {
    pub fn zero() -> Self {
        ExpPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c·x^i·e^{−jx}`.
    pub fn monomial(c: C, i: i32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        ExpPoly { terms }
    }

    pub fn x_pow(i: i32) -> Self {
        Self::monomial(C::one(), i, 0)
    }

    pub fn e_pow(j: u32) -> Self {
        Self::monomial(C::one(), 0, j)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, &C)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: i32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, c: C, i: i32, j: u32) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(i, j)) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&(i, j));
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        if c.is_zero() {
            return;
        }
        for (&(i, j), v) in &other.terms {
            self.add_term(v.clone() * c.clone(), i, j);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul_x_pow(&self, k: i32) -> Self {
        ExpPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i + k, j), c.clone())).collect() }
    }

    pub fn mul_e_pow(&self, k: u32) -> Self {
        ExpPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i, j + k), c.clone())).collect() }
    }

    pub fn min_x_power(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_e_power(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// d/dx, using d(x^i E^j) = i x^{i−1} E^j − j x^i E^j.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            if i != 0 {
                out.add_term(c.clone() * C::from_i64(i as i64), i - 1, j);
            }
            if j != 0 {
                out.add_term(-(c.clone() * C::from_i64(j as i64)), i, j);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ExpPoly<D> {
        let mut out = ExpPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(f(c), i, j);
        }
        out
    }

    /// Plain floating-point evaluation; subject to cancellation.
    pub fn eval_naive(&self, x0: f64) -> f64 {
        let e = (-x0).exp();
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.approx_f64() * x0.powi(i) * e.powi(j as i32))
            .sum()
    }
}

/// Lower incomplete gamma γ(a, x) for integer a ≥ 1 as an element of the
/// ring, from γ(1,x) = 1 − e^{−x} and γ(a+1,x) = a·γ(a,x) − x^a e^{−x}.
pub fn incomplete_gamma_exact<C: Coeff>(a: i64) -> Result<ExpPoly<C>> {
    if a < 1 {
        return Err(Error::Domain(format!("incomplete gamma needs a positive integer, got {a}")));
    }
    let mut g = ExpPoly::one();
    g.add_term(-C::one(), 0, 1);
    for k in 1..a {
        let mut next = g.scale(&C::from_i64(k));
        next.add_term(-C::one(), k as i32, 1);
        g = next;
    }
    Ok(g)
}

impl<C: Coeff> Add for &ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn add(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        let (mut big, small) =
            if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (&(i, j), c) in &small.terms {
            big.add_term(c.clone(), i, j);
        }
        big
    }
}

impl<C: Coeff> Sub for &ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn sub(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(-c.clone(), i, j);
        }
        out
    }
}

impl<C: Coeff> Mul for &ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn mul(self, rhs: &ExpPoly<C>) -> ExpPoly<C> {
        let mut out = ExpPoly::zero();
        for (&(ia, ja), ca) in &self.terms {
            for (&(ib, jb), cb) in &rhs.terms {
                out.add_term(ca.clone() * cb.clone(), ia + ib, ja + jb);
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn neg(self) -> ExpPoly<C> {
        ExpPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for ExpPoly<C> {
            type Output = ExpPoly<C>;
            fn $m(self, rhs: ExpPoly<C>) -> ExpPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Coeff> Neg for ExpPoly<C> {
    type Output = ExpPoly<C>;
    fn neg(self) -> ExpPoly<C> {
        -&self
    }
}

impl<C: Coeff> std::iter::Sum for ExpPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc = ExpPoly::zero();
        for p in iter {
            for (&(i, j), c) in &p.terms {
                acc.add_term(c.clone(), i, j);
            }
        }
        acc
    }
}

/// Bits of e^{x0} kept by the evaluator. Generous on purpose: coefficient
/// sums of high-order series terms cancel through a couple of hundred bits
/// at small x.
const EXP_BITS: u64 = 448;

/// Evaluates exact ring elements at a fixed point with controlled error.
///
/// x0 is taken as the exact dyadic rational of its f64 value and e^{x0} is
/// computed as a fixed-point integer with `EXP_BITS` fractional bits. Every
/// term is then brought to a common integer denominator and summed exactly,
/// so the only rounding is in e^{x0} and the final conversion to f64.
pub struct ExpPolyEvaluator {
    x0: f64,
    p: BigInt,
    q: BigInt,
    a: BigInt,
}

impl ExpPolyEvaluator {
    pub fn new(x0: f64) -> Result<Self> {
        if !x0.is_finite() || x0 < 0.0 {
            return Err(Error::Domain(format!("exact evaluation needs finite x >= 0, got {x0}")));
        }
        let r = BigRational::from_float(x0).unwrap();
        let a = exp_fixed(&r, EXP_BITS);
        Ok(ExpPolyEvaluator { x0, p: r.numer().clone(), q: r.denom().clone(), a })
    }

    pub fn x(&self) -> f64 {
        self.x0
    }

    pub fn eval(&self, poly: &ExpPoly<BigRational>) -> Result<f64> {
        if poly.is_zero() {
            return Ok(0.0);
        }
        let imin = poly.min_x_power().unwrap();
        if imin < 0 && self.p.is_zero() {
            return Err(Error::Domain("negative power of x evaluated at 0".into()));
        }
        let imax = poly.terms.keys().map(|k| k.0).max().unwrap().max(0);
        let jmax = poly.max_e_power().unwrap();
        let s = (-imin).max(0);
        let mut lcm = BigInt::one();
        for c in poly.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut sum = BigInt::zero();
        for (&(i, j), c) in &poly.terms {
            let mut t = c.numer() * (&lcm / c.denom());
            t *= num_traits::pow(self.p.clone(), (i + s) as usize);
            t *= num_traits::pow(self.q.clone(), (imax - i) as usize);
            t <<= EXP_BITS * j as u64;
            t *= num_traits::pow(self.a.clone(), (jmax - j) as usize);
            sum += t;
        }
        let mut den = lcm;
        den *= num_traits::pow(self.p.clone(), s as usize);
        den *= num_traits::pow(self.q.clone(), imax as usize);
        den *= num_traits::pow(self.a.clone(), jmax as usize);
        Ok(ratio_to_f64(&sum, &den))
    }
}

/// Rounds `e^r·2^bits` to an integer for r ≥ 0.
fn exp_fixed(r: &BigRational, bits: u64) -> BigInt {
    let ceil = r.ceil().to_integer();
    let s = ceil.bits() + 8;
    let w = bits + s + 64;
    let rf: BigInt = (r.numer() << (w - s)) / r.denom();
    let one = BigInt::one() << w;
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = (&term * &rf) >> w;
        term /= k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..s {
        sum = (&sum * &sum) >> w;
    }
    sum >> (w - bits)
}

fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let (n, d) = (num.abs(), den.abs());
    // scale so the integer quotient carries 64 significant bits
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let qt = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    let v = qt.to_f64().unwrap() * 2f64.powi(-shift as i32);
    let v = if v.is_finite() && v != 0.0 {
        v
    } else {
        // exponent out of the single powi range
        qt.to_f64().unwrap() * 2f64.powf(-shift as f64)
    };
    if neg {
        -v
    } else {
        v
    }
}

impl ExpPoly<BigRational> {
    /// Evaluates with the exact-sum scheme of [`ExpPolyEvaluator`].
    pub fn eval(&self, x0: f64) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        if x0 == 0.0 {
            if self.min_x_power().unwrap() < 0 {
                return Err(Error::Domain("negative power of x evaluated at 0".into()));
            }
            return Ok(self.terms().filter(|t| t.0 == 0).map(|t| t.2.approx_f64()).sum());
        }
        ExpPolyEvaluator::new(x0)?.eval(self)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for ExpPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(&(i, j), c)| format!("{c}*x^{i}*E^{j}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for ExpPoly<BigRational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for part in s.split(" + ") {
            let pieces: Vec<&str> = part.trim().split('*').collect();
            let bad = || Error::Parse(format!("bad term '{part}'"));
            if pieces.len() != 3 {
                return Err(bad());
            }
            let c: BigRational = pieces[0].parse().map_err(|_| bad())?;
            let i: i32 = pieces[1].strip_prefix("x^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let j: u32 = pieces[2].strip_prefix("E^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            out.add_term(c, i, j);
        }
        Ok(out)
    }
}
