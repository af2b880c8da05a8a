//! Univariate operators over ℚ(y) and their least common left multiple,
//! found by linear algebra on the remainders of ∂^k.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::{QPoly, QRatFunc, Rational};

use super::DiffOperator;

/// Dense polynomial over ℚ, coefficients from degree 0 up, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn y() -> Self {
        Self::new(vec![q(0), q(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|v| -v).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, v)| v * q(i as i64)).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dd = d.degree().unwrap();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.lead() / d.lead();
            quot[rd - dd] = c.clone();
            let mut shift = vec![Rational::zero(); rd - dd];
            shift.extend(d.0.iter().map(|v| v * &c));
            rem = rem.sub(&UPoly::new(shift));
        }
        (UPoly::new(quot), rem)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.lead()))
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * y + c)
    }

    fn from_mpoly(p: &QPoly, var: usize) -> Result<Self> {
        let mut out = vec![];
        for (e, c) in p.terms() {
            if e.iter().enumerate().any(|(i, &d)| i != var && d != 0) {
                return Err(Error::Precondition("coefficient depends on more than one variable".into()));
            }
            let k = e[var] as usize;
            if out.len() <= k {
                out.resize(k + 1, Rational::zero());
            }
            out[k] = c.clone();
        }
        Ok(UPoly::new(out))
    }
}

/// Reduced fraction of univariate polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct URat {
    num: UPoly,
    den: UPoly,
}

impl URat {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = UPoly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let l = d.lead();
        let inv = Rational::one() / l;
        URat { num: n.scale(&inv), den: d.scale(&inv) }
    }

    pub fn zero() -> Self {
        URat { num: UPoly::zero(), den: UPoly::constant(q(1)) }
    }

    pub fn from_poly(p: UPoly) -> Self {
        URat { num: p, den: UPoly::constant(q(1)) }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        URat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        self.num.eval(y) / self.den.eval(y)
    }

    /// From a multivariate rational function that depends on `var` only.
    pub fn from_ratfunc(r: &QRatFunc, var: usize) -> Result<Self> {
        Ok(Self::new(UPoly::from_mpoly(r.num(), var)?, UPoly::from_mpoly(r.den(), var)?))
    }
}

/// Σ_k a_k(y) ∂^k with coefficients in ℚ(y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UOperator(Vec<URat>);

impl UOperator {
    pub fn new(mut c: Vec<URat>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        UOperator(c)
    }

    pub fn coeffs(&self) -> &[URat] {
        &self.0
    }

    pub fn order(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => UOperator(self.0.iter().map(|c| c.div(l)).collect()),
        }
    }

    /// Operator in variable `var` of a DiffOperator whose coefficients depend
    /// on that variable only (specialize the others first).
    pub fn from_diff_operator(op: &DiffOperator, var: usize) -> Result<Self> {
        let mut out: Vec<URat> = Vec::new();
        for (alpha, c) in op.terms() {
            if alpha.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return Err(Error::Precondition("operator differentiates in another variable".into()));
            }
            let k = alpha[var] as usize;
            if out.len() <= k {
                out.resize(k + 1, URat::zero());
            }
            out[k] = out[k].add(&URat::from_ratfunc(c, var)?);
        }
        Ok(UOperator::new(out))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = URat::zero();
        UOperator::new((0..n).map(|i| self.0.get(i).unwrap_or(&z).add(o.0.get(i).unwrap_or(&z))).collect())
    }

    /// self ∘ o.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = UOperator::new(vec![]);
        for (d, a) in self.0.iter().enumerate() {
            // a ∂^d b_j ∂^j = a Σ_s C(d,s) b_j^{(s)} ∂^{d−s+j}
            for (j, b) in o.0.iter().enumerate() {
                let mut bd = b.clone();
                let mut binom = q(1);
                for s in 0..=d {
                    if s > 0 {
                        bd = bd.derivative();
                        binom = binom * q((d - s + 1) as i64) / q(s as i64);
                    }
                    let mut v = vec![URat::zero(); d - s + j + 1];
                    v[d - s + j] = a.mul(&bd).mul(&URat::constant(binom.clone()));
                    out = out.add(&UOperator::new(v));
                }
            }
        }
        out
    }

    /// Remainder of right division: self = Q ∘ d + R with ord R < ord d.
    pub fn right_rem(&self, d: &Self) -> Self {
        let dord = d.order().expect("division by the zero operator");
        let dm = d.monic();
        let mut r = self.clone();
        while let Some(ro) = r.order() {
            if ro < dord {
                break;
            }
            let mut lead = vec![URat::zero(); ro - dord + 1];
            lead[ro - dord] = r.0[ro].clone();
            let sub = UOperator::new(lead).compose(&dm);
            r = r.add(&UOperator(sub.0.iter().map(|c| c.neg()).collect()));
        }
        r
    }

    /// Applies to a function known through its derivatives f, f′, f″, … at y.
    pub fn eval_on(&self, y: &Rational, derivs: &[Rational]) -> Rational {
        self.0.iter().zip(derivs).fold(Rational::zero(), |acc, (a, d)| acc + a.eval(y) * d)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*y"),
                _ => format!("{c}*y^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Display for UOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("(({})/({}))*D^{k}", c.num, c.den))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Monic least common left multiple. The remainders of ∂^k modulo each
/// operator are stacked until they become linearly dependent over ℚ(y).
pub fn lclm(ops: &[UOperator]) -> Result<UOperator> {
    let ops: Vec<UOperator> = ops.iter().map(|o| o.monic()).collect();
    if ops.iter().any(|o| o.order().is_none()) {
        return Err(Error::InvalidParams("LCLM of the zero operator".into()));
    }
    let dims: Vec<usize> = ops.iter().map(|o| o.order().unwrap()).collect();
    let total: usize = dims.iter().sum();
    // state[i] = coefficients of ∂^k mod ops[i] in the basis 1, ∂, …
    let mut state: Vec<Vec<URat>> = dims
        .iter()
        .map(|&r| {
            let mut v = vec![URat::zero(); r];
            if r > 0 {
                v[0] = URat::constant(q(1));
            }
            v
        })
        .collect();
    let mut columns: Vec<Vec<URat>> = Vec::new();
    for k in 0..=total {
        let col: Vec<URat> = state.iter().flatten().cloned().collect();
        if let Some(c) = solve_dependency(&columns, &col) {
            let mut coeffs: Vec<URat> = c.into_iter().map(|v| v.neg()).collect();
            coeffs.push(URat::constant(q(1)));
            return Ok(UOperator::new(coeffs));
        }
        columns.push(col);
        if k == total {
            break;
        }
        for (i, op) in ops.iter().enumerate() {
            let r = dims[i];
            let cur = &state[i];
            // ∂·Σ b_j ∂^j = Σ b_j′ ∂^j + Σ b_j ∂^{j+1}, then ∂^r ↦ −Σ a_j ∂^j
            let mut next: Vec<URat> = cur.iter().map(|b| b.derivative()).collect();
            for j in 0..r {
                if j + 1 < r {
                    next[j + 1] = next[j + 1].add(&cur[j]);
                } else {
                    for (t, a) in op.0.iter().take(r).enumerate() {
                        next[t] = next[t].sub(&cur[j].mul(a));
                    }
                }
            }
            state[i] = next;
        }
    }
    Err(Error::NonConvergence { what: "LCLM dependency search", iterations: total + 1 })
}

/// Finds c with Σ c_k columns[k] = target, if one exists.
fn solve_dependency(columns: &[Vec<URat>], target: &[URat]) -> Option<Vec<URat>> {
    let rows = target.len();
    let ncol = columns.len();
    if ncol == 0 {
        return if target.iter().all(|v| v.is_zero()) { Some(vec![]) } else { None };
    }
    let mut a: Vec<Vec<URat>> =
        (0..rows).map(|r| (0..ncol).map(|c| columns[c][r].clone()).chain([target[r].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncol {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = URat::constant(q(1)).div(&a[row][col]);
        for c in col..=ncol {
            a[row][c] = a[row][c].mul(&inv);
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=ncol {
                    let v = a[row][c].mul(&f);
                    a[r][c] = a[r][c].sub(&v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..rows).any(|r| !a[r][ncol].is_zero()) {
        return None;
    }
    let mut sol = vec![URat::zero(); ncol];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][ncol].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(c: &[i64]) -> UOperator {
        UOperator::new(c.iter().map(|&v| URat::constant(q(v))).collect())
    }

    #[test]
    fn polynomial_gcd() {
        // (y−1)(y+2) and (y−1)(y−3)
        let a = UPoly::new(vec![q(-2), q(1), q(1)]);
        let b = UPoly::new(vec![q(3), q(-4), q(1)]);
        assert_eq!(UPoly::gcd(&a, &b), UPoly::new(vec![q(-1), q(1)]));
        let r = URat::new(a, b);
        assert_eq!(r.den().degree(), Some(1));
    }

    #[test]
    fn lclm_idempotent() {
        let d1 = op(&[-1, 1]);
        assert_eq!(lclm(&[d1.clone(), d1.clone()]).unwrap(), d1);
    }

    #[test]
    fn lclm_of_d_and_d_minus_one() {
        let l = lclm(&[op(&[0, 1]), op(&[-1, 1])]).unwrap();
        assert_eq!(l, op(&[0, -1, 1]));
        // kills 1 and e^y (derivatives 1, 1, 1 at any y)
        let y = q(3);
        assert!(l.eval_on(&y, &[q(1), q(0), q(0)]).is_zero());
        assert!(l.eval_on(&y, &[q(1), q(1), q(1)]).is_zero());
    }

    #[test]
    fn lclm_is_left_multiple() {
        // y∂² + 2∂ − 1 and ∂ − y
        let y = URat::from_poly(UPoly::y());
        let a = UOperator::new(vec![URat::constant(q(-1)), URat::constant(q(2)), y.clone()]);
        let b = UOperator::new(vec![y.neg(), URat::constant(q(1))]);
        let l = lclm(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(l.order(), Some(3));
        assert!(l.right_rem(&a).order().is_none());
        assert!(l.right_rem(&b).order().is_none());
    }

    #[test]
    fn lclm_of_p_and_q_is_the_order_five_operator() {
        use crate::operators::{build_p, build_q, PrintedOperator};
        for (n, x) in [(4i64, q(2)), (5, crate::scalar::qf(1, 2)), (3, q(3)), (6, q(-1))] {
            let at = |o: &DiffOperator| UOperator::from_diff_operator(&o.substitute(0, &x), 1).unwrap();
            let l = lclm(&[at(&build_p(2, n - 2, 1)), at(&build_q(2, n, n - 2, 1))]).unwrap();
            let five = at(&PrintedOperator::Order5.build(n as u32)).monic();
            assert_eq!(l.order(), Some(5), "n={n}");
            assert_eq!(l.monic(), five, "n={n} x={x}");
        }
    }
}
