//! Closed-form y-functions built from 0F1(ν; xy) and the two integrals
//!
//!   Head(y) = e^{y} ∫₀^y e^{−t} 0F1(n+1; xt) dt,
//!   Tail(y) = e^{y} ∫_y^∞ e^{−t} 0F1(n+1; xt) dt,
//!
//! with polynomial coefficients in (x, y). The class is closed under ∂/∂y:
//! ∂ 0F1(ν; xy) = (x/ν) 0F1(ν+1; xy), ∂Head = Head + 0F1(n+1; xy) and
//! ∂Tail = Tail − 0F1(n+1; xy).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exp_poly::incomplete_gamma_exact;
use crate::scalar::{q, qf};
use crate::special_fn::{hpg01, CompensatedSum};
use crate::{QExpPoly, QPoly, Rational};

const X: usize = 0;
const Y: usize = 1;
const MAX_TERMS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormAtom {
    Hyp(u32),
    Head,
    Tail,
}

/// Σ p_a(x, y)·a(x, y) over atoms a; `n` fixes the 0F1(n+1) kernel of Head
/// and Tail.
#[derive(Clone, Debug, PartialEq)]
pub struct HolForm {
    n: u32,
    terms: BTreeMap<FormAtom, QPoly>,
}

/// x and y as polynomials in the (x, y) ring.
pub fn px() -> QPoly {
    QPoly::var(2, X)
}

pub fn py() -> QPoly {
    QPoly::var(2, Y)
}

pub fn pc(v: i64) -> QPoly {
    QPoly::constant(2, q(v))
}

impl HolForm {
    pub fn zero(n: u32) -> Self {
        HolForm { n, terms: BTreeMap::new() }
    }

    pub fn atom(n: u32, a: FormAtom, p: QPoly) -> Self {
        let mut f = Self::zero(n);
        f.add_term(a, p);
        f
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormAtom, &QPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: FormAtom, p: QPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(a).or_insert_with(|| QPoly::zero(2));
        *e = &*e + &p;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    fn same_kernel(&self, o: &Self) {
        assert_eq!(self.n, o.n, "forms over different 0F1 kernels");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_kernel(o);
        let mut out = self.clone();
        for (a, p) in &o.terms {
            out.add_term(*a, p.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.mul_poly(&pc(-1)))
    }

    pub fn mul_poly(&self, p: &QPoly) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(*a, c * p);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.n);
        let kernel = FormAtom::Hyp(self.n + 1);
        for (a, p) in &self.terms {
            out.add_term(*a, p.derivative(Y));
            match *a {
                FormAtom::Hyp(nu) => out.add_term(FormAtom::Hyp(nu + 1), (&px() * p).scale(&qf(1, nu as i64))),
                FormAtom::Head => {
                    out.add_term(FormAtom::Head, p.clone());
                    out.add_term(kernel, p.clone());
                }
                FormAtom::Tail => {
                    out.add_term(FormAtom::Tail, p.clone());
                    out.add_term(kernel, -p);
                }
            }
        }
        out
    }

    /// Σ_k c_k ∂^k applied to the form, for an operator given as (c_k, k).
    pub fn apply(&self, op: &[(QPoly, u32)]) -> Self {
        let top = op.iter().map(|(_, k)| *k).max().unwrap_or(0);
        let mut ders = vec![self.clone()];
        for _ in 0..top {
            let d = ders.last().unwrap().derivative();
            ders.push(d);
        }
        let mut out = Self::zero(self.n);
        for (c, k) in op {
            out = out.add(&ders[*k as usize].mul_poly(c));
        }
        out
    }

    /// e^{−x}·form at (x, y), and Σ|e^{−x}·term| as a scale for residuals.
    pub fn eval_scaled(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if x < 0.0 || y < 0.0 {
            return Err(Error::Domain(format!("form needs x, y >= 0, got ({x}, {y})")));
        }
        let ex = (-x).exp();
        let mut acc = CompensatedSum::new();
        let mut mag = 0.0;
        for (a, p) in &self.terms {
            let c = p.eval_f64(&[x, y]);
            if c == 0.0 {
                continue;
            }
            let v = match *a {
                FormAtom::Hyp(nu) => hpg01(nu as f64, x * y)? * ex,
                FormAtom::Head => head_value(self.n, x, y)? * ex,
                FormAtom::Tail => tail_value(self.n, x, y)? * ex,
            };
            acc.add(c * v);
            mag += (c * v).abs();
        }
        Ok((acc.value(), mag))
    }

    /// The form itself at (x, y).
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.eval_scaled(x, y)?.0 * x.exp())
    }

    /// Exact coefficients of y^0..y^order of e^{−x}·form, in the ring.
    pub fn y_series(&self, order: usize) -> Result<Vec<QExpPoly>> {
        let mut out = vec![QExpPoly::zero(); order + 1];
        let mut cache: BTreeMap<FormAtom, Vec<QExpPoly>> = BTreeMap::new();
        for (a, p) in &self.terms {
            if !cache.contains_key(a) {
                cache.insert(*a, atom_series(self.n, *a, order)?);
            }
            let s = &cache[a];
            for (e, c) in p.terms() {
                let (i, j) = (e[X] as i32, e[Y] as usize);
                for (k, sk) in s.iter().enumerate() {
                    if k + j > order {
                        break;
                    }
                    out[k + j].add_scaled(&sk.mul_x_pow(i), c);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for HolForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, p)| {
                let atom = match a {
                    FormAtom::Hyp(nu) => format!("0F1({nu};xy)"),
                    FormAtom::Head => "Head".to_string(),
                    FormAtom::Tail => "Tail".to_string(),
                };
                format!("({})·{}", p.fmt_with(&names), atom)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(q(1), |a, v| a * q(v))
}

// e^{−x}·atom, coefficient of y^i for i ≤ order.
fn atom_series(n: u32, a: FormAtom, order: usize) -> Result<Vec<QExpPoly>> {
    let head = |out: &mut Vec<QExpPoly>| {
        // (1/i!) Σ_{k<i} x^k/(n+1)_k
        let mut inner = QExpPoly::zero();
        let mut w = q(1);
        for i in 0..=order {
            if i > 0 {
                let k = i - 1;
                inner.add_term(w.clone(), k as i32, 1);
                w = w * q(1) / q(n as i64 + 1 + k as i64);
            }
            out.push(inner.scale(&(q(1) / factorial(i))));
        }
    };
    let mut out = Vec::with_capacity(order + 1);
    match a {
        FormAtom::Hyp(nu) => {
            let mut c = q(1);
            for i in 0..=order {
                out.push(QExpPoly::monomial(c.clone(), i as i32, 1));
                c = c / (q(nu as i64 + i as i64) * q(i as i64 + 1));
            }
        }
        FormAtom::Head => head(&mut out),
        FormAtom::Tail => {
            // e^{−x}·Tail(0) = n x^{−n} γ(n, x)
            let e0 = incomplete_gamma_exact::<Rational>(n as i64)?.mul_x_pow(-(n as i32)).scale(&q(n as i64));
            let mut h = Vec::new();
            head(&mut h);
            for (i, hi) in h.iter().enumerate() {
                out.push(&e0.scale(&(q(1) / factorial(i))) - hi);
            }
        }
    }
    Ok(out)
}

/// Head(y) = Σ_{i≥1} y^i/i! Σ_{k<i} x^k/(n+1)_k; every term is non-negative.
pub fn head_value(n: u32, x: f64, y: f64) -> Result<f64> {
    let mut inner = 0.0;
    let mut w = 1.0;
    let mut p = 1.0;
    let mut acc = CompensatedSum::new();
    for i in 1..MAX_TERMS {
        let k = (i - 1) as f64;
        inner += w;
        w *= x / (n as f64 + 1.0 + k);
        p *= y / i as f64;
        let t = p * inner;
        acc.add(t);
        if (t <= 1e-17 * acc.value() || t == 0.0) && (i as f64) > y {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { what: "Head integral series", iterations: MAX_TERMS })
}

/// Tail(y) = Σ_k x^k/(n+1)_k · Σ_{i≤k} y^i/i!; every term is non-negative.
/// Tail(0) = n x^{−n} e^{x} γ(n, x).
pub fn tail_value(n: u32, x: f64, y: f64) -> Result<f64> {
    let mut ek = 0.0;
    let mut p = 1.0;
    let mut w = 1.0;
    let mut acc = CompensatedSum::new();
    for k in 0..MAX_TERMS {
        if k > 0 {
            p *= y / k as f64;
            w *= x / (n as f64 + k as f64);
        }
        ek += p;
        let t = w * ek;
        acc.add(t);
        if (t <= 1e-17 * acc.value() || t == 0.0) && (k as f64) > x {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { what: "Tail integral series", iterations: MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use crate::ExpPolyEvaluator;

    fn num_tail(n: u32, x: f64, y: f64) -> f64 {
        // the integrand decays like e^{−t+2√(xt)}; 400 + y is far past it
        let f = |t: f64| (-t).exp() * hpg01(n as f64 + 1.0, x * t).unwrap();
        let v = integrate(f, y, y + 400.0, 1e-15, 1e-14).unwrap().value;
        v * y.exp()
    }

    #[test]
    fn tail_and_head_match_quadrature() {
        for &(n, x, y) in &[(2u32, 1.0, 0.5), (4, 3.0, 2.0), (3, 0.5, 4.0), (5, 10.0, 1.0)] {
            let t = tail_value(n, x, y).unwrap();
            assert!((t - num_tail(n, x, y)).abs() < 1e-11 * t, "tail {n} {x} {y}");
            let h = head_value(n, x, y).unwrap();
            let direct = y.exp()
                * integrate(|t: f64| (-t).exp() * hpg01(n as f64 + 1.0, x * t).unwrap(), 0.0, y, 1e-16, 1e-14)
                    .unwrap()
                    .value;
            assert!((h - direct).abs() < 1e-12 * h.max(1.0), "head {n} {x} {y}");
        }
    }

    #[test]
    fn head_plus_tail_is_exponential() {
        for &(n, x, y) in &[(2u32, 1.0, 0.5), (6, 7.0, 3.0)] {
            let s = head_value(n, x, y).unwrap() + tail_value(n, x, y).unwrap();
            let e0 = tail_value(n, x, 0.0).unwrap();
            assert!((s - e0 * y.exp()).abs() < 1e-12 * s);
        }
    }

    #[test]
    fn derivative_rules_numerically() {
        let n = 3;
        for a in [FormAtom::Hyp(3), FormAtom::Head, FormAtom::Tail] {
            let f = HolForm::atom(n, a, &py() * &py() + pc(1));
            let d = f.derivative();
            let (x, y, h) = (1.5, 0.8, 1e-4);
            let fd = (f.eval(x, y + h).unwrap() - f.eval(x, y - h).unwrap()) / (2.0 * h);
            let dv = d.eval(x, y).unwrap();
            assert!((fd - dv).abs() < 1e-7 * dv.abs().max(1.0), "{a:?}: {fd} vs {dv}");
        }
    }

    #[test]
    fn series_matches_values() {
        let n = 2;
        let f = HolForm::atom(n, FormAtom::Tail, &px() - &py()).add(&HolForm::atom(n, FormAtom::Hyp(2), pc(3)));
        let s = f.y_series(40).unwrap();
        let (x, y): (f64, f64) = (1.2, 0.3);
        let ev = ExpPolyEvaluator::new(x).unwrap();
        let sum: f64 = s.iter().enumerate().map(|(i, c)| ev.eval(c).unwrap() * y.powi(i as i32)).sum();
        let direct = f.eval_scaled(x, y).unwrap().0;
        assert!((sum - direct).abs() < 1e-13, "{sum} vs {direct}");
    }

    #[test]
    fn series_commutes_with_derivative() {
        let f = HolForm::atom(4, FormAtom::Head, &py() - &px()).add(&HolForm::atom(4, FormAtom::Hyp(5), py()));
        let s = f.y_series(10).unwrap();
        let ds = f.derivative().y_series(9).unwrap();
        for i in 0..9 {
            assert_eq!(ds[i], s[i + 1].scale(&q(i as i64 + 1)), "coefficient {i}");
        }
    }
}
