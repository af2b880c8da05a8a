//! The kernel integrals H^{k,ℓ}_n(x,y) = ∫₀ˣ e^{−t} t^k (x−t)^ℓ 0F1(n; ty) dt,
//! their recurrences and the reduction to a three-element basis.

mod combo;
mod recurrences;
mod reduce;

pub use combo::{Atom, HCombo, Relation};
pub use recurrences::{relation_grid, rec_lemma1, rec_lemma2, rec_lemma3, rec_lemma45, Lemma1, Lemma2, Lemma3, Lemma45};
pub use reduce::{basis_coefficients, reduce_to_basis, reduce_to_basis_by, ReductionRoute};

use std::fmt;

use crate::error::{Error, Result};
use crate::exp_poly::incomplete_gamma_exact;
use crate::quad::integrate_with_breaks;
use crate::scalar::{q, Real};
use crate::special_fn::{hpg01, incomplete_gamma, pochhammer, CompensatedSum};
use crate::QExpPoly;

/// Indices of H^{k,ℓ}_n: power k of t, power ℓ of (x − t), 0F1 parameter n.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HIndex {
    pub k: u32,
    pub l: u32,
    pub n: u32,
}

impl HIndex {
    pub fn new(k: u32, n: u32) -> Self {
        HIndex { k, l: 0, n }
    }

    pub fn with_l(k: u32, l: u32, n: u32) -> Self {
        HIndex { k, l, n }
    }
}

impl fmt::Display for HIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l == 0 {
            write!(f, "H^{}_{}", self.k, self.n)
        } else {
            write!(f, "H^{{{},{}}}_{}", self.k, self.l, self.n)
        }
    }
}

fn check_index(idx: HIndex) -> Result<()> {
    if idx.n == 0 {
        return Err(Error::InvalidParams("H-integral needs n >= 1".into()));
    }
    Ok(())
}

/// H^{k,ℓ}_n(x, y) by adaptive Gauss–Kronrod quadrature, split at x/2 when
/// ℓ > 0. Target error 1e−13·(1 + |H|).
pub fn h_eval<T: Real>(idx: HIndex, x: T, y: T) -> Result<T> {
    check_index(idx)?;
    if x < T::zero() || y < T::zero() {
        return Err(Error::Domain(format!("H-integral needs x, y >= 0, got ({x}, {y})")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let n = T::from_usize_(idx.n as usize);
    let f = |t: T| -> T {
        let w = (-t).exp() * t.powi(idx.k as i32) * (x - t).powi(idx.l as i32);
        if w == T::zero() {
            return w;
        }
        match hpg01(n, t * y) {
            Ok(v) => w * v,
            Err(_) => T::nan(),
        }
    };
    let eps = T::epsilon().max(T::lit(1e-13));
    let pts: Vec<T> = if idx.l > 0 {
        vec![T::zero(), x / T::lit(2.0), x]
    } else {
        let top = x.min(negligible_beyond(idx.k, y));
        let mid = T::lit(2.0) * (T::from_usize_(idx.k as usize) + y) + T::lit(50.0);
        if mid < top {
            vec![T::zero(), mid, top]
        } else {
            vec![T::zero(), top]
        }
    };
    let first = integrate_with_breaks(&f, &pts, eps, eps)?;
    let target = eps * (T::one() + first.value.abs());
    if first.abs_err <= target {
        return Ok(first.value);
    }
    Ok(integrate_with_breaks(&f, &pts, target, T::zero())?.value)
}

/// t past which t^k e^{−t} 0F1(n; ty) < e^{−700}: for t ≥ 16y the bound
/// 0F1 ≤ e^{2√(ty)} leaves at most t^k e^{−t/2}.
fn negligible_beyond<T: Real>(k: u32, y: T) -> T {
    let k = T::from_usize_(k as usize);
    let mut t = T::lit(16.0) * y + T::lit(1500.0);
    while t / T::lit(2.0) - k * t.ln() < T::lit(700.0) {
        t = t * T::lit(1.5);
    }
    t
}

/// H^k_n(x, y) (ℓ = 0) from the term-wise series Σ_j y^j γ(k+j+1, x)/((n)_j j!).
pub fn h_eval_series<T: Real>(idx: HIndex, x: T, y: T) -> Result<T> {
    check_index(idx)?;
    if idx.l != 0 {
        return h_eval(idx, x, y);
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let n = T::from_usize_(idx.n as usize);
    let k1 = T::from_usize_(idx.k as usize + 1);
    let mut w = T::one();
    let mut acc = CompensatedSum::new();
    acc.add(incomplete_gamma(k1, x)?);
    let lim = 10_000;
    for j in 0..lim {
        let jf = T::from_usize_(j);
        // upward γ recurrence is unstable once a > x, so each γ is direct
        let g = incomplete_gamma(k1 + jf + T::one(), x)?;
        w = w * y / ((n + jf) * (jf + T::one()));
        let term = w * g;
        acc.add(term);
        if term.abs() <= T::lit(1e-17) * acc.value().abs() && jf > (x * y).sqrt() {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { what: "H-integral series", iterations: lim })
}

/// Exact y-series coefficients of H^{k,ℓ}_n(x, y): the coefficient of y^j is
/// ∫₀ˣ e^{−t} t^{k+j} (x−t)^ℓ dt / ((n)_j j!), a γ-combination in the ring.
pub fn h_series(idx: HIndex, order: usize) -> Result<Vec<QExpPoly>> {
    check_index(idx)?;
    let top = idx.k as i64 + order as i64 + idx.l as i64 + 1;
    let gammas = gamma_table(top)?;
    let mut out = Vec::with_capacity(order + 1);
    let mut denom = q(1);
    for j in 0..=order {
        if j > 0 {
            denom = denom * q((idx.n as i64 + j as i64 - 1) * j as i64);
        }
        let mut c = QExpPoly::zero();
        // (x−t)^ℓ = Σ_i C(ℓ,i) x^{ℓ−i} (−t)^i
        let mut binom = q(1);
        for i in 0..=idx.l {
            if i > 0 {
                binom = binom * q((idx.l - i + 1) as i64) / q(i as i64);
            }
            let sign = if i % 2 == 0 { q(1) } else { q(-1) };
            let a = idx.k as usize + j + i as usize + 1;
            c = &c + &gammas[a].mul_x_pow((idx.l - i) as i32).scale(&(sign * binom.clone()));
        }
        out.push(c.scale(&(q(1) / denom.clone())));
    }
    Ok(out)
}

/// γ(a, x) for a = 0..=top (index 0 unused, zero).
pub(crate) fn gamma_table(top: i64) -> Result<Vec<QExpPoly>> {
    let mut out = vec![QExpPoly::zero()];
    if top < 1 {
        return Ok(out);
    }
    let mut g: QExpPoly = incomplete_gamma_exact(1)?;
    out.push(g.clone());
    for a in 1..top {
        let mut next = g.scale(&q(a));
        next.add_term(q(-1), a as i32, 1);
        out.push(next.clone());
        g = next;
    }
    Ok(out)
}

/// Exact y-series of the boundary function x^a e^{−x} 0F1(ν; xy).
pub fn boundary_series(x_pow: i32, nu: u32, order: usize) -> Vec<QExpPoly> {
    let mut out = Vec::with_capacity(order + 1);
    let mut denom = q(1);
    for j in 0..=order {
        if j > 0 {
            denom = denom * q((nu as i64 + j as i64 - 1) * j as i64);
        }
        out.push(QExpPoly::monomial(q(1) / denom.clone(), x_pow + j as i32, 1));
    }
    out
}

/// e^{−x} 0F1(ν; xy).
pub fn boundary_eval<T: Real>(nu: u32, x: T, y: T) -> Result<T> {
    Ok((-x).exp() * hpg01(T::from_usize_(nu as usize), x * y)?)
}

/// ∂/∂y^s of H^k_n equals H^{k+s}_{n+s}/(n)_s; returns the index and factor.
pub fn dy_power(idx: HIndex, s: u32) -> (HIndex, f64) {
    let f = 1.0 / pochhammer(idx.n as f64, s);
    (HIndex { k: idx.k + s, l: idx.l, n: idx.n + s }, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;
    use crate::Rational;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn degenerate_values() {
        for &x in &[0.3, 1.0, 4.0] {
            let v: f64 = h_eval(HIndex::new(0, 1), x, 0.0).unwrap();
            assert!(rel(v, 1.0 - (-x as f64).exp()) < 1e-13);
            for k in 0..5 {
                let v: f64 = h_eval(HIndex::new(k, 3), x, 0.0).unwrap();
                let g = incomplete_gamma(k as f64 + 1.0, x).unwrap();
                assert!(rel(v, g) < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_value() {
        let v: f64 = h_eval(HIndex::new(1, 2), 2.0, 3.0).unwrap();
        assert!(rel(v, 2.510_152_545_614_227_8) < 1e-12);
        let s: f64 = h_eval_series(HIndex::new(1, 2), 2.0, 3.0).unwrap();
        assert!(rel(s, 2.510_152_545_614_227_8) < 1e-14);
    }

    #[test]
    fn series_and_quadrature_agree() {
        for &(k, n) in &[(0, 1), (3, 2), (5, 6), (2, 8)] {
            for &x in &[0.5, 2.0, 10.0] {
                for &y in &[0.5, 5.0, 10.0] {
                    let idx = HIndex::new(k, n);
                    let a: f64 = h_eval(idx, x, y).unwrap();
                    let b: f64 = h_eval_series(idx, x, y).unwrap();
                    assert!(rel(a, b) < 1e-11, "{idx} x={x} y={y}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn exact_series_coefficients() {
        let n = 5;
        let c = h_series(HIndex::new(n - 1, n - 1), 3).unwrap();
        assert_eq!(c[0], incomplete_gamma_exact::<Rational>(n as i64).unwrap());
        let c = h_series(HIndex::new(n - 2, n - 1), 3).unwrap();
        assert_eq!(c[1], incomplete_gamma_exact::<Rational>(n as i64).unwrap().scale(&qf(1, n as i64 - 1)));
        let x: f64 = 1.7;
        let y: f64 = 0.4;
        let idx = HIndex::with_l(2, 2, 3);
        let s = h_series(idx, 25).unwrap();
        let v: f64 = s.iter().enumerate().map(|(j, c)| c.eval(x).unwrap() * y.powi(j as i32)).sum();
        let w: f64 = h_eval(idx, x, y).unwrap();
        assert!(rel(v, w) < 1e-12);
    }

    #[test]
    fn x_derivative_matches_boundary_function() {
        for &(k, n) in &[(1, 2), (4, 3)] {
            for &(x, y) in &[(0.7, 1.3), (3.0, 2.0)] {
                let idx = HIndex::new(k, n);
                let h = 1e-5 * f64::max(1.0, x);
                let d = (h_eval_series(idx, x + h, y).unwrap() - h_eval_series(idx, x - h, y).unwrap()) / (2.0 * h);
                let exact = x.powi(k as i32) * boundary_eval(n, x, y).unwrap();
                assert!(rel(d, exact) < 1e-7);
            }
        }
    }

    #[test]
    fn y_derivative_shifts_indices() {
        for &(k, l, n) in &[(1, 0, 2), (2, 1, 3), (0, 2, 1)] {
            let (x, y) = (1.5, 0.8);
            let idx = HIndex::with_l(k, l, n);
            let h = 1e-5;
            let d = (h_eval(idx, x, y + h).unwrap() - h_eval(idx, x, y - h).unwrap()) / (2.0 * h);
            let exact = h_eval(HIndex::with_l(k + 1, l, n + 1), x, y).unwrap() / n as f64;
            assert!(rel(d, exact) < 1e-7);
        }
    }

    #[test]
    fn y_ode_holds_exactly_on_series() {
        // (y∂² + (n−y)∂ − k − 1) H^k_n = −x^{k+1} e^{−x} 0F1(n; xy)
        let order = 12;
        for &(k, n) in &[(0, 1), (2, 3), (5, 4)] {
            let a = h_series(HIndex::new(k, n), order + 1).unwrap();
            let rhs = boundary_series(k as i32 + 1, n, order);
            for j in 0..=order {
                let jq = q(j as i64);
                let mut lhs = a[j + 1].scale(&(q(j as i64 + 1) * jq.clone()));
                lhs = &lhs + &a[j + 1].scale(&(q(n as i64) * q(j as i64 + 1)));
                lhs = &lhs - &a[j].scale(&jq);
                lhs = &lhs - &a[j].scale(&q(k as i64 + 1));
                assert_eq!(lhs, -&rhs[j], "k={k} n={n} j={j}");
            }
        }
    }
}
