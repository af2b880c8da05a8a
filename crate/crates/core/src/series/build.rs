//! λ-series of the determinant in the CDF, of R = ∂/∂x of it, and of the
//! density ψ.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::h_integrals::{h_series, HIndex};
use crate::linalg::det_cofactor;
use crate::scalar::q;
use crate::{QExpPoly, Rational};

use super::{det_series, split_antisymmetric, LambdaSeries, SchurExpansion};

fn check(n: u32, m: usize) -> Result<()> {
    if m == 0 || (n as usize) < m {
        return Err(Error::InvalidParams(format!("need n >= m >= 1, got n={n}, m={m}")));
    }
    Ok(())
}

/// Expansion of det(H^{n−j}_{n−m+1}(x, λ_i)) over monomial determinants.
pub fn cdf_expansion(n: u32, m: usize, order: usize) -> Result<SchurExpansion> {
    check(n, m)?;
    let nu = n - m as u32 + 1;
    let rows = (1..=m as u32)
        .map(|j| h_series(HIndex::new(n - j, nu), order))
        .collect::<Result<Vec<_>>>()?;
    det_series(&rows, order)
}

/// The determinant of the CDF (without front factor) as a λ-series.
pub fn build_cdf_series(n: u32, m: usize, order: usize) -> Result<LambdaSeries> {
    Ok(cdf_expansion(n, m, order)?.to_series())
}

/// R_{n,m} = ∂/∂x det(H^{n−j}_{n−m+1}(x, λ_i)) as an exact λ-series.
pub fn build_r_series(n: u32, m: usize, order: usize) -> Result<LambdaSeries> {
    Ok(cdf_expansion(n, m, order)?.diff_x().to_series())
}

/// ψ series, either as ψ·e^{Σλ} or with e^{−Σλ} folded in.
#[derive(Clone, Debug)]
pub struct PsiSeries {
    pub series: LambdaSeries,
    pub exp_folded: bool,
}

impl PsiSeries {
    pub fn eval(&self, x: f64, lambdas: &[f64]) -> Result<f64> {
        let v = self.series.eval(x, lambdas)?;
        if self.exp_folded {
            Ok(v)
        } else {
            Ok(v * (-lambdas.iter().sum::<f64>()).exp())
        }
    }
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(q(1), |acc, v| acc * q(v))
}

/// e^{−Σλ} truncated at total degree `order`.
fn exp_neg_sum(m: usize, order: usize) -> LambdaSeries {
    let mut s = LambdaSeries::zero(m, order);
    fn rec(e: &mut Vec<u32>, i: usize, left: usize, s: &mut LambdaSeries) {
        if i == e.len() {
            let deg: u32 = e.iter().sum();
            let mut c = if deg % 2 == 0 { q(1) } else { q(-1) };
            for &d in e.iter() {
                c = c / factorial(d);
            }
            s.add_term(e.clone(), QExpPoly::constant(c));
            return;
        }
        for d in 0..=left {
            e[i] = d as u32;
            rec(e, i + 1, left - d, s);
        }
        e[i] = 0;
    }
    rec(&mut vec![0; m], 0, order, &mut s);
    s
}

/// Exact λ-series of ψ_{n,m} to total degree `order`. R is built to
/// order + m(m−1)/2, checked for antisymmetry and divided by the
/// Vandermonde one Schur component at a time.
pub fn build_psi_series(n: u32, m: usize, order: usize, fold_exp: bool) -> Result<PsiSeries> {
    check(n, m)?;
    let r = build_r_series(n, m, order + m * (m - 1) / 2)?;
    Ok(PsiSeries { series: quotient_series(&r, n, m, order, fold_exp)?, exp_folded: fold_exp })
}

/// Exact λ-series of the CDF F_{n,m} with e^{−Σλ} folded in.
pub fn build_f_series(n: u32, m: usize, order: usize) -> Result<LambdaSeries> {
    check(n, m)?;
    let d = build_cdf_series(n, m, order + m * (m - 1) / 2)?;
    quotient_series(&d, n, m, order, true)
}

// antisymmetric series → front factor · series / ∏_{i<j}(λ_i − λ_j)
fn quotient_series(s: &LambdaSeries, n: u32, m: usize, order: usize, fold_exp: bool) -> Result<LambdaSeries> {
    let pairs = m * (m - 1) / 2;
    let split = split_antisymmetric(s)?;
    // ∏_{i<j}(λ_i − λ_j) = (−1)^{pairs} det(λ_i^{j−1})
    let mut c = q(1) / factorial(n - m as u32).pow(m as i32);
    if pairs % 2 == 1 {
        c = -c;
    }
    let mut series = split.divide_vandermonde()?.scale_rational(&c);
    if fold_exp {
        series = series.mul(&exp_neg_sum(m, order))?;
    }
    Ok(series)
}

/// Σ_ℓ det(A with row ℓ replaced by (c_j a_ℓj)_j) == (Σ c_j) det A, exactly.
pub fn lemma7_check(a: &[Vec<QExpPoly>], c: &[Rational]) -> bool {
    let m = a.len();
    if c.len() != m || a.iter().any(|r| r.len() != m) {
        return false;
    }
    let det = |mat: &[Vec<QExpPoly>]| {
        det_cofactor(mat, &QExpPoly::zero(), &|v| v.is_zero(), &|x, y| x * y, &|x, y| x + y, &|x| x.scale(&q(-1)))
    };
    let mut lhs = QExpPoly::zero();
    for l in 0..m {
        let mut b = a.to_vec();
        b[l] = a[l].iter().zip(c).map(|(v, cj)| v.scale(cj)).collect();
        lhs = &lhs + &det(&b);
    }
    let total = c.iter().fold(Rational::zero(), |s, v| s + v);
    let rhs = if total.is_one() { det(a) } else { det(a).scale(&total) };
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h_integrals::{boundary_eval, h_eval};
    use crate::linalg::det_lu;
    use crate::scalar::qf;
    use crate::special_fn::hpg01;

    fn gamma(a: i64) -> QExpPoly {
        crate::incomplete_gamma_exact(a).unwrap()
    }

    fn x() -> QExpPoly {
        QExpPoly::x_pow(1)
    }

    #[test]
    fn m1_series_is_boundary_function() {
        for n in 1..5u32 {
            let r = build_r_series(n, 1, 8).unwrap();
            let b = crate::h_integrals::boundary_series(n as i32 - 1, n, 8);
            for (j, c) in b.iter().enumerate() {
                assert_eq!(&r.coeff(&[j as u32]), c, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn r_is_antisymmetric() {
        for (n, m) in [(3u32, 2usize), (4, 3)] {
            let r = build_r_series(n, m, 7).unwrap();
            assert_eq!(r.swap(0, 1), r.neg());
            if m == 3 {
                assert_eq!(r.swap(1, 2), r.neg());
            }
        }
    }

    #[test]
    fn derivative_of_cdf_series_is_r() {
        for (n, m) in [(3u32, 2usize), (5, 3)] {
            let f = build_cdf_series(n, m, 7).unwrap();
            assert_eq!(f.diff_x(), build_r_series(n, m, 7).unwrap());
        }
    }

    #[test]
    fn m2_leading_determinant() {
        // D_(0,1) = det(γ(n), γ(n−1); γ(n+1), γ(n)) / (n−1) against λ₂ − λ₁
        for n in 2..7i64 {
            let e = cdf_expansion(n as u32, 2, 3).unwrap();
            let d = &(&gamma(n) * &gamma(n)) - &(&gamma(n - 1) * &gamma(n + 1));
            assert_eq!(e.coeff(&[0, 1]), d.scale(&(q(1) / q(n - 1))));
        }
    }

    #[test]
    fn m2_bracket_coefficients() {
        // R = B1 (λ1 − λ2) + B2 (λ1² − λ2²)/2 + ...
        for n in 2..7i64 {
            let r = build_r_series(n as u32, 2, 4).unwrap();
            let tail = x().pow(n as u32 - 2).mul_e_pow(1);
            let xn1e = x().pow(n as u32 - 1).mul_e_pow(1);
            let b1 = &(&(&x().pow(2).scale(&qf(1, n - 1)) + &x().scale(&q(-2))) + &QExpPoly::constant(q(n)))
                * &gamma(n - 1)
                + (&x() - &QExpPoly::constant(q(n))).scale(&qf(1, n - 1)) * xn1e.clone();
            let b1 = &b1 * &tail;
            let poly2 = &(&(&x().pow(3).scale(&qf(1, n * (n - 1))) - &x().pow(2).scale(&qf(1, n))) - &x())
                + &QExpPoly::constant(q(n + 1));
            let quad = (&x() - &QExpPoly::constant(q(n + 1))) * (&x() + &QExpPoly::constant(q(n)));
            let b2 = &(&(&poly2 * &gamma(n - 1)) + &(&quad.scale(&qf(1, n * (n - 1))) * &xn1e)) * &tail;
            assert_eq!(r.coeff(&[1, 0]), b1, "n={n}");
            assert_eq!(r.coeff(&[0, 1]), -b1.clone(), "n={n}");
            assert_eq!(r.coeff(&[2, 0]), b2.scale(&qf(1, 2)), "n={n}");
            assert!(r.coeff(&[1, 1]).is_zero());
        }
    }

    fn r_quadrature(n: u32, lam: &[f64], x: f64) -> f64 {
        let m = lam.len();
        let nu = n - m as u32 + 1;
        let h = |k: u32, l: f64| h_eval(HIndex::new(k, nu), x, l).unwrap();
        let dh = |k: u32, l: f64| x.powi(k as i32) * boundary_eval(nu, x, l).unwrap();
        let mut total = 0.0;
        for col in 0..m {
            let mat: Vec<Vec<f64>> = lam
                .iter()
                .map(|&l| {
                    (0..m).map(|j| {
                        let k = n - 1 - j as u32;
                        if j == col { dh(k, l) } else { h(k, l) }
                    }).collect()
                })
                .collect();
            total += det_lu(mat);
        }
        total
    }

    #[test]
    fn m2_series_matches_quadrature() {
        let (x, lam) = (2.0, [0.3, 0.1]);
        for n in [2u32, 4] {
            let s = build_r_series(n, 2, 10).unwrap().eval(x, &lam).unwrap();
            let r = r_quadrature(n, &lam, x);
            assert!((s - r).abs() <= 1e-8 * r.abs(), "n={n}: {s} vs {r}");
        }
    }

    #[test]
    fn psi_m1_and_symmetry() {
        let p = build_psi_series(3, 1, 10, false).unwrap();
        let (x, l): (f64, f64) = (1.5, 0.4);
        let direct = x.powi(2) * (-x).exp() * hpg01(3.0, x * l).unwrap() / 2.0 * (-l).exp();
        assert!((p.eval(x, &[l]).unwrap() - direct).abs() < 1e-12);
        let p2 = build_psi_series(4, 2, 8, false).unwrap();
        assert_eq!(p2.series.swap(0, 1), p2.series);
        let folded = build_psi_series(4, 2, 8, true).unwrap();
        let a = folded.eval(1.0, &[0.2, 0.1]).unwrap();
        let b = p2.eval(1.0, &[0.2, 0.1]).unwrap();
        assert!((a - b).abs() < 1e-9 * b.abs());
    }

    #[test]
    fn psi_m2_leading_coefficient() {
        // ψ e^{Σλ} at λ = 0 is B1 / ((n−2)!)², B1 the (λ1 − λ2) coefficient of R
        for n in 2..6u32 {
            let r = build_r_series(n, 2, 3).unwrap();
            let p = build_psi_series(n, 2, 2, false).unwrap();
            let f = factorial(n - 2);
            assert_eq!(p.series.coeff(&[0, 0]), r.coeff(&[1, 0]).scale(&(q(1) / (&f * &f))));
        }
    }

    #[test]
    fn lemma7_cases() {
        let one = QExpPoly::one;
        let zero = QExpPoly::zero;
        let id = vec![vec![one(), zero(), zero()], vec![zero(), one(), zero()], vec![zero(), zero(), one()]];
        assert!(lemma7_check(&id, &[q(1), q(2), q(3)]));
        assert!(lemma7_check(&id, &[q(0), q(0), q(0)]));
        let a: Vec<Vec<QExpPoly>> = [[2, -1, 3], [0, 5, 7], [1, 1, -4]]
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().map(|&v| QExpPoly::monomial(q(v), i as i32, (v.unsigned_abs() % 2) as u32)).collect())
            .collect();
        assert!(lemma7_check(&a, &[qf(1, 2), q(-3), q(4)]));
    }
}
