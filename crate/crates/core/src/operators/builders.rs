//! The operators P_M, Q_{N,M}, T_j, the second-order operator with ∂x, and
//! the gauge translation to operators for ψ.

use crate::scalar::q;
use crate::QRatFunc;

use super::DiffOperator;

/// (n, m) plus the variable an operator acts in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpBuilderParams {
    pub n: u32,
    pub m: usize,
}

impl OpBuilderParams {
    pub fn new(n: u32, m: usize) -> Self {
        OpBuilderParams { n, m }
    }

    /// M = n − m, the parameter of T₁ = P_M.
    pub fn big_m(&self) -> i64 {
        self.n as i64 - self.m as i64
    }
}

fn c(m: usize, v: i64) -> DiffOperator {
    DiffOperator::scalar(m, v)
}

/// P_M[λ_var] = y∂² + (M+1)∂ − x, in an m-variable operator ring.
pub fn build_p(m: usize, big_m: i64, var: usize) -> DiffOperator {
    let y = DiffOperator::var(m, var);
    let d = DiffOperator::d(m, var);
    &(&(&y * &d.pow(2)) + &(&c(m, big_m + 1) * &d)) - &DiffOperator::var(m, 0)
}

/// Q_{N,M}[λ_var] = y∂³ + (M − y + 2)∂² − (x + N + 1)∂ + x.
pub fn build_q(m: usize, big_n: i64, big_m: i64, var: usize) -> DiffOperator {
    let y = DiffOperator::var(m, var);
    let x = DiffOperator::var(m, 0);
    let d = DiffOperator::d(m, var);
    let t1 = &y * &d.pow(3);
    let t2 = &(&c(m, big_m + 2) - &y) * &d.pow(2);
    let t3 = &(&x + &c(m, big_n + 1)) * &d;
    &(&(&t1 + &t2) - &t3) + &x
}

/// T₁ = P_{n−m}, T_j = Q_{n−m+j, n−m} for 2 ≤ j ≤ m, acting in λ_var.
pub fn t_op(p: OpBuilderParams, j: usize, var: usize) -> DiffOperator {
    let mm = p.big_m();
    if j == 1 {
        build_p(p.m, mm, var)
    } else {
        build_q(p.m, mm + j as i64, mm, var)
    }
}

/// T_k[λ₁], …, T_k[λ_m]; they commute, so their product is any ordering.
pub fn theorem1_factors(p: OpBuilderParams, k: usize) -> Vec<DiffOperator> {
    (1..=p.m).map(|v| t_op(p, k, v)).collect()
}

/// x∂x + Σ_k (λ_k∂_k² + (n−m+1−λ_k)∂_k), which multiplies R by mn − C(m,2) − 1.
pub fn euler_op(p: OpBuilderParams) -> DiffOperator {
    let m = p.m;
    let mut op = &DiffOperator::var(m, 0) * &DiffOperator::d(m, 0);
    for k in 1..=m {
        let l = DiffOperator::var(m, k);
        let d = DiffOperator::d(m, k);
        let first = &c(m, p.big_m() + 1) - &l;
        op = &op + &(&(&l * &d.pow(2)) + &(&first * &d));
    }
    op
}

/// The second-order annihilator: euler_op − mn + C(m,2) + 1.
pub fn theorem2_op(p: OpBuilderParams) -> DiffOperator {
    let m = p.m as i64;
    let shift = -m * p.n as i64 + m * (m - 1) / 2 + 1;
    &euler_op(p) + &c(p.m, shift)
}

/// Conjugation by e^{−Σλ}/∏_{i<j}(λ_i−λ_j): ∂_i ↦ ∂_i + 1 + Σ_{j≠i} 1/(λ_i − λ_j).
pub fn gauge_translate(op: &DiffOperator) -> DiffOperator {
    let m = op.m();
    let nv = m + 1;
    let shifted: Vec<DiffOperator> = (1..=m)
        .map(|i| {
            let mut h = QRatFunc::constant(nv, q(1));
            for j in (1..=m).filter(|&j| j != i) {
                h = &h + &(&QRatFunc::var(nv, i) - &QRatFunc::var(nv, j)).inv();
            }
            &DiffOperator::d(m, i) + &DiffOperator::coeff(m, h)
        })
        .collect();
    let mut out = DiffOperator::zero(m);
    for (alpha, coef) in op.terms() {
        let mut t = DiffOperator::d_pow(m, 0, alpha[0]);
        for (i, g) in shifted.iter().enumerate() {
            t = &t * &g.pow(alpha[i + 1]);
        }
        out = &out + &t.scale_left(coef);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h_integrals::boundary_series;
    use crate::series::LambdaSeries;
    use crate::{QExpPoly, Rational};

    #[test]
    fn p_kills_hypergeometric_and_maps_one() {
        for mm in 0..4i64 {
            let nu = (mm + 1) as u32;
            // 0F1(M+1; xy) = e^{x} · (e^{−x} 0F1) series
            let coeffs = boundary_series(0, nu, 14);
            let mut s = LambdaSeries::zero(1, 14);
            for (j, cj) in coeffs.into_iter().enumerate() {
                s.add_term(vec![j as u32], cj);
            }
            let r = build_p(1, mm, 1).apply(&s).unwrap();
            assert!(r.is_zero(), "M={mm}: {}", r.dump());
            assert!(r.order() >= 12);
        }
        let one = LambdaSeries::constant(1, 5, QExpPoly::one());
        let r = build_p(1, 0, 1).apply(&one).unwrap();
        assert_eq!(r.coeff(&[0]), QExpPoly::monomial(q(-1), 1, 0));
    }

    #[test]
    fn q_factorization() {
        // Q_{N,N−M−1} = (y∂² + (N−M+1)∂ − x − M)(∂ − 1) − M
        for (nn, mm) in [(4i64, 1i64), (5, 2), (6, 0), (3, 1)] {
            let m = 1;
            let y = DiffOperator::var(m, 1);
            let d = DiffOperator::d(m, 1);
            let left = &(&(&(&y * &d.pow(2)) + &(&c(m, nn - mm + 1) * &d)) - &DiffOperator::var(m, 0)) - &c(m, mm);
            let rhs = &(&left * &(&d - &c(m, 1))) - &c(m, mm);
            assert_eq!(build_q(m, nn, nn - mm - 1, 1), rhs, "N={nn} M={mm}");
        }
    }

    #[test]
    fn q_kills_exponential_solution() {
        // Q_{N,N−2} annihilates (y − x + N − 1) e^y
        for nn in 2..6i64 {
            let order = 14;
            let mut s = LambdaSeries::zero(1, order);
            let mut fact = Rational::from_integer(1.into());
            for j in 0..=order as i64 {
                if j > 0 {
                    fact = fact * q(j);
                }
                // coefficient of y^j: (N−1−x)/j! + 1/(j−1)!
                let mut cj = QExpPoly::constant(q(nn - 1) / &fact);
                cj.add_term(-(q(1) / &fact), 1, 0);
                if j > 0 {
                    cj.add_term(q(j) / &fact, 0, 0);
                }
                s.add_term(vec![j as u32], cj);
            }
            let r = build_q(1, nn, nn - 2, 1).apply(&s).unwrap();
            assert!(r.is_zero(), "N={nn}: {}", r.dump());
        }
    }

    #[test]
    fn gauge_single_variable() {
        let g = gauge_translate(&DiffOperator::d(1, 1));
        assert_eq!(g, &DiffOperator::d(1, 1) + &DiffOperator::one(1));
    }

    #[test]
    fn gauge_conjugation_identity() {
        // L'(g u) = g L(u), g = e^{−λ1−λ2}/(λ1−λ2), u = e^{λ1+2λ2}
        let m = 2;
        let nv = 3;
        let p = OpBuilderParams::new(4, 2);
        let l = &theorem2_op(p) + &(&DiffOperator::var(m, 1) * &DiffOperator::d(m, 2));
        let lp = gauge_translate(&l);
        let inv_vd = (&QRatFunc::var(nv, 1) - &QRatFunc::var(nv, 2)).inv();
        // g u = e^{λ2}/(λ1−λ2); u = e^{λ1+2λ2}
        let lhs = lp.apply_exp_rational(&inv_vd, &[q(0), q(0), q(1)]);
        let rhs = &inv_vd * &l.apply_exp_rational(&QRatFunc::one(nv), &[q(0), q(1), q(2)]);
        assert_eq!(lhs, rhs);
        let at = [0.0, 2.0, 1.0];
        assert!((lhs.eval_f64(&at) - rhs.eval_f64(&at)).abs() < 1e-12);
    }

    #[test]
    fn gauge_is_multiplicative_across_variables() {
        let m = 2;
        let a = &(&DiffOperator::var(m, 1) * &DiffOperator::d_pow(m, 1, 2)) + &DiffOperator::d(m, 1);
        let b = &(&DiffOperator::var(m, 2) * &DiffOperator::d(m, 2)) - &DiffOperator::var(m, 0);
        assert_eq!(gauge_translate(&(&a * &b)), &gauge_translate(&a) * &gauge_translate(&b));
    }
}
