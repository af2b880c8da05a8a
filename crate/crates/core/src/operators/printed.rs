//! Explicit annihilators of R_{n,2} and R_{n,3}, transcribed term by term.

use crate::scalar::{q, qf};
use crate::QRatFunc;

use super::DiffOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrintedOperator {
    /// Second-order operator with ∂x from the rank-12 generators (m = 2).
    Rank12Euler,
    /// ∂³/∂x∂λ₁∂λ₂ + 2∂²/∂λ₁∂λ₂ − ∂λ₁ − ∂λ₂.
    Rank12Mixed,
    /// Third rank-12 generator, written with a non-commutative product.
    Rank12Third,
    /// Fifth-order operator in λ₁ alone.
    Order5,
    /// Second-order operator of the rank-8 system, with the S_n factor.
    Rank8Second,
    /// Third-order operator adjoined to the rank-12 system.
    Rank8Third,
    /// m = 3 analogue of the mixed operator.
    M3Mixed,
    /// m = 3 fourth-order operator, a sum over λ₁, λ₂, λ₃, with ∂³
    /// coefficient (2n−2−λ_k) exactly as printed.
    M3Order4Sum,
    /// The same operator with ∂³ coefficient λ_k(2n−2−λ_k).
    M3Order4SumAmended,
}

impl PrintedOperator {
    pub const ALL: [PrintedOperator; 9] = [
        PrintedOperator::Rank12Euler,
        PrintedOperator::Rank12Mixed,
        PrintedOperator::Rank12Third,
        PrintedOperator::Order5,
        PrintedOperator::Rank8Second,
        PrintedOperator::Rank8Third,
        PrintedOperator::M3Mixed,
        PrintedOperator::M3Order4Sum,
        PrintedOperator::M3Order4SumAmended,
    ];

    pub fn m(self) -> usize {
        match self {
            PrintedOperator::M3Mixed | PrintedOperator::M3Order4Sum | PrintedOperator::M3Order4SumAmended => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PrintedOperator::Rank12Euler => "rank12-euler",
            PrintedOperator::Rank12Mixed => "rank12-mixed",
            PrintedOperator::Rank12Third => "rank12-third",
            PrintedOperator::Order5 => "order5-lambda1",
            PrintedOperator::Rank8Second => "rank8-second",
            PrintedOperator::Rank8Third => "rank8-third",
            PrintedOperator::M3Mixed => "m3-mixed",
            PrintedOperator::M3Order4Sum => "m3-order4-sum",
            PrintedOperator::M3Order4SumAmended => "m3-order4-sum-amended",
        }
    }

    pub fn build(self, n: u32) -> DiffOperator {
        let n = n as i64;
        match self {
            PrintedOperator::Rank12Euler => rank12_euler(n),
            PrintedOperator::Rank12Mixed => {
                let m = 2;
                let d12 = &d(m, 1) * &d(m, 2);
                &(&(&(&d(m, 0) * &d12) + &(&k(m, 2) * &d12)) - &d(m, 1)) - &d(m, 2)
            }
            PrintedOperator::Rank12Third => rank12_third(n),
            PrintedOperator::Order5 => order5(n),
            PrintedOperator::Rank8Second => rank8_second(n),
            PrintedOperator::Rank8Third => rank8_third(n),
            PrintedOperator::M3Mixed => {
                let m = 3;
                let d12 = &d(m, 1) * &d(m, 2);
                let d13 = &d(m, 1) * &d(m, 3);
                let d23 = &d(m, 2) * &d(m, 3);
                let d123 = &d12 * &d(m, 3);
                let lead = &(&d(m, 0) * &d123) + &(&k(m, 3) * &d123);
                &(&(&lead - &d12) - &d13) - &d23
            }
            PrintedOperator::M3Order4Sum => m3_order4_sum(n, false),
            PrintedOperator::M3Order4SumAmended => m3_order4_sum(n, true),
        }
    }
}

fn d(m: usize, v: usize) -> DiffOperator {
    DiffOperator::d(m, v)
}

fn v(m: usize, i: usize) -> DiffOperator {
    DiffOperator::var(m, i)
}

fn k(m: usize, c: i64) -> DiffOperator {
    DiffOperator::scalar(m, c)
}

fn rank12_euler(n: i64) -> DiffOperator {
    let m = 2;
    let mut op = &v(m, 0) * &d(m, 0);
    for i in 1..=2 {
        let first = &v(m, i) - &k(m, n - 1);
        op = &(&op + &(&v(m, i) * &d(m, i).pow(2))) - &(&first * &d(m, i));
    }
    &op + &k(m, 2 - 2 * n)
}

fn rank12_third(n: i64) -> DiffOperator {
    let m = 2;
    let (x, l1, l2) = (v(m, 0), v(m, 1), v(m, 2));
    let l12 = &l1 * &l2;
    let d12 = &d(m, 1) * &d(m, 2);
    let pre = &(&(&l12 * &d(m, 1)) + &(&l12 * &d(m, 2))) + &(&k(m, n - 1) * &(&l1 + &l2));
    let xdx = &x * &d(m, 0);
    let a = &(&xdx + &(&k(m, 2) * &x)) + &k(m, 2 - n);
    let b = &(&(&(&xdx - &(&l1 * &d(m, 1))) - &(&l2 * &d(m, 2))) + &x) + &k(m, 2 - 2 * n);
    &(&(&pre * &d12) + &(&k(m, n - 1) * &x)) + &(&a * &b)
}

fn order5(n: i64) -> DiffOperator {
    let m = 2;
    let (x, l) = (v(m, 0), v(m, 1));
    let dl = |p: u32| d(m, 1).pow(p);
    let t5 = &(&l * &l) * &dl(5);
    let t4 = &(&l * &(&(&k(m, 2 * n + 2) - &l))) * &dl(4);
    let c3 = &(&(&k(m, n * n + n) - &(&k(m, 2) * &(&x * &l))) - &(&k(m, 2 * n) * &l)) - &(&k(m, 3) * &l);
    let c2 = &(&k(m, n * n + 2 * n) - &(&k(m, 2) * &(&x * &l))) + &(&k(m, 2 * n) * &x);
    let c1 = &x * &(&k(m, 2 * n + 1) + &x);
    let t3 = &c3 * &dl(3);
    let t2 = &c2 * &dl(2);
    let t1 = &c1 * &dl(1);
    &(&(&(&(&t5 + &t4) + &t3) - &t2) + &t1) - &(&x * &x)
}

fn coef(m: usize, r: QRatFunc) -> DiffOperator {
    DiffOperator::coeff(m, r)
}

fn rank8_second(n: i64) -> DiffOperator {
    let m = 2;
    let nv = 3;
    let (x, l1, l2) = (v(m, 0), v(m, 1), v(m, 2));
    let xr = QRatFunc::var(nv, 0);
    let s_n = {
        let a = &(&k(m, 2) * &x) - &k(m, n - 1);
        let b = &(&(&l1 + &l2) - &(&k(m, 2) * &x)) + &k(m, 2 * n - 2);
        let diff = &l1 - &l2;
        &(&(&a * &a) * &b) - &(&coef(m, xr.scale(&qf(1, 2))) * &(&diff * &diff))
    };
    // D_x = ∂x + 1 − (n−2)/x,  D_λ = λ1∂1 + λ2∂2
    let dx = &(&d(m, 0) + &k(m, 1)) - &coef(m, xr.inv().scale(&q(n - 2)));
    let dlam = &(&l1 * &d(m, 1)) + &(&l2 * &d(m, 2));
    let d12 = &d(m, 1) * &d(m, 2);
    let mixed = &coef(m, &(&QRatFunc::var(nv, 1) * &QRatFunc::var(nv, 2)).scale(&q(2)) * &xr.inv()) * &d12;

    let inner1 = {
        let t1 = &x * &dx.pow(2);
        let t2 = &dlam * &(&(&k(m, 2) * &dx) + &k(m, 1));
        let t3 = &(&x - &k(m, n - 1)) * &dx;
        let t4 = &(&l1 + &l2) - &k(m, 1);
        &(&(&(&t1 + &mixed) - &t2) + &t3) + &t4
    };
    let inner2 = {
        let a = &(&x - &k(m, n - 1)) * &(&(&dlam * &dx) - &mixed);
        let b = &(&(&k(m, 2) * &x) - &k(m, n))
            * &(&(&(&dlam + &(&(&x - &k(m, n - 1)) * &dx)) - &k(m, 1)));
        &a + &b
    };
    let f2 = &(&(&l1 + &l2) - &(&k(m, 4) * &x)) + &k(m, 2 * n - 2);
    let inner3 = {
        let s = &l1 + &l2;
        let a = &s * &(&(&dlam + &(&k(m, 2) * &x)) - &k(m, n - 1));
        let sq = &(&(&(&l1 * &l1) * &d(m, 1).pow(2)) + &(&(&l2 * &l2) * &d(m, 2).pow(2)));
        let half = &coef(m, QRatFunc::constant(nv, qf(1, 2))) * &(&s * &s);
        &(&a - sq) - &half
    };
    let f3 = &k(m, 2) * &(&(&k(m, 2) * &x) - &k(m, n - 1));
    let inner4 = {
        let half_s = &coef(m, QRatFunc::constant(nv, qf(1, 2))) * &(&l1 + &l2);
        &(&(&(&(&x * &dlam) * &dx) - &half_s) - &(&k(m, 2) * &x)) + &k(m, n)
    };
    let f4 = &k(m, 2) * &(&l1 * &l2);
    let inner5 = {
        let a = &(&l1 * &l1) * &d(m, 1).pow(2);
        let b = &(&l2 * &l2) * &d(m, 2).pow(2);
        let c = &(&l1 * &l1) * &d(m, 1);
        let e = &(&l2 * &l2) * &d(m, 2);
        &(&(&a - &b) - &c) + &e
    };
    let f5 = &l1 - &l2;
    let sum = &(&(&(&(&s_n * &inner1) + &(&f2 * &inner2)) + &(&f3 * &inner3)) + &(&f4 * &inner4)) + &(&f5 * &inner5);
    sum
}

fn rank8_third(n: i64) -> DiffOperator {
    let m = 2;
    let (x, l1, l2) = (v(m, 0), v(m, 1), v(m, 2));
    let d12 = &d(m, 1) * &d(m, 2);
    let pre = &(&(&(&(&k(m, 2) * &(&l1 * &d(m, 1))) + &(&k(m, 2) * &(&l2 * &d(m, 2)))) - &(&k(m, 3) * &l1))
        - &(&k(m, 3) * &l2))
        + &k(m, 4 * n - 6);
    let cross = &(&l2 * &d(m, 1)) + &(&l1 * &d(m, 2));
    let xop = &(&(&x * &d(m, 0).pow(2)) + &(&(&x - &k(m, n - 3)) * &d(m, 0))) + &k(m, n);
    let dsum = &d(m, 1) + &d(m, 2);
    let tail = &(&(&k(m, 3) * &x) * &d(m, 0)) + &k(m, 6 - 2 * n);
    &(&(&(&pre * &d12) + &cross) - &(&xop * &dsum)) + &tail
}

fn m3_order4_sum(n: i64, amended: bool) -> DiffOperator {
    let m = 3;
    let x = v(m, 0);
    let mut op = DiffOperator::zero(m);
    for i in 1..=3 {
        let l = v(m, i);
        let dl = |p: u32| d(m, i).pow(p);
        let t4 = &(&l * &l) * &dl(4);
        let c3 = &k(m, 2 * n - 2) - &l;
        let t3 = if amended { &(&l * &c3) * &dl(3) } else { &c3 * &dl(3) };
        let c2 = &k(m, n * n - 3 * n + 2) - &(&(&x + &k(m, 2 * n)) * &l);
        let t2 = &c2 * &dl(2);
        let c1 = &(&x * &l) - &(&k(m, n - 2) * &(&x + &k(m, n + 1)));
        let t1 = &c1 * &dl(1);
        op = &op + &(&(&(&t4 + &t3) + &t2) + &t1);
    }
    &op + &(&k(m, 3 * n - 2) * &x)
}
