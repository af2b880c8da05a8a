//! The G-functions of the determinantal formula, the explicit solutions
//! Y_{N,2..4} of Q_{N,N−M}[y]Y = 0 and the maps between solution spaces.

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::QPoly;

use super::forms::{pc, px, py, FormAtom, HolForm};

/// G_{n,2} = n 0F1(n; xy) + y 0F1(n+1; xy) + (x − y − n + 1)·Tail.
fn g2(n: u32) -> HolForm {
    let ni = n as i64;
    let mut f = HolForm::atom(n, FormAtom::Hyp(n), pc(ni));
    f.add_term(FormAtom::Hyp(n + 1), py());
    f.add_term(FormAtom::Tail, &(&px() - &py()) - &pc(ni - 1));
    f
}

/// −y∂² − (n−m+1)∂ + x + m, the step G_{n,m} → G_{n,m+1}.
pub fn g_step(n: u32, m: u32) -> Vec<(QPoly, u32)> {
    let (ni, mi) = (n as i64, m as i64);
    vec![(-&py(), 2), (pc(-(ni - mi + 1)), 1), (&px() + &pc(mi), 0)]
}

/// G_{n,level} as a form.
pub fn g_form(n: u32, level: u32) -> Result<HolForm> {
    if level < 2 || n < level {
        return Err(Error::InvalidParams(format!("G_{{n,m}} needs n >= m >= 2, got n={n}, m={level}")));
    }
    let mut f = g2(n);
    for l in 2..level {
        f = f.apply(&g_step(n, l));
    }
    Ok(f)
}

/// G_{n,level}(x, y).
pub fn g_function(n: u32, level: u32, x: f64, y: f64) -> Result<f64> {
    g_form(n, level)?.eval(x, y)
}

/// L₂ = y − x + N − 1.
pub fn l2(big_n: u32) -> QPoly {
    &(&py() - &px()) + &pc(big_n as i64 - 1)
}

/// L₃ = L₂² + 2x − N + 1.
pub fn l3(big_n: u32) -> QPoly {
    let l = l2(big_n);
    &(&(&l * &l) + &px().scale(&q(2))) + &pc(1 - big_n as i64)
}

/// L₄ = L₂³ + 3(2x − N + 1)(L₂ − 1) − N + 1.
pub fn l4(big_n: u32) -> QPoly {
    let l = l2(big_n);
    let c = &px().scale(&q(2)) + &pc(1 - big_n as i64);
    let mid = (&c * &(&l - &pc(1))).scale(&q(3));
    &(&(&(&l * &l) * &l) + &mid) + &pc(1 - big_n as i64)
}

/// Y_{N,M} for M ∈ {2, 3, 4}, a solution of Q_{N,N−M}[y]Y = 0.
pub fn y_form(big_n: u32, big_m: u32) -> Result<HolForm> {
    if big_n == 0 {
        return Err(Error::InvalidParams("Y_{N,M} needs N >= 1".into()));
    }
    let ni = big_n as i64;
    let (a, b, c) = match big_m {
        2 => (pc(ni), py(), l2(big_n)),
        3 => {
            let l = l2(big_n);
            ((&l - &pc(2)).scale(&q(ni)), &py() * &(&l - &pc(1)), l3(big_n))
        }
        4 => {
            let l = l2(big_n);
            let a = &(&l - &pc(2)) * &(&l - &pc(2));
            let a = &(&(&a + &py().scale(&q(2))) + &px().scale(&q(2))) + &pc(2);
            let b = &(&l - &pc(1)) * &(&l - &pc(1));
            let b = &(&(&b + &py()) + &px().scale(&q(3))) + &pc(2 - ni);
            (a.scale(&q(ni)), &py() * &b, l4(big_n))
        }
        _ => return Err(Error::InvalidParams(format!("Y_{{N,M}} is given for M in 2..=4, got {big_m}"))),
    };
    let mut f = HolForm::atom(big_n, FormAtom::Hyp(big_n), a);
    f.add_term(FormAtom::Hyp(big_n + 1), b);
    f.add_term(FormAtom::Head, c);
    Ok(f)
}

/// Y_{N,M}(x, y).
pub fn y_solution(big_n: u32, big_m: u32, x: f64, y: f64) -> Result<f64> {
    y_form(big_n, big_m)?.eval(x, y)
}

/// Q_{N,M}[y] = y∂³ + (M − y + 2)∂² − (x + N + 1)∂ + x.
pub fn q_operator(big_n: i64, big_m: i64) -> Vec<(QPoly, u32)> {
    vec![
        (py(), 3),
        (&pc(big_m + 2) - &py(), 2),
        (-&(&px() + &pc(big_n + 1)), 1),
        (px(), 0),
    ]
}

/// ∂ − 1: solutions of Q_{N,N−M} to solutions of Q_{N,N−M+1}.
pub fn lowering() -> Vec<(QPoly, u32)> {
    vec![(pc(1), 1), (pc(-1), 0)]
}

/// y∂² + (N−M+1)∂ − x − M: solutions of Q_{N,N−M} to solutions of Q_{N,N−M−1}.
pub fn raising(big_n: u32, big_m: u32) -> Vec<(QPoly, u32)> {
    let (ni, mi) = (big_n as i64, big_m as i64);
    vec![(py(), 2), (pc(ni - mi + 1), 1), (-&(&px() + &pc(mi)), 0)]
}

/// (y − x + N − 2M + 1)Y + (2y + N − M + 1)(∂−1)Y + y(∂−1)²Y.
pub fn raising_by_lowered(big_n: u32, big_m: u32, f: &HolForm) -> HolForm {
    let (ni, mi) = (big_n as i64, big_m as i64);
    let y1 = f.apply(&lowering());
    let y2 = y1.apply(&lowering());
    let a = &(&py() - &px()) + &pc(ni - 2 * mi + 1);
    let b = &py().scale(&q(2)) + &pc(ni - mi + 1);
    f.mul_poly(&a).add(&y1.mul_poly(&b)).add(&y2.mul_poly(&py()))
}

/// |L·f| relative to the size of its terms at (x, y).
pub fn relative_residual(f: &HolForm, op: &[(QPoly, u32)], x: f64, y: f64) -> Result<f64> {
    let r = f.apply(op);
    let (v, _) = r.eval_scaled(x, y)?;
    let scale = op
        .iter()
        .map(|(c, k)| {
            let mut d = f.clone();
            for _ in 0..*k {
                d = d.derivative();
            }
            d.mul_poly(c).eval_scaled(x, y).map(|(_, m)| m)
        })
        .sum::<Result<f64>>()?;
    Ok(v.abs() / scale.max(f64::MIN_POSITIVE))
}
