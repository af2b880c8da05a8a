//! Reduction of H^k_n (k ≥ n−1) to the basis
//! {H^{N−1}_N, x^N e^{−x} 0F1(N; xy), x^N e^{−x} 0F1(N+1; xy)}.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::QRatFunc;

use super::combo::{cn, cx, cy, xpow, Atom, HCombo, Relation};
use super::recurrences::{rec_lemma1, rec_lemma2, rec_lemma3, Lemma1, Lemma2, Lemma3};
use super::HIndex;

/// Which relation lowers k at fixed n during the reduction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReductionRoute {
    /// k-shift relation at fixed n (three-term in k).
    ShiftK,
    /// Integration-by-parts relation, trading k for n+1.
    Recip,
}

/// Solves `rel` for `target`, which must occur in it.
fn solve_for(rel: &Relation, target: Atom) -> Result<HCombo> {
    let diff = rel.difference();
    let c = diff.coeff(&target);
    if c.is_zero() {
        return Err(Error::Reduction(format!("{target} does not occur in {}", rel.name)));
    }
    let mut rest = diff.clone();
    rest.add_term(-&c, target);
    Ok(rest.scaled(&(-&c.inv())))
}

struct Reducer {
    route: ReductionRoute,
    big_n: u32,
    memo: HashMap<HIndex, HCombo>,
}

impl Reducer {
    fn step(&self, idx: HIndex) -> Result<Option<HCombo>> {
        let HIndex { k, n, .. } = idx;
        let big_n = self.big_n;
        let target = Atom::H(idx);
        if k == big_n - 1 && n == big_n {
            return Ok(None);
        }
        if k + 1 < n {
            return Err(Error::Reduction(format!("{idx} is below the k >= n-1 range")));
        }
        if k + 1 == n {
            let rel = if n < big_n { rec_lemma3(Lemma3::Hrecg, n)? } else { rec_lemma3(Lemma3::Hrecg, n - 1)? };
            return Ok(Some(solve_for(&rel, target)?));
        }
        if k == n {
            return Ok(Some(solve_for(&rec_lemma3(Lemma3::Simrec2, n)?, target)?));
        }
        let rel = match self.route {
            // the k-shift relation needs 0F1(n−1), so n = 1 falls back
            ReductionRoute::ShiftK if n >= 2 => rec_lemma2(Lemma2::ShiftK, HIndex::new(k - 1, n))?,
            _ => rec_lemma1(Lemma1::Recip, idx)?,
        };
        Ok(Some(solve_for(&rel, target)?))
    }

    fn resolve(&mut self, idx: HIndex) -> Result<HCombo> {
        if let Some(c) = self.memo.get(&idx) {
            return Ok(c.clone());
        }
        let out = match self.step(idx)? {
            None => HCombo::atom(Atom::H(idx)),
            Some(step) => {
                let mut acc = HCombo::zero();
                for (a, c) in step.terms() {
                    match a {
                        Atom::H(i) => {
                            let sub = self.resolve(*i)?;
                            acc.add_scaled(&sub, c);
                        }
                        b => acc.add_term(c.clone(), *b),
                    }
                }
                acc
            }
        };
        self.memo.insert(idx, out.clone());
        Ok(out)
    }
}

/// Rewrites every boundary atom e^{−x}0F1(ν) onto ν ∈ {N, N+1} with the
/// three-term relation 0F1(ν−1) = 0F1(ν) + xy/(ν(ν−1)) 0F1(ν+1).
fn normalize_boundary(mut c: HCombo, big_n: u32) -> HCombo {
    let z = &cx() * &cy();
    loop {
        let low = c.atoms().filter_map(|a| match a {
            Atom::Boundary { nu } if *nu < big_n => Some(*nu),
            _ => None,
        });
        if let Some(nu) = low.min() {
            let a = Atom::Boundary { nu };
            let coef = c.coeff(&a);
            c.add_term(-&coef, a);
            let w = z.scale(&(q(1) / q((nu as i64 + 1) * nu as i64)));
            c.add_term(coef.clone(), Atom::Boundary { nu: nu + 1 });
            c.add_term(&coef * &w, Atom::Boundary { nu: nu + 2 });
            continue;
        }
        let high = c.atoms().filter_map(|a| match a {
            Atom::Boundary { nu } if *nu > big_n + 1 => Some(*nu),
            _ => None,
        });
        if let Some(nu) = high.max() {
            let a = Atom::Boundary { nu };
            let coef = c.coeff(&a);
            c.add_term(-&coef, a);
            let w = &cn((nu as i64 - 1) * (nu as i64 - 2)) / &z;
            let cw = &coef * &w;
            c.add_term(cw.clone(), Atom::Boundary { nu: nu - 2 });
            c.add_term(-&cw, Atom::Boundary { nu: nu - 1 });
            continue;
        }
        return c;
    }
}

/// Reduction along a chosen route, without the numeric self-check.
pub fn reduce_to_basis_by(route: ReductionRoute, idx: HIndex, big_n: u32) -> Result<HCombo> {
    if idx.l != 0 {
        return Err(Error::Reduction("reduction is defined for l = 0".into()));
    }
    if big_n < 2 || idx.n < 1 {
        return Err(Error::Reduction(format!("reduction needs n >= 1 and N >= 2 (got {idx}, N = {big_n})")));
    }
    if idx.k + 1 < idx.n {
        return Err(Error::Reduction(format!("{idx} violates k >= n-1")));
    }
    let mut r = Reducer { route, big_n, memo: HashMap::new() };
    let raw = r.resolve(idx)?;
    Ok(normalize_boundary(raw, big_n))
}

/// ℚ(x,y)-linear expression of H^k_n over the three basis functions with
/// parameter N, checked numerically against the integral before returning.
pub fn reduce_to_basis(idx: HIndex, big_n: u32) -> Result<HCombo> {
    let c = reduce_to_basis_by(ReductionRoute::ShiftK, idx, big_n)?;
    let (x, y) = (1.1, 0.7);
    let lhs = Atom::H(idx).eval(x, y, true)?;
    let rhs = c.eval(x, y, true)?;
    let scale = c.eval_abs(x, y, true)?.max(lhs.abs());
    if (lhs - rhs).abs() > 1e-9 * scale {
        return Err(Error::Reduction(format!("numeric check failed for {idx}: {lhs} vs {rhs}")));
    }
    Ok(c)
}

/// Coefficients of a reduced combination with respect to
/// (H^{N−1}_N, x^N e^{−x} 0F1(N), x^N e^{−x} 0F1(N+1)).
pub fn basis_coefficients(c: &HCombo, big_n: u32) -> Result<[QRatFunc; 3]> {
    let basis = [Atom::H(HIndex::new(big_n - 1, big_n)), Atom::Boundary { nu: big_n }, Atom::Boundary { nu: big_n + 1 }];
    if let Some(a) = c.atoms().find(|a| !basis.contains(a)) {
        return Err(Error::Reduction(format!("{a} is not a basis atom")));
    }
    let xn = xpow(big_n).inv();
    Ok([c.coeff(&basis[0]), &c.coeff(&basis[1]) * &xn, &c.coeff(&basis[2]) * &xn])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_element_is_fixed() {
        let c = reduce_to_basis(HIndex::new(3, 4), 4).unwrap();
        assert_eq!(c, HCombo::atom(Atom::h(3, 4)));
    }

    #[test]
    fn lower_parameter_matches_printed_relation() {
        // H^{n−1}_{n−1} = ((y+n−1)/(n−1)) H^{n−1}_n − y x^n e^{−x} 0F1(n+1)/(n(n−1))
        for n in 2..7u32 {
            let ni = n as i64;
            let c = reduce_to_basis(HIndex::new(n - 1, n - 1), n).unwrap();
            let mut expect = HCombo::zero();
            expect.add_term((&cy() + &cn(ni - 1)).scale(&(q(1) / q(ni - 1))), Atom::h(n - 1, n));
            expect.add_term(-&(&cy() * &xpow(n)).scale(&(q(1) / q(ni * (ni - 1)))), Atom::Boundary { nu: n + 1 });
            assert_eq!(c, expect, "n={n}");
        }
    }

    #[test]
    fn routes_agree_exactly() {
        for big_n in 2..6u32 {
            for n in 1..=big_n + 2 {
                for k in n - 1..n + 4 {
                    let idx = HIndex::new(k, n);
                    let a = reduce_to_basis_by(ReductionRoute::ShiftK, idx, big_n).unwrap();
                    let b = reduce_to_basis_by(ReductionRoute::Recip, idx, big_n).unwrap();
                    assert_eq!(a, b, "{idx} N={big_n}");
                }
            }
        }
    }

    #[test]
    fn numeric_example() {
        let c = reduce_to_basis(HIndex::new(5, 4), 5).unwrap();
        let lhs = Atom::h(5, 4).eval(2.0, 1.0, false).unwrap();
        let rhs = c.eval(2.0, 1.0, false).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs());
        assert_eq!(basis_coefficients(&c, 5).unwrap().len(), 3);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(reduce_to_basis(HIndex::new(1, 4), 4).is_err());
        assert!(reduce_to_basis(HIndex::new(3, 3), 1).is_err());
    }
}
