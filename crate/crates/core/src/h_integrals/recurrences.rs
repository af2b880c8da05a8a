//! Contiguity relations among H-integrals.

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::QRatFunc;

use super::combo::{cn, cx, cy, xpow, Atom, HCombo, Relation};
use super::HIndex;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma1 {
    /// H^k_{n−1} = H^k_n + y/(n(n−1)) H^{k+1}_{n+1}
    Rec3,
    /// k H^{k−1}_n = H^k_n − (y/n) H^k_{n+1} + x^k e^{−x} 0F1(n; xy)
    Recip,
    /// k H^{k−1}_{n−1} = ((n−y−1)/(n−1)) H^k_n + y/(n(n−1)) H^{k+1}_{n+1} + x^k e^{−x} 0F1(n−1; xy)
    Rechd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma2 {
    /// n(n−1) H^k_{n−1} = n(y+n−1) H^k_n + y(k−n+1) H^k_{n+1} − y x^{k+1} e^{−x} 0F1(n+1; xy)
    ShiftN,
    /// H^{k+1}_n = (y−n+2k+2) H^k_n + k(n−k−1) H^{k−1}_n − (n−1) x^k e^{−x} 0F1(n−1; xy)
    ///             + (k−x) x^k e^{−x} 0F1(n; xy)
    ShiftK,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma3 {
    /// (n−1) H^{n−1}_{n−1} = (y+n−1) H^{n−1}_n − (y x^n/n) e^{−x} 0F1(n+1; xy)
    Simrec1,
    /// H^n_n = (y+n) H^{n−1}_n − (y x^n/n) e^{−x} 0F1(n+1; xy) − x^n e^{−x} 0F1(n; xy)
    Simrec2,
    /// H^n_{n+1} = n H^{n−1}_n − x^n e^{−x} 0F1(n+1; xy)
    Hrecg,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lemma45 {
    /// x H^{k,ℓ}_n = H^{k+1,ℓ}_n + H^{k,ℓ+1}_n
    Hklnx,
    /// H^{k,ℓ}_{n−1} = H^{k,ℓ}_n + y/(n(n−1)) H^{k+1,ℓ}_{n+1}
    Hklnr,
    /// H^{k,ℓ}_n = k H^{k−1,ℓ}_n − ℓ H^{k,ℓ−1}_n + (y/n) H^{k,ℓ}_{n+1}
    Hklni,
    /// (n−1) H^{k−1,ℓ}_{n−1} = H^{k,ℓ}_n + ℓ H^{k,ℓ−1}_n + (n−k−1) H^{k−1,ℓ}_n
    Hklrecu,
    /// k H^{k−1,ℓ}_k = H^{k,ℓ}_{k+1} + ℓ H^{k,ℓ−1}_{k+1}
    Hklrecu2,
}

fn h(k: u32, l: u32, n: u32) -> Atom {
    Atom::H(HIndex::with_l(k, l, n))
}

fn f(nu: u32) -> Atom {
    Atom::Boundary { nu }
}

fn combo(terms: Vec<(QRatFunc, Atom)>) -> HCombo {
    let mut c = HCombo::zero();
    for (coef, a) in terms {
        c.add_term(coef, a);
    }
    c
}

fn need(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what.to_string()))
    }
}

fn frac(num: &QRatFunc, den: i64) -> QRatFunc {
    num.scale(&(q(1) / q(den)))
}

pub fn rec_lemma1(variant: Lemma1, idx: HIndex) -> Result<Relation> {
    let HIndex { k, n, .. } = idx;
    need(idx.l == 0, "lemma 1 relations are for l = 0")?;
    let (ki, ni) = (k as i64, n as i64);
    Ok(match variant {
        Lemma1::Rec3 => {
            need(n >= 2, "rec3 needs n >= 2")?;
            Relation {
                name: "rec3",
                lhs: HCombo::atom(h(k, 0, n - 1)),
                rhs: combo(vec![(cn(1), h(k, 0, n)), (frac(&cy(), ni * (ni - 1)), h(k + 1, 0, n + 1))]),
            }
        }
        Lemma1::Recip => {
            need(k >= 1, "recip needs k >= 1")?;
            Relation {
                name: "recip",
                lhs: HCombo::term(cn(ki), h(k - 1, 0, n)),
                rhs: combo(vec![(cn(1), h(k, 0, n)), (-&frac(&cy(), ni), h(k, 0, n + 1)), (xpow(k), f(n))]),
            }
        }
        Lemma1::Rechd => {
            need(k >= 1 && n >= 2, "rechd needs k >= 1 and n >= 2")?;
            let c1 = frac(&(&cn(ni - 1) - &cy()), ni - 1);
            Relation {
                name: "rechd",
                lhs: HCombo::term(cn(ki), h(k - 1, 0, n - 1)),
                rhs: combo(vec![
                    (c1, h(k, 0, n)),
                    (frac(&cy(), ni * (ni - 1)), h(k + 1, 0, n + 1)),
                    (xpow(k), f(n - 1)),
                ]),
            }
        }
    })
}

pub fn rec_lemma2(variant: Lemma2, idx: HIndex) -> Result<Relation> {
    let HIndex { k, n, .. } = idx;
    need(idx.l == 0, "lemma 2 relations are for l = 0")?;
    need(n >= 2, "lemma 2 needs n >= 2")?;
    let (ki, ni) = (k as i64, n as i64);
    Ok(match variant {
        Lemma2::ShiftN => Relation {
            name: "shift_n",
            lhs: HCombo::term(cn(ni * (ni - 1)), h(k, 0, n - 1)),
            rhs: combo(vec![
                ((&cy() + &cn(ni - 1)).scale(&q(ni)), h(k, 0, n)),
                (cy().scale(&q(ki - ni + 1)), h(k, 0, n + 1)),
                (-&(&cy() * &xpow(k + 1)), f(n + 1)),
            ]),
        },
        Lemma2::ShiftK => {
            need(k >= 1, "shift_k needs k >= 1")?;
            Relation {
                name: "shift_k",
                lhs: HCombo::atom(h(k + 1, 0, n)),
                rhs: combo(vec![
                    (&cy() + &cn(2 * ki + 2 - ni), h(k, 0, n)),
                    (cn(ki * (ni - ki - 1)), h(k - 1, 0, n)),
                    (xpow(k).scale(&q(1 - ni)), f(n - 1)),
                    (&(&cn(ki) - &cx()) * &xpow(k), f(n)),
                ]),
            }
        }
    })
}

pub fn rec_lemma3(variant: Lemma3, n: u32) -> Result<Relation> {
    let ni = n as i64;
    Ok(match variant {
        Lemma3::Simrec1 => {
            need(n >= 2, "simrec1 needs n >= 2")?;
            Relation {
                name: "simrec1",
                lhs: HCombo::term(cn(ni - 1), h(n - 1, 0, n - 1)),
                rhs: combo(vec![
                    (&cy() + &cn(ni - 1), h(n - 1, 0, n)),
                    (-&frac(&(&cy() * &xpow(n)), ni), f(n + 1)),
                ]),
            }
        }
        Lemma3::Simrec2 => {
            need(n >= 1, "simrec2 needs n >= 1")?;
            Relation {
                name: "simrec2",
                lhs: HCombo::atom(h(n, 0, n)),
                rhs: combo(vec![
                    (&cy() + &cn(ni), h(n - 1, 0, n)),
                    (-&frac(&(&cy() * &xpow(n)), ni), f(n + 1)),
                    (-&xpow(n), f(n)),
                ]),
            }
        }
        Lemma3::Hrecg => {
            need(n >= 1, "hrecg needs n >= 1")?;
            Relation {
                name: "hrecg",
                lhs: HCombo::atom(h(n, 0, n + 1)),
                rhs: combo(vec![(cn(ni), h(n - 1, 0, n)), (-&xpow(n), f(n + 1))]),
            }
        }
    })
}

pub fn rec_lemma45(variant: Lemma45, idx: HIndex) -> Result<Relation> {
    let HIndex { k, l, n } = idx;
    let (ki, li, ni) = (k as i64, l as i64, n as i64);
    Ok(match variant {
        Lemma45::Hklnx => Relation {
            name: "hklnx",
            lhs: HCombo::term(cx(), h(k, l, n)),
            rhs: combo(vec![(cn(1), h(k + 1, l, n)), (cn(1), h(k, l + 1, n))]),
        },
        Lemma45::Hklnr => {
            need(n >= 2, "hklnr needs n >= 2")?;
            Relation {
                name: "hklnr",
                lhs: HCombo::atom(h(k, l, n - 1)),
                rhs: combo(vec![(cn(1), h(k, l, n)), (frac(&cy(), ni * (ni - 1)), h(k + 1, l, n + 1))]),
            }
        }
        Lemma45::Hklni => {
            need(k >= 1 && l >= 1, "hklni needs k >= 1 and l >= 1")?;
            Relation {
                name: "hklni",
                lhs: HCombo::atom(h(k, l, n)),
                rhs: combo(vec![
                    (cn(ki), h(k - 1, l, n)),
                    (cn(-li), h(k, l - 1, n)),
                    (frac(&cy(), ni), h(k, l, n + 1)),
                ]),
            }
        }
        Lemma45::Hklrecu => {
            need(k >= 1 && l >= 1 && n >= 2, "hklrecu needs k >= 1, l >= 1, n >= 2")?;
            Relation {
                name: "hklrecu",
                lhs: HCombo::term(cn(ni - 1), h(k - 1, l, n - 1)),
                rhs: combo(vec![
                    (cn(1), h(k, l, n)),
                    (cn(li), h(k, l - 1, n)),
                    (cn(ni - ki - 1), h(k - 1, l, n)),
                ]),
            }
        }
        Lemma45::Hklrecu2 => {
            need(k >= 1 && l >= 1, "hklrecu2 needs k >= 1 and l >= 1")?;
            Relation {
                name: "hklrecu2",
                lhs: HCombo::term(cn(ki), h(k - 1, l, k)),
                rhs: combo(vec![(cn(1), h(k, l, k + 1)), (cn(li), h(k, l - 1, k + 1))]),
            }
        }
    })
}

/// Every instance with k, ℓ ≤ kmax/lmax and 2 ≤ n ≤ nmax whose preconditions hold.
pub fn relation_grid(kmax: u32, lmax: u32, nmax: u32) -> Vec<Relation> {
    let mut out = Vec::new();
    for n in 2..=nmax {
        for v in [Lemma3::Simrec1, Lemma3::Simrec2, Lemma3::Hrecg] {
            out.extend(rec_lemma3(v, n));
        }
        for k in 0..=kmax {
            let idx = HIndex::new(k, n);
            for v in [Lemma1::Rec3, Lemma1::Recip, Lemma1::Rechd] {
                out.extend(rec_lemma1(v, idx));
            }
            for v in [Lemma2::ShiftN, Lemma2::ShiftK] {
                out.extend(rec_lemma2(v, idx));
            }
            for l in 0..=lmax {
                for v in [Lemma45::Hklnx, Lemma45::Hklnr, Lemma45::Hklni, Lemma45::Hklrecu, Lemma45::Hklrecu2] {
                    out.extend(rec_lemma45(v, HIndex::with_l(k, l, n)));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_instances_hold_numerically() {
        let r = rec_lemma1(Lemma1::Rec3, HIndex::new(2, 3)).unwrap();
        assert!(r.relative_residual(2.0, 1.5).unwrap() < 1e-10);
        let r = rec_lemma2(Lemma2::ShiftK, HIndex::new(3, 3)).unwrap();
        assert!(r.relative_residual(1.0, 2.0).unwrap() < 1e-10);
        let r = rec_lemma2(Lemma2::ShiftN, HIndex::new(3, 3)).unwrap();
        assert!(r.relative_residual(1.0, 2.0).unwrap() < 1e-10);
        let r = rec_lemma3(Lemma3::Hrecg, 4).unwrap();
        assert!(r.relative_residual(2.0, 1.0).unwrap() < 1e-10);
        let r = rec_lemma45(Lemma45::Hklnx, HIndex::with_l(2, 1, 3)).unwrap();
        assert!(r.relative_residual(1.5, 0.7).unwrap() < 1e-10);
    }

    #[test]
    fn recip_with_k_one() {
        let r = rec_lemma1(Lemma1::Recip, HIndex::new(1, 4)).unwrap();
        assert_eq!(r.lhs, HCombo::atom(h(0, 0, 4)));
        assert!(r.relative_residual(0.5, 5.0).unwrap() < 1e-10);
    }

    #[test]
    fn hklnr_at_l_zero_is_rec3() {
        let a = rec_lemma45(Lemma45::Hklnr, HIndex::with_l(3, 0, 4)).unwrap();
        let b = rec_lemma1(Lemma1::Rec3, HIndex::new(3, 4)).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.rhs, b.rhs);
    }

    #[test]
    fn hrecg_at_y_zero_is_gamma_recurrence() {
        let r = rec_lemma3(Lemma3::Hrecg, 3).unwrap();
        let (x, y) = (2.5, 0.0);
        let l = r.lhs.eval(x, y, true).unwrap();
        let g4 = crate::special_fn::incomplete_gamma(4.0, x).unwrap();
        assert!((l - g4).abs() < 1e-13 * g4);
        assert!(r.relative_residual(x, y).unwrap() < 1e-12);
    }

    #[test]
    fn grid_is_populated() {
        let g = relation_grid(2, 1, 3);
        assert!(g.len() > 40);
        for r in &g {
            assert!(r.relative_residual(2.0, 1.0).unwrap() < 1e-10, "{}", r.name);
        }
    }

    #[test]
    fn preconditions() {
        assert!(rec_lemma1(Lemma1::Recip, HIndex::new(0, 3)).is_err());
        assert!(rec_lemma2(Lemma2::ShiftN, HIndex::new(2, 1)).is_err());
        assert!(rec_lemma45(Lemma45::Hklni, HIndex::with_l(1, 0, 2)).is_err());
    }
}
