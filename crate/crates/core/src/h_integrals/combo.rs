//! ℚ(x,y)-linear combinations of H-integrals and boundary functions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::q;
use crate::special_fn::hpg01;
use crate::{QPoly, QRatFunc};

use super::{h_eval, h_eval_series, HIndex};

/// A function the combination is linear over. Boundary atoms stand for
/// e^{−x}·0F1(ν; xy); powers of x live in the coefficient.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    H(HIndex),
    Boundary { nu: u32 },
}

impl Atom {
    pub fn h(k: u32, n: u32) -> Self {
        Atom::H(HIndex::new(k, n))
    }

    pub fn eval(&self, x: f64, y: f64, prefer_series: bool) -> Result<f64> {
        match *self {
            Atom::H(idx) if prefer_series && idx.l == 0 => h_eval_series(idx, x, y),
            Atom::H(idx) => h_eval(idx, x, y),
            Atom::Boundary { nu } => {
                if nu == 0 {
                    return Err(Error::Domain("0F1 with parameter 0".into()));
                }
                Ok((-x).exp() * hpg01(nu as f64, x * y)?)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::H(idx) => write!(f, "{idx}"),
            Atom::Boundary { nu } => write!(f, "e^(-x)*0F1({nu};x*y)"),
        }
    }
}

/// Coefficient ring helpers in the variables (x, y).
pub(crate) fn cx() -> QRatFunc {
    QRatFunc::var(2, 0)
}

pub(crate) fn cy() -> QRatFunc {
    QRatFunc::var(2, 1)
}

pub(crate) fn cn(v: i64) -> QRatFunc {
    QRatFunc::constant(2, q(v))
}

pub(crate) fn xpow(a: u32) -> QRatFunc {
    QRatFunc::from_poly(QPoly::var(2, 0).pow(a))
}

/// Σ coefficient·atom with coefficients in ℚ(x, y).
#[derive(Clone, Debug, Default)]
pub struct HCombo {
    terms: BTreeMap<Atom, QRatFunc>,
}

impl HCombo {
    pub fn zero() -> Self {
        HCombo { terms: BTreeMap::new() }
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(cn(1), a)
    }

    pub fn term(c: QRatFunc, a: Atom) -> Self {
        let mut out = Self::zero();
        out.add_term(c, a);
        out
    }

    pub fn add_term(&mut self, c: QRatFunc, a: Atom) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&a) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(a, merged);
        }
    }

    pub fn add(&mut self, other: &HCombo) {
        for (a, c) in &other.terms {
            self.add_term(c.clone(), *a);
        }
    }

    pub fn add_scaled(&mut self, other: &HCombo, s: &QRatFunc) {
        for (a, c) in &other.terms {
            self.add_term(c * s, *a);
        }
    }

    pub fn scaled(&self, s: &QRatFunc) -> HCombo {
        let mut out = HCombo::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn neg(&self) -> HCombo {
        self.scaled(&cn(-1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &QRatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &Atom) -> QRatFunc {
        self.terms.get(a).cloned().unwrap_or_else(|| QRatFunc::zero(2))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replaces every atom `a` with `f(a)` when it returns `Some`.
    pub fn substitute(&self, f: &mut impl FnMut(&Atom) -> Option<HCombo>) -> HCombo {
        let mut out = HCombo::zero();
        for (a, c) in &self.terms {
            match f(a) {
                Some(rep) => out.add_scaled(&rep, c),
                None => out.add_term(c.clone(), *a),
            }
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64, prefer_series: bool) -> Result<f64> {
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            acc += c.eval_f64(&[x, y]) * a.eval(x, y, prefer_series)?;
        }
        Ok(acc)
    }

    /// Sum of |coefficient·atom|, the scale against which residuals are judged.
    pub fn eval_abs(&self, x: f64, y: f64, prefer_series: bool) -> Result<f64> {
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            acc += (c.eval_f64(&[x, y]) * a.eval(x, y, prefer_series)?).abs();
        }
        Ok(acc)
    }
}

impl PartialEq for HCombo {
    fn eq(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<&Atom> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|a| self.coeff(a) == other.coeff(a))
    }
}

impl fmt::Display for HCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(a, c)| format!("[{}]*{a}", c.fmt_with(&["x", "y"]))).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// An identity `lhs = rhs` between combinations.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: HCombo,
    pub rhs: HCombo,
}

impl Relation {
    /// |lhs − rhs| relative to the larger of the two sides' absolute term sums.
    pub fn relative_residual(&self, x: f64, y: f64) -> Result<f64> {
        let l = self.lhs.eval(x, y, false)?;
        let r = self.rhs.eval(x, y, false)?;
        let scale = self.lhs.eval_abs(x, y, false)?.max(self.rhs.eval_abs(x, y, false)?);
        if scale == 0.0 {
            return Ok((l - r).abs());
        }
        Ok((l - r).abs() / scale)
    }

    /// `lhs − rhs` as one combination.
    pub fn difference(&self) -> HCombo {
        let mut d = self.lhs.clone();
        d.add(&self.rhs.neg());
        d
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)
    }
}
