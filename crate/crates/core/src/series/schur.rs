//! Determinants of power series (Cauchy–Binet over monomial determinants)
//! and Schur polynomials as bialternant quotients.

use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::linalg::{det_cofactor, permutations};
use crate::scalar::q;
use crate::{QExpPoly, QPoly};

use super::LambdaSeries;

/// det(λ_i^{e_j}) as a polynomial in m variables.
pub fn alternant_poly(exps: &[u32]) -> QPoly {
    let m = exps.len();
    let mut p = QPoly::zero(m);
    for (perm, sign) in permutations(m) {
        let mut e = vec![0u32; m];
        for (i, &j) in perm.iter().enumerate() {
            e[i] = exps[j];
        }
        p.add_term(e, q(sign));
    }
    p
}

/// det(λ_i^{j−1}) = ∏_{i<j} (λ_j − λ_i).
pub fn vandermonde_poly(m: usize) -> QPoly {
    alternant_poly(&(0..m as u32).collect::<Vec<_>>())
}

static SCHUR_CACHE: Lazy<Mutex<HashMap<Vec<u32>, QPoly>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Schur polynomial s_μ in m = μ.len() variables, μ weakly decreasing,
/// computed as det(λ_i^{μ_j+m−j}) / det(λ_i^{m−j}).
pub fn schur_poly(mu: &[u32]) -> Result<QPoly> {
    if mu.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParams(format!("partition {mu:?} is not weakly decreasing")));
    }
    if let Some(p) = SCHUR_CACHE.lock().unwrap().get(mu) {
        return Ok(p.clone());
    }
    let m = mu.len();
    let shifted: Vec<u32> = (0..m).map(|j| mu[m - 1 - j] + j as u32).collect();
    let num = alternant_poly(&shifted);
    let s = num
        .div_exact(&vandermonde_poly(m))
        .ok_or_else(|| Error::DivisionMismatch(format!("alternant for {mu:?} not divisible by the Vandermonde")))?;
    SCHUR_CACHE.lock().unwrap().insert(mu.to_vec(), s.clone());
    Ok(s)
}

/// Σ_q D_q(x)·det(λ_i^{q_j}) over strictly increasing q with |q| ≤ order.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurExpansion {
    m: usize,
    order: usize,
    entries: Vec<(Vec<u32>, QExpPoly)>,
}

impl SchurExpansion {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[(Vec<u32>, QExpPoly)] {
        &self.entries
    }

    pub fn coeff(&self, qs: &[u32]) -> QExpPoly {
        self.entries.iter().find(|(e, _)| e == qs).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Coefficient-wise d/dx.
    pub fn diff_x(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(e, c)| (e.clone(), c.differentiate()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        SchurExpansion { m: self.m, order: self.order, entries }
    }

    /// Every D_q multiplied by `f`.
    pub fn scale(&self, f: &QExpPoly) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(e, c)| (e.clone(), c * f))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        SchurExpansion { m: self.m, order: self.order, entries }
    }

    /// The antisymmetric series Σ D_q det(λ_i^{q_j}).
    pub fn to_series(&self) -> LambdaSeries {
        let mut s = LambdaSeries::zero(self.m, self.order);
        for (qs, d) in &self.entries {
            for (perm, sign) in permutations(self.m) {
                let e: Vec<u32> = perm.iter().map(|&j| qs[j]).collect();
                s.add_term(e, d.scale(&q(sign)));
            }
        }
        s
    }

    /// Σ D_q s_{μ(q)}, i.e. the series divided by det(λ_i^{j−1}); exact to
    /// order − m(m−1)/2.
    pub fn divide_vandermonde(&self) -> Result<LambdaSeries> {
        let shift = self.m * (self.m - 1) / 2;
        let mut s = LambdaSeries::zero(self.m, self.order.saturating_sub(shift));
        for (qs, d) in &self.entries {
            let mu: Vec<u32> = (0..self.m).map(|i| qs[self.m - 1 - i] - (self.m - 1 - i) as u32).collect();
            for (e, c) in schur_poly(&mu)?.terms() {
                s.add_term(e.clone(), d.scale(c));
            }
        }
        Ok(s)
    }
}

/// Strictly increasing tuples of length m with sum ≤ order, lexicographic.
fn increasing_tuples(m: usize, order: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, m: usize, budget: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let start = prefix.last().map(|&v| v + 1).unwrap_or(0);
        let left = m - prefix.len();
        // remaining entries are at least v, v+1, ..., v+left−1
        let mut v = start;
        while left * v as usize + left * (left - 1) / 2 <= budget {
            prefix.push(v);
            rec(prefix, m, budget - v as usize, out);
            prefix.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), m, order, &mut out);
    out
}

fn det_exp(a: &[Vec<QExpPoly>]) -> QExpPoly {
    det_cofactor(a, &QExpPoly::zero(), &|v| v.is_zero(), &|x, y| x * y, &|x, y| x + y, &|x| x.scale(&q(-1)))
}

/// Expands det(f_i(λ_j)) for f_i = Σ_j rows[i][j] y^j as Σ_q det(c^{(i)}_{q_j}) det(λ_i^{q_j}).
pub fn det_series(rows: &[Vec<QExpPoly>], order: usize) -> Result<SchurExpansion> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::InvalidParams("determinant of an empty matrix".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() < order + 1) {
        return Err(Error::Precondition(format!("row has {} coefficients, need {}", r.len(), order + 1)));
    }
    let mut entries = Vec::new();
    for qs in increasing_tuples(m, order) {
        let mat: Vec<Vec<QExpPoly>> =
            rows.iter().map(|row| qs.iter().map(|&j| row[j as usize].clone()).collect()).collect();
        let d = det_exp(&mat);
        if !d.is_zero() {
            entries.push((qs, d));
        }
    }
    Ok(SchurExpansion { m, order, entries })
}

/// Reads the D_q off an antisymmetric series and checks that Σ D_q det(λ_i^{q_j})
/// reproduces it exactly.
pub fn split_antisymmetric(s: &LambdaSeries) -> Result<SchurExpansion> {
    let m = s.m();
    let entries: Vec<(Vec<u32>, QExpPoly)> = s
        .terms()
        .filter(|(e, _)| e.windows(2).all(|w| w[0] < w[1]))
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    let exp = SchurExpansion { m, order: s.order(), entries };
    if exp.to_series() != *s {
        return Err(Error::DivisionMismatch("series is not antisymmetric".into()));
    }
    Ok(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_are_strict_and_bounded() {
        let t = increasing_tuples(3, 5);
        assert!(t.iter().all(|v| v[0] < v[1] && v[1] < v[2] && v.iter().sum::<u32>() <= 5));
        assert_eq!(t.len(), 4); // 012 013 014 023
    }

    #[test]
    fn schur_small_cases() {
        // s_(1,0) = λ1 + λ2, s_(1,1) = λ1 λ2, s_(2,0) = λ1² + λ1λ2 + λ2²
        let s10 = schur_poly(&[1, 0]).unwrap();
        assert_eq!(s10, QPoly::var(2, 0) + QPoly::var(2, 1));
        assert_eq!(schur_poly(&[1, 1]).unwrap(), QPoly::var(2, 0) * QPoly::var(2, 1));
        assert_eq!(schur_poly(&[2, 0]).unwrap().len(), 3);
        // s_(2,1) in three variables: six monomials λi²λj plus 2·λ1λ2λ3
        let s21 = schur_poly(&[2, 1, 0]).unwrap();
        assert_eq!(s21.len(), 7);
        assert_eq!(s21.coeff(&[1, 1, 1]), q(2));
        assert!(schur_poly(&[0, 1]).is_err());
    }

    #[test]
    fn identical_rows_vanish() {
        let row: Vec<QExpPoly> = (0..6).map(|j| QExpPoly::monomial(q(j + 1), j as i32, 0)).collect();
        let e = det_series(&[row.clone(), row], 5).unwrap();
        assert!(e.entries().is_empty());
    }

    #[test]
    fn single_row_is_plain_series() {
        let row: Vec<QExpPoly> = (0..5).map(|j| QExpPoly::monomial(q(j + 2), 0, 1)).collect();
        let s = det_series(&[row.clone()], 4).unwrap().to_series();
        for (j, c) in row.iter().enumerate() {
            assert_eq!(&s.coeff(&[j as u32]), c);
        }
    }

    #[test]
    fn expansion_matches_direct_determinant() {
        // f_i(y) = Σ a_ij y^j polynomials; compare det(f_i(λ_j)) numerically
        let rows: Vec<Vec<QExpPoly>> = vec![
            vec![1, 2, 0, 1].into_iter().map(|v| QExpPoly::constant(q(v))).collect(),
            vec![0, 1, 3, 1].into_iter().map(|v| QExpPoly::constant(q(v))).collect(),
            vec![2, 0, 1, 5].into_iter().map(|v| QExpPoly::constant(q(v))).collect(),
        ];
        let e = det_series(&rows, 3).unwrap();
        let lam = [0.3, -0.7, 1.1];
        let f = |r: &Vec<QExpPoly>, y: f64| -> f64 {
            r.iter().enumerate().map(|(j, c)| c.eval_naive(0.0) * y.powi(j as i32)).sum()
        };
        let mat: Vec<Vec<f64>> = rows.iter().map(|r| lam.iter().map(|&l| f(r, l)).collect()).collect();
        let direct = crate::linalg::det_lu(mat);
        // every triple has sum ≤ 6 here, so expand with the full order
        let full = det_series(&rows.iter().map(|r| {
            let mut r = r.clone();
            r.resize(7, QExpPoly::zero());
            r
        }).collect::<Vec<_>>(), 6).unwrap();
        let v = full.to_series().eval(0.5, &lam).unwrap();
        assert!((v - direct).abs() < 1e-12 * direct.abs().max(1.0), "{v} vs {direct}");
        assert!(e.entries().iter().all(|(qs, _)| qs.iter().sum::<u32>() <= 3));
    }

    #[test]
    fn split_detects_asymmetry() {
        let mut s = LambdaSeries::zero(2, 3);
        s.add_term(vec![0, 1], QExpPoly::one());
        assert!(split_antisymmetric(&s).is_err());
        s.add_term(vec![1, 0], QExpPoly::constant(q(-1)));
        let e = split_antisymmetric(&s).unwrap();
        assert_eq!(e.divide_vandermonde().unwrap().coeff(&[0, 0]), QExpPoly::one());
    }
}
