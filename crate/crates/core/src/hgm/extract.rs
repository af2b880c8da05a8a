//! Coefficients of the determinant numerator D = det(H^{n−j}_N(x, λ_i)) and of
//! R = ∂_x D over the tensor basis ∏_i b^{α_i}(x, λ_i).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::distribution::confluent::{clusters, complete_homogeneous};
use crate::error::{Error, Result};
use crate::h_integrals::{basis_coefficients, reduce_to_basis, HIndex};
use crate::linalg::{det_cofactor, det_lu};
use crate::scalar::q;
use crate::{QPoly, QRatFunc};

use super::{lambda_block, tensor_apply, x_block, Block};

/// [c₀, c₁, c₂] with H^k_N = c₀b⁰ + c₁b¹ + c₂b², in (x, y).
pub fn entry_coefficients(k: u32, big_n: u32) -> Result<[QRatFunc; 3]> {
    basis_coefficients(&reduce_to_basis(HIndex::new(k, big_n), big_n)?, big_n)
}

/// (x, y) ↦ (x, λ_i) inside the ring in (x, λ₁, …, λ_m).
fn embed(r: &QRatFunc, m: usize, i: usize) -> QRatFunc {
    let nv = m + 1;
    let subs = [QPoly::var(nv, 0), QPoly::var(nv, 1 + i)];
    QRatFunc::new(r.num().compose(&subs), r.den().compose(&subs))
}

fn embed_block(b: &Block<QRatFunc>, m: usize, i: usize) -> Block<QRatFunc> {
    std::array::from_fn(|r| std::array::from_fn(|c| embed(&b[r][c], m, i)))
}

fn det_rat(a: &[Vec<QRatFunc>]) -> QRatFunc {
    let zero = QRatFunc::zero(a[0][0].nvars());
    det_cofactor(a, &zero, &|v| v.is_zero(), &|x, y| x * y, &|x, y| x + y, &|x| -x)
}

pub(crate) fn digits(mut idx: usize, m: usize) -> Vec<usize> {
    let mut d = vec![0; m];
    for i in (0..m).rev() {
        d[i] = idx % 3;
        idx /= 3;
    }
    d
}

fn check(n: u32, m: usize) -> Result<u32> {
    if m == 0 || n as usize <= m {
        return Err(Error::InvalidParams(format!("the tensor basis needs n > m >= 1, got n={n}, m={m}")));
    }
    Ok(n - m as u32 + 1)
}

/// Coefficients of D over the 3^m basis (variable 1 is the leading digit),
/// as rational functions of (x, λ₁, …, λ_m).
pub fn d_extraction(n: u32, m: usize) -> Result<Vec<QRatFunc>> {
    let big_n = check(n, m)?;
    let cols: Vec<[QRatFunc; 3]> = (1..=m as u32).map(|j| entry_coefficients(n - j, big_n)).collect::<Result<_>>()?;
    let rows: Vec<Vec<[QRatFunc; 3]>> = (0..m)
        .map(|i| cols.iter().map(|c| std::array::from_fn(|a| embed(&c[a], m, i))).collect())
        .collect();
    Ok((0..3usize.pow(m as u32))
        .map(|idx| {
            let d = digits(idx, m);
            let mat: Vec<Vec<QRatFunc>> = (0..m).map(|i| rows[i].iter().map(|c| c[d[i]].clone()).collect()).collect();
            det_rat(&mat)
        })
        .collect())
}

/// c ↦ ∂_x c + Aᵀc: the coefficients of ∂_x(c·b) when b' = Ab.
pub fn x_derivative(c: &[QRatFunc], n: u32, m: usize) -> Result<Vec<QRatFunc>> {
    let big_n = check(n, m)?;
    let blocks: Vec<Block<QRatFunc>> = (0..m).map(|i| embed_block(&x_block(big_n), m, i)).collect();
    let mut out: Vec<QRatFunc> = c.iter().map(|v| v.derivative(0)).collect();
    tensor_apply(&blocks, true, c, &mut out);
    Ok(out)
}

/// Coefficients of R = ∂_x D.
pub fn r_extraction(n: u32, m: usize) -> Result<Vec<QRatFunc>> {
    x_derivative(&d_extraction(n, m)?, n, m)
}

fn rf(c: i64) -> QRatFunc {
    QRatFunc::constant(3, q(c))
}

fn var3(i: usize) -> QRatFunc {
    QRatFunc::var(3, i)
}

/// Basis positions of the printed eight-term list, in printed order.
pub const M2_ORDER: [[usize; 2]; 8] = [[0, 1], [0, 2], [1, 0], [2, 0], [1, 1], [1, 2], [2, 1], [2, 2]];

/// The printed coefficients of R_{n,2} and of (n−1)∂R_{n,2}/∂x, over
/// (x, λ₁, λ₂).
pub fn printed_m2_tables(n: u32) -> ([QRatFunc; 8], [QRatFunc; 8]) {
    let (x, l1, l2) = (var3(0), var3(1), var3(2));
    let inv = QRatFunc::constant(3, q(1) / q(n as i64 - 1));
    let a1 = &(&(&l1 - &x) * &inv) + &rf(1);
    let a2 = &(&(&l2 - &x) * &inv) + &rf(1);
    let xo = &(&x * &inv) - &rf(1);
    let r = [a1.clone(), rf(0), -&a2, rf(0), rf(0), xo.clone(), -&xo, rf(0)];
    let dr = [
        rf(-1),
        &l2 * &a1,
        rf(1),
        -&(&l1 * &a2),
        rf(0),
        &rf(1) - &l2,
        &l1 - &rf(1),
        &(&l1 - &l2) * &xo,
    ];
    (r, dr)
}

/// The derived tables in printed order and normalisation: printed entries
/// multiply x^{n−2}e^{−x}·H^{n−2}_{n−1} and x^{2n−3}e^{−2x}·0F1·0F1, so a
/// printed coefficient is x times the coefficient over b.
pub fn derived_m2_tables(n: u32) -> Result<([QRatFunc; 8], [QRatFunc; 8])> {
    let r = r_extraction(n, 2)?;
    let dr = x_derivative(&r, n, 2)?;
    let r = to_printed_basis(&r, n)?;
    let dr = to_printed_basis(&dr, n)?;
    let nm1 = QRatFunc::constant(3, q(n as i64 - 1));
    let pick = |v: &[QRatFunc], s: &QRatFunc| -> [QRatFunc; 8] {
        std::array::from_fn(|e| &v[3 * M2_ORDER[e][0] + M2_ORDER[e][1]] * s)
    };
    Ok((pick(&r, &QRatFunc::one(3)), pick(&dr, &nm1)))
}

// Re-expands m=2 coefficients over p⁰ = H^{n−1}_n, p¹ = b¹, p² = b², times x: the
// table's H-terms carry x^{n−2}e^{−x} and its 0F1 products x^{2n−3}e^{−2x}.
fn to_printed_basis(v: &[QRatFunc], n: u32) -> Result<Vec<QRatFunc>> {
    let big_n = n - 1;
    let c = basis_coefficients(&reduce_to_basis(HIndex::new(n - 1, n), big_n)?, big_n)?;
    let c0inv = c[0].inv();
    let zero = QRatFunc::zero(2);
    let one = QRatFunc::one(2);
    let t: Block<QRatFunc> = [
        [c0inv.clone(), -&(&c[1] * &c0inv), -&(&c[2] * &c0inv)],
        [zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero, one],
    ];
    let t = [embed_block(&t, 2, 0), embed_block(&t, 2, 1)];
    let x = QRatFunc::var(3, 0);
    let mut out = vec![QRatFunc::zero(3); 9];
    for (a, w) in v.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let (a0, a1) = (a / 3, a % 3);
        for b0 in 0..3 {
            for b1 in 0..3 {
                let f = &t[0][a0][b0] * &t[1][a1][b1];
                if !f.is_zero() {
                    out[3 * b0 + b1] = &out[3 * b0 + b1] + &(&(w * &f) * &x);
                }
            }
        }
    }
    Ok(out)
}

/// Entry-wise equality of derived and printed tables: (R row, ∂R row).
pub fn m2_table_matches(n: u32) -> Result<([bool; 8], [bool; 8])> {
    let (pr, pdr) = printed_m2_tables(n);
    let (dr, ddr) = derived_m2_tables(n)?;
    Ok((std::array::from_fn(|e| pr[e] == dr[e]), std::array::from_fn(|e| pdr[e] == ddr[e])))
}

type TaylorKey = (u32, usize, usize);
type TaylorRows = Arc<Vec<Vec<[QRatFunc; 3]>>>;
static TAYLOR: Lazy<Mutex<HashMap<TaylorKey, (TaylorRows, TaylorRows)>>> = Lazy::new(|| Mutex::new(HashMap::new()));

// u[j][s]: y-Taylor coefficient s of column j over b(x, y), and its x-derivative.
// ∂_y(u·b) = (∂_y u + uΛ)·b.
fn taylor_rows(n: u32, m: usize, smax: usize) -> Result<(TaylorRows, TaylorRows)> {
    let key = (n, m, smax);
    if let Some(v) = TAYLOR.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let big_n = check(n, m)?;
    let lam = lambda_block(big_n);
    let mut u = Vec::with_capacity(m);
    for j in 1..=m as u32 {
        let mut col = vec![entry_coefficients(n - j, big_n)?];
        for s in 0..smax {
            let prev = col.last().unwrap();
            let inv = QRatFunc::constant(2, q(1) / q(s as i64 + 1));
            let next: [QRatFunc; 3] = std::array::from_fn(|c| {
                let mut acc = prev[c].derivative(1);
                for (a, pa) in prev.iter().enumerate() {
                    if !lam[a][c].is_zero() && !pa.is_zero() {
                        acc = &acc + &(pa * &lam[a][c]);
                    }
                }
                &acc * &inv
            });
            col.push(next);
        }
        u.push(col);
    }
    let du: Vec<Vec<[QRatFunc; 3]>> =
        u.iter().map(|col| col.iter().map(|c| std::array::from_fn(|a| c[a].derivative(0))).collect()).collect();
    let v = (Arc::new(u), Arc::new(du));
    TAYLOR.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

const EXTRA_TAYLOR: usize = 6;

struct RowSpec {
    center: f64,
    t: usize,
    h: Vec<f64>,
}

/// Numeric extraction for fixed λ's, with coincident or nearly coincident
/// λ's replaced by divided differences taken at their cluster mean.
pub struct NumericExtraction {
    m: usize,
    rows: Vec<RowSpec>,
    scale: f64,
    u: TaylorRows,
    du: TaylorRows,
}

impl NumericExtraction {
    /// `points` sorted descending; `tol` is the clustering gap.
    pub fn new(n: u32, points: &[f64], tol: f64) -> Result<Self> {
        let m = points.len();
        let id = clusters(points, tol);
        let mut rows = Vec::with_capacity(m);
        let mut scale = 1.0;
        let mut any_spread = false;
        let mut a = 0;
        while a < m {
            let mut b = a;
            while b + 1 < m && id[b + 1] == id[a] {
                b += 1;
            }
            let size = b - a + 1;
            let c = points[a..=b].iter().sum::<f64>() / size as f64;
            let z: Vec<f64> = points[a..=b].iter().map(|p| p - c).collect();
            any_spread |= z.iter().any(|v| *v != 0.0);
            if (size * (size - 1) / 2) % 2 == 1 {
                scale = -scale;
            }
            for t in 0..size {
                let h = if z[..=t].iter().all(|v| *v == 0.0) {
                    vec![1.0]
                } else {
                    complete_homogeneous(&z[..=t], EXTRA_TAYLOR)
                };
                rows.push(RowSpec { center: c, t, h });
            }
            a = b + 1;
        }
        for i in 0..m {
            for k in i + 1..m {
                if id[i] != id[k] {
                    scale /= points[i] - points[k];
                }
            }
        }
        let smax = m - 1 + if any_spread { EXTRA_TAYLOR } else { 0 };
        let (u, du) = taylor_rows(n, m, smax)?;
        Ok(NumericExtraction { m, rows, scale, u, du })
    }

    /// The λ at which each tensor factor is evaluated.
    pub fn centers(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.center).collect()
    }

    /// Sign and inter-cluster Vandermonde factor multiplying Σ w_α B_α.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    // W_i[a][j] and its x-derivative
    fn row(&self, i: usize, x: f64) -> Result<([Vec<f64>; 3], [Vec<f64>; 3])> {
        let r = &self.rows[i];
        let mut w: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; self.m]);
        let mut dw: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; self.m]);
        let pt = [x, r.center];
        for j in 0..self.m {
            for (s, hs) in r.h.iter().enumerate() {
                if *hs == 0.0 {
                    continue;
                }
                let (u, du) = (&self.u[j][r.t + s], &self.du[j][r.t + s]);
                for a in 0..3 {
                    w[a][j] += hs * u[a].eval_f64(&pt);
                    dw[a][j] += hs * du[a].eval_f64(&pt);
                }
            }
        }
        if w.iter().chain(&dw).flatten().any(|v| !v.is_finite()) {
            return Err(Error::Unavailable(format!(
                "basis coefficients are singular at λ = {} (the holonomic route needs λ > 0)",
                r.center
            )));
        }
        Ok((w, dw))
    }

    /// (w, ∂_x w): coefficients of the divided-difference numerator.
    pub fn eval(&self, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let rows: Vec<_> = (0..self.m).map(|i| self.row(i, x)).collect::<Result<_>>()?;
        let dim = 3usize.pow(self.m as u32);
        let mut w = vec![0.0; dim];
        let mut dw = vec![0.0; dim];
        for idx in 0..dim {
            let d = digits(idx, self.m);
            let mat: Vec<Vec<f64>> = (0..self.m).map(|i| rows[i].0[d[i]].clone()).collect();
            w[idx] = det_lu(mat.clone());
            for i in 0..self.m {
                let mut mi = mat.clone();
                mi[i] = rows[i].1[d[i]].clone();
                dw[idx] += det_lu(mi);
            }
        }
        Ok((w, dw))
    }
}
