//! Holonomic gradient route: a Pfaffian system in x on the 3^m tensor basis
//! built from b⁰ = H^{N−1}_N(x, λ), b¹ = x^N e^{−x} 0F1(N; xλ),
//! b² = x^N e^{−x} 0F1(N+1; xλ) with N = n − m + 1.

pub mod extract;

use std::io::{self, Write};
use std::ops::{Add, Mul};

use crate::distribution::{EvalConfig, Evaluation, Method, Quantity, WishartParams};
use crate::error::{Error, Result};
use crate::h_integrals::{h_eval_series, HIndex};
use crate::ode::{dopri5, OdeOptions};
use crate::scalar::q;
use crate::special_fn::hpg01;
use crate::QRatFunc;

use extract::NumericExtraction;

pub type Block<T> = [[T; 3]; 3];

fn c2(v: i64) -> QRatFunc {
    QRatFunc::constant(2, q(v))
}

fn frac2(a: i64, b: i64) -> QRatFunc {
    QRatFunc::constant(2, q(a) / q(b))
}

/// ∂_x b = X b over (x, y): b⁰' = b¹/x, b¹' = (N/x − 1)b¹ + (y/N)b²,
/// b²' = (N/x)b¹ − b².
pub fn x_block(big_n: u32) -> Block<QRatFunc> {
    let nn = big_n as i64;
    let x = QRatFunc::var(2, 0);
    let y = QRatFunc::var(2, 1);
    let xi = x.inv();
    let nx = &xi * &c2(nn);
    [
        [c2(0), xi, c2(0)],
        [c2(0), &nx - &c2(1), &y * &frac2(1, nn)],
        [c2(0), nx, c2(-1)],
    ]
}

/// ∂_y b = Λ b: b⁰' = b⁰ − b²/N, b¹' = (x/N)b², b²' = (N/y)(b¹ − b²).
pub fn lambda_block(big_n: u32) -> Block<QRatFunc> {
    let nn = big_n as i64;
    let x = QRatFunc::var(2, 0);
    let ny = &QRatFunc::var(2, 1).inv() * &c2(nn);
    [
        [c2(1), c2(0), frac2(-1, nn)],
        [c2(0), c2(0), &x * &frac2(1, nn)],
        [c2(0), ny.clone(), -&ny],
    ]
}

fn mat_mul(a: &Block<QRatFunc>, b: &Block<QRatFunc>) -> Block<QRatFunc> {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| (0..3).fold(c2(0), |acc, k| &acc + &(&a[r][k] * &b[k][c])))
    })
}

/// ∂_y X + XΛ − ∂_x Λ − ΛX; zero iff the two directions commute.
pub fn integrability_defect(big_n: u32) -> Block<QRatFunc> {
    let (x, l) = (x_block(big_n), lambda_block(big_n));
    let (xl, lx) = (mat_mul(&x, &l), mat_mul(&l, &x));
    std::array::from_fn(|r| {
        std::array::from_fn(|c| &(&(&x[r][c].derivative(1) + &xl[r][c]) - &l[r][c].derivative(0)) - &lx[r][c])
    })
}

pub fn x_block_f64(big_n: u32, x: f64, y: f64) -> Block<f64> {
    let nn = big_n as f64;
    [[0.0, 1.0 / x, 0.0], [0.0, nn / x - 1.0, y / nn], [0.0, nn / x, -1.0]]
}

pub fn lambda_block_f64(big_n: u32, x: f64, y: f64) -> Block<f64> {
    let nn = big_n as f64;
    [[1.0, 0.0, -1.0 / nn], [0.0, 0.0, x / nn], [0.0, nn / y, -nn / y]]
}

/// out += Σ_i (I ⊗ B_i ⊗ I) v, with B_i acting on digit i (or B_iᵀ).
pub(crate) fn tensor_apply<T>(blocks: &[Block<T>], transpose: bool, v: &[T], out: &mut [T])
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let m = blocks.len();
    for (i, blk) in blocks.iter().enumerate() {
        let stride = 3usize.pow((m - 1 - i) as u32);
        for base in 0..v.len() {
            if (base / stride) % 3 != 0 {
                continue;
            }
            for r in 0..3 {
                let mut acc = out[base + r * stride].clone();
                for a in 0..3 {
                    let e = if transpose { &blk[a][r] } else { &blk[r][a] };
                    acc = &acc + &(e * &v[base + a * stride]);
                }
                out[base + r * stride] = acc;
            }
        }
    }
}

/// The system for fixed λ's, integrated in x only.
#[derive(Clone, Debug)]
pub struct PfaffianSystem {
    n: u32,
    big_n: u32,
    lambdas: Vec<f64>,
}

impl PfaffianSystem {
    pub fn new(n: u32, lambdas: &[f64]) -> Result<Self> {
        let m = lambdas.len();
        if m == 0 || n as usize <= m {
            return Err(Error::Unavailable(format!(
                "the holonomic route needs n > m >= 1 (basis parameter N = n-m+1 >= 2), got n={n}, m={m}"
            )));
        }
        Ok(PfaffianSystem { n, big_n: n - m as u32 + 1, lambdas: lambdas.to_vec() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.m() as u32)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    fn x_blocks(&self, x: f64) -> Vec<Block<f64>> {
        self.lambdas.iter().map(|&l| x_block_f64(self.big_n, x, l)).collect()
    }

    /// b' = A(x) b.
    pub fn derivative(&self, x: f64, b: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        tensor_apply(&self.x_blocks(x), false, b, out);
    }

    fn full(&self, blocks: &[Block<f64>]) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            let mut out = vec![0.0; d];
            tensor_apply(blocks, false, &e, &mut out);
            cols.push(out);
        }
        (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
    }

    /// The x-direction matrix as a dense 3^m × 3^m array.
    pub fn x_matrix(&self, x: f64) -> Vec<Vec<f64>> {
        self.full(&self.x_blocks(x))
    }

    /// The λ_i-direction matrix: the λ-block on factor i, zero elsewhere.
    pub fn lambda_matrix(&self, i: usize, x: f64) -> Vec<Vec<f64>> {
        let zero = [[0.0; 3]; 3];
        let blocks: Vec<Block<f64>> = (0..self.m())
            .map(|k| if k == i { lambda_block_f64(self.big_n, x, self.lambdas[k]) } else { zero })
            .collect();
        self.full(&blocks)
    }

    /// Basis values by direct evaluation (series for H), for x ≥ 0.
    pub fn basis_at(&self, x: f64) -> Result<Vec<f64>> {
        let nn = self.big_n;
        let per: Vec<[f64; 3]> = self
            .lambdas
            .iter()
            .map(|&l| {
                let f = x.powi(nn as i32) * (-x).exp();
                Ok([
                    h_eval_series(HIndex::new(nn - 1, nn), x, l)?,
                    f * hpg01(nn as f64, x * l)?,
                    f * hpg01(nn as f64 + 1.0, x * l)?,
                ])
            })
            .collect::<Result<_>>()?;
        let m = self.m();
        Ok((0..self.dim())
            .map(|idx| extract::digits(idx, m).iter().enumerate().map(|(i, &a)| per[i][a]).product())
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HgmState {
    pub x: f64,
    pub basis: Vec<f64>,
}

/// Basis values at 0 < x0 ≤ 1 from the series.
pub fn initial_state(sys: &PfaffianSystem, x0: f64) -> Result<HgmState> {
    if !(x0 > 0.0 && x0 <= 1.0) {
        return Err(Error::InvalidParams(format!("the starting abscissa must lie in (0, 1], got {x0}")));
    }
    Ok(HgmState { x: x0, basis: sys.basis_at(x0)? })
}

/// The state at x_target (> 0), by Dormand–Prince 5(4).
pub fn hgm_integrate(sys: &PfaffianSystem, start: &HgmState, x_target: f64, cfg: &EvalConfig) -> Result<HgmState> {
    if !(start.x > 0.0 && x_target > 0.0) {
        return Err(Error::Domain("the holonomic route integrates in x > 0 only".into()));
    }
    let opts = OdeOptions::new(cfg.rtol, cfg.atol);
    let (basis, _) = dopri5(|x, b: &[f64], o: &mut [f64]| sys.derivative(x, b, o), start.x, &start.basis, x_target, &opts)?;
    Ok(HgmState { x: x_target, basis })
}

/// One point of a trajectory. `r` is R = ψ·((n−m)!)^m ∏_{i<k}(λ_i−λ_k)/e^{−Σλ}.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub x: f64,
    pub basis: Vec<f64>,
    pub cdf: f64,
    pub pdf: f64,
    pub r: f64,
    pub cdf_err: f64,
    pub pdf_err: f64,
}

struct Route {
    sys: PfaffianSystem,
    ext: NumericExtraction,
    front: f64,
    vandermonde: f64,
}

impl Route {
    fn new(p: &WishartParams, cfg: &EvalConfig) -> Result<Self> {
        cfg.validate()?;
        if !(cfg.hgm_x0 > 0.0 && cfg.hgm_x0 <= 1.0) {
            return Err(Error::InvalidParams(format!("hgm_x0 must lie in (0, 1], got {}", cfg.hgm_x0)));
        }
        let ext = NumericExtraction::new(p.n(), p.lambdas(), cfg.tol(p))?;
        let sys = PfaffianSystem::new(p.n(), &ext.centers())?;
        let l = p.lambdas();
        let mut vandermonde = 1.0;
        for i in 0..l.len() {
            for k in i + 1..l.len() {
                vandermonde *= l[i] - l[k];
            }
        }
        Ok(Route { sys, ext, front: p.front(), vandermonde })
    }

    fn row(&self, st: &HgmState, rtol: f64) -> Result<TrajectoryRow> {
        let x = st.x;
        let (w, dw) = self.ext.eval(x)?;
        let mut ab = vec![0.0; st.basis.len()];
        self.sys.derivative(x, &st.basis, &mut ab);
        let (mut d, mut dd, mut mag, mut dmag) = (0.0, 0.0, 0.0, 0.0);
        for a in 0..w.len() {
            let t = w[a] * st.basis[a];
            let dt = dw[a] * st.basis[a] + w[a] * ab[a];
            d += t;
            dd += dt;
            mag += t.abs();
            dmag += (dw[a] * st.basis[a]).abs() + (w[a] * ab[a]).abs();
        }
        let s = self.front * self.ext.scale();
        let rel = 10.0 * rtol.max(1e-15);
        let pdf = s * dd;
        Ok(TrajectoryRow {
            x,
            basis: st.basis.clone(),
            cdf: s * d,
            pdf,
            r: pdf * self.vandermonde / self.front,
            cdf_err: (s * mag).abs() * rel,
            pdf_err: (s * dmag).abs() * rel,
        })
    }

    fn at_zero(&self) -> TrajectoryRow {
        let d = self.sys.dim();
        TrajectoryRow { x: 0.0, basis: vec![0.0; d], cdf: 0.0, pdf: 0.0, r: 0.0, cdf_err: 0.0, pdf_err: 0.0 }
    }
}

/// Rows for every x (any order, x ≥ 0), returned in input order. Points at
/// or below the start are evaluated from the series; the rest lie on one
/// trajectory through the sorted grid.
pub fn trajectory(p: &WishartParams, xs: &[f64], cfg: &EvalConfig) -> Vec<Result<TrajectoryRow>> {
    let route = match Route::new(p, cfg) {
        Ok(r) => r,
        Err(e) => return xs.iter().map(|_| Err(e.clone())).collect(),
    };
    let mut out: Vec<Option<Result<TrajectoryRow>>> = vec![None; xs.len()];
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let x0 = cfg.hgm_x0;
    let mut state: Result<Option<HgmState>> = Ok(None);
    for i in order {
        let x = xs[i];
        let r = if !(x >= 0.0) || !x.is_finite() {
            Err(Error::Domain(format!("x must be finite and >= 0, got {x}")))
        } else if x == 0.0 {
            Ok(route.at_zero())
        } else if x <= x0 {
            route.sys.basis_at(x).and_then(|b| route.row(&HgmState { x, basis: b }, cfg.rtol))
        } else {
            let next = match &state {
                Err(e) => Err(e.clone()),
                Ok(prev) => {
                    let start = match prev {
                        Some(s) => Ok(s.clone()),
                        None => initial_state(&route.sys, x0),
                    };
                    start.and_then(|s| hgm_integrate(&route.sys, &s, x, cfg))
                }
            };
            state = next.clone().map(Some);
            next.and_then(|s| route.row(&s, cfg.rtol))
        };
        out[i] = Some(r);
    }
    out.into_iter().map(|r| r.unwrap()).collect()
}

fn evaluation(q: Quantity, r: &TrajectoryRow) -> Result<Evaluation> {
    let (value, err_est) = match q {
        Quantity::Cdf => (r.cdf, r.cdf_err),
        Quantity::Pdf => (r.pdf, r.pdf_err),
    };
    if !value.is_finite() {
        return Err(Error::Domain("hgm route produced a non-finite value".into()));
    }
    Ok(Evaluation { value, err_est, method: Method::Hgm })
}

pub fn eval_grid(q: Quantity, p: &WishartParams, xs: &[f64], cfg: &EvalConfig) -> Vec<Result<Evaluation>> {
    trajectory(p, xs, cfg).into_iter().map(|r| r.and_then(|r| evaluation(q, &r))).collect()
}

pub fn cdf(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    eval_grid(Quantity::Cdf, p, &[x], cfg).pop().unwrap()
}

pub fn pdf(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    eval_grid(Quantity::Pdf, p, &[x], cfg).pop().unwrap()
}

/// CSV with columns x, b0 … b{3^m−1}, cdf, R, psi.
pub fn write_trajectory_csv<W: Write>(w: &mut W, rows: &[TrajectoryRow]) -> io::Result<()> {
    let d = rows.first().map(|r| r.basis.len()).unwrap_or(0);
    let mut head = vec!["x".to_string()];
    head.extend((0..d).map(|i| format!("b{i}")));
    head.extend(["cdf", "R", "psi"].map(String::from));
    writeln!(w, "{}", head.join(","))?;
    for r in rows {
        let mut f = vec![format!("{:.16e}", r.x)];
        f.extend(r.basis.iter().map(|v| format!("{v:.16e}")));
        f.extend([r.cdf, r.r, r.pdf].iter().map(|v| format!("{v:.16e}")));
        writeln!(w, "{}", f.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
