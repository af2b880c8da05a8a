//! Monte Carlo reference for the largest eigenvalue: draw X = V + G with
//! circularly symmetric unit-variance complex Gaussian G, diagonalise X*X.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distribution::WishartParams;
use crate::error::{Error, Result};

/// Draws per RNG substream; substream k uses ChaCha8 stream k of the seed.
pub const CHUNK: usize = 4096;

/// Two-sided 99.9% standard normal quantile.
pub const Z_999: f64 = 3.2905267314919255;

pub const MAX_SWEEPS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 100_000, seed: 0x5eed, bins: 50 }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.bins == 0 {
            return Err(Error::InvalidParams("samples and bins must be positive".into()));
        }
        Ok(())
    }
}

// One CN(0, 1) draw: Box–Muller gives real and imaginary parts of variance 1/2.
fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    Complex64::from_polar((-u.ln()).sqrt(), std::f64::consts::TAU * v)
}

/// All eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi.
pub fn hermitian_eigenvalues(a: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let m = a.len();
    if a.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidParams("matrix must be square".into()));
    }
    let norm = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for i in 0..m {
        for j in 0..=i {
            if (a[i][j] - a[j][i].conj()).norm() > 1e-12 * norm.max(1.0) {
                return Err(Error::InvalidParams("matrix is not Hermitian".into()));
            }
        }
    }
    let mut a = a.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = Complex64::new(row[i].re, 0.0);
    }
    let off = |a: &[Vec<Complex64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    s += a[i][j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let target = 1e-13 * norm;
    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { what: "Hermitian Jacobi", iterations: MAX_SWEEPS });
        }
        sweeps += 1;
        for p in 0..m {
            for q in p + 1..m {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i][i].re).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

// Zeroes a[p][q]: a phase on column q makes it real, then a real Jacobi rotation.
fn rotate(a: &mut [Vec<Complex64>], p: usize, q: usize) {
    let b = a[p][q].norm();
    if b == 0.0 {
        return;
    }
    let m = a.len();
    let ph = a[p][q] / b;
    for row in a.iter_mut() {
        row[q] *= ph.conj();
    }
    for k in 0..m {
        a[q][k] *= ph;
    }
    let (app, aqq) = (a[p][p].re, a[q][q].re);
    let tau = (aqq - app) / (2.0 * b);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * c - y * s;
        row[q] = x * s + y * c;
    }
    for k in 0..m {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = x * c - y * s;
        a[q][k] = x * s + y * c;
    }
    a[p][p] = Complex64::new(app - t * b, 0.0);
    a[q][q] = Complex64::new(aqq + t * b, 0.0);
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
}

pub fn hermitian_eig_max(a: &[Vec<Complex64>]) -> Result<f64> {
    hermitian_eigenvalues(a)?.last().copied().ok_or_else(|| Error::InvalidParams("empty matrix".into()))
}

/// S = X*X for one draw of the n × m matrix X = V + G, V = diag(√λ) padded.
pub fn draw_scatter<R: Rng>(p: &WishartParams, rng: &mut R) -> Vec<Vec<Complex64>> {
    let (n, m) = (p.n() as usize, p.m());
    let l = p.lambdas();
    let mut s = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut row = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..n {
        for (j, r) in row.iter_mut().enumerate() {
            *r = complex_normal(rng);
            if i == j {
                *r += l[j].sqrt();
            }
        }
        for j in 0..m {
            for k in j..m {
                s[j][k] += row[j].conj() * row[k];
            }
        }
    }
    for j in 0..m {
        for k in 0..j {
            s[j][k] = s[k][j].conj();
        }
    }
    s
}

/// cfg.samples draws of the largest eigenvalue, bit-identical for a given seed.
pub fn sample_largest_eig(p: &WishartParams, cfg: &McConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(cfg.samples - k * CHUNK);
            (0..len).map(|_| hermitian_eig_max(&draw_scatter(p, &mut rng))).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.samples);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdfPoint {
    pub x: f64,
    pub empirical: f64,
    pub analytic: f64,
    pub half_width: f64,
}

impl CdfPoint {
    pub fn inside(&self) -> bool {
        (self.empirical - self.analytic).abs() <= self.half_width
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdfReport {
    pub samples: usize,
    pub points: Vec<CdfPoint>,
}

impl CdfReport {
    pub fn pass(&self) -> bool {
        self.points.iter().all(CdfPoint::inside)
    }
}

/// Empirical CDF at the 20 sample quantiles k/21 against `analytic`, each
/// with a 99.9% binomial band around the analytic value.
pub fn compare_cdf_samples(samples: &[f64], mut analytic: impl FnMut(f64) -> Result<f64>) -> Result<CdfReport> {
    if samples.is_empty() {
        return Err(Error::InvalidParams("no samples".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let nf = n as f64;
    let mut points = Vec::with_capacity(20);
    for k in 1..=20 {
        let x = s[(k * n / 21).min(n - 1)];
        let empirical = s.partition_point(|&v| v <= x) as f64 / nf;
        let f = analytic(x)?;
        let half_width = Z_999 * (f * (1.0 - f) / nf).max(0.0).sqrt() + 0.5 / nf;
        points.push(CdfPoint { x, empirical, analytic: f, half_width });
    }
    Ok(CdfReport { samples: n, points })
}

pub fn compare_cdf(p: &WishartParams, cfg: &McConfig, analytic: impl FnMut(f64) -> Result<f64>) -> Result<CdfReport> {
    compare_cdf_samples(&sample_largest_eig(p, cfg)?, analytic)
}

/// (lower edge, upper edge, density) over [min, max] of the samples.
pub fn histogram(samples: &[f64], bins: usize) -> Vec<(f64, f64, f64)> {
    if samples.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &v in samples {
        counts[(((v - lo) / w) as usize).min(bins - 1)] += 1;
    }
    let total = samples.len() as f64 * w;
    counts.iter().enumerate().map(|(i, &c)| (lo + i as f64 * w, lo + (i + 1) as f64 * w, c as f64 / total)).collect()
}

pub fn write_histogram_csv<W: Write>(w: &mut W, hist: &[(f64, f64, f64)]) -> io::Result<()> {
    writeln!(w, "x_lo,x_hi,density")?;
    for (a, b, d) in hist {
        writeln!(w, "{a:.16e},{b:.16e},{d:.16e}")?;
    }
    Ok(())
}

pub fn write_report_csv<W: Write>(w: &mut W, r: &CdfReport) -> io::Result<()> {
    writeln!(w, "x,empirical,analytic,half_width,inside")?;
    for p in &r.points {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{}", p.x, p.empirical, p.analytic, p.half_width, p.inside())?;
    }
    Ok(())
}
