//! CDF and density of the largest eigenvalue of W_m(Id, V*V, n): the
//! determinant of H-integrals, its exact λ-series, the determinantal
//! G-function formula, and the holonomic gradient route.

pub mod columns;
pub mod confluent;
pub mod conjecture;
pub mod forms;
pub mod gfun;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{build_f_series, build_psi_series, LambdaSeries};
use crate::special_fn::ln_gamma;

use columns::{FormCol, HCol, HypCol};
use confluent::{quotient, quotient_row_derivative, ColumnFn};

pub use conjecture::{conjecture_expansion, conjecture_front, r_expansion};
pub use gfun::{g_form, g_function, y_form, y_solution};

/// n degrees of freedom, m = dim, and the eigenvalues of V*V (sorted
/// descending on construction).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WishartParams {
    n: u32,
    m: usize,
    lambdas: Vec<f64>,
}

impl WishartParams {
    pub fn new(n: u32, m: usize, lambdas: &[f64]) -> Result<Self> {
        if m == 0 || (n as usize) < m {
            return Err(Error::InvalidParams(format!("need n >= m >= 1, got n={n}, m={m}")));
        }
        if lambdas.len() != m {
            return Err(Error::InvalidParams(format!("expected {m} non-centrality values, got {}", lambdas.len())));
        }
        if lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::InvalidParams(format!("non-centrality values must be finite and >= 0: {lambdas:?}")));
        }
        let mut l = lambdas.to_vec();
        l.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(WishartParams { n, m, lambdas: l })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// e^{−Σλ}/((n−m)!)^m.
    pub(crate) fn front(&self) -> f64 {
        let s: f64 = self.lambdas.iter().sum();
        (-s - self.m as f64 * ln_gamma((self.n as usize - self.m + 1) as f64)).exp()
    }

    fn nu(&self) -> u32 {
        self.n - self.m as u32 + 1
    }

    /// x beyond which 1 − F is below 1e−8 on every tested case.
    pub fn upper_cutoff(&self) -> f64 {
        let t = self.n as f64 + self.lambdas.iter().sum::<f64>();
        t + 10.0 * t.sqrt() + 20.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Quadrature,
    Series,
    Conjecture,
    Hgm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Quadrature, Method::Series, Method::Conjecture, Method::Hgm];

    pub fn name(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::Conjecture => "conjecture",
            Method::Hgm => "hgm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown method '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub method: Method,
    /// λ's closer than threshold·(1 + max λ) are treated as coincident.
    pub confluence_threshold: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Total λ-degree of the series route.
    pub order: usize,
    /// Allows the determinantal formula at m = 4.
    pub experimental: bool,
    /// Starting abscissa of the holonomic gradient route.
    pub hgm_x0: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            method: Method::Quadrature,
            confluence_threshold: 1e-5,
            rtol: 1e-10,
            atol: 1e-13,
            order: 16,
            experimental: false,
            hgm_x0: 0.5,
        }
    }
}

impl EvalConfig {
    pub fn with_method(method: Method) -> Self {
        EvalConfig { method, ..Default::default() }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.confluence_threshold > 0.0) {
            return Err(Error::InvalidParams("confluence threshold must be positive".into()));
        }
        if !(self.rtol > 0.0) || !(self.atol >= 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn tol(&self, p: &WishartParams) -> f64 {
        self.confluence_threshold * (1.0 + p.lambdas.first().copied().unwrap_or(0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub err_est: f64,
    pub method: Method,
}

const H_REL: f64 = 1e-13;
const FORM_REL: f64 = 1e-14;

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn finite(e: Evaluation) -> Result<Evaluation> {
    if e.value.is_finite() {
        Ok(e)
    } else {
        Err(Error::Domain(format!("{} route produced a non-finite value", e.method)))
    }
}

/// F_{n,m}(x; λ).
pub fn cdf(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(cdf_eval(p, x, cfg)?.value)
}

/// ψ_{n,m}(x; λ).
pub fn pdf(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(pdf_eval(p, x, cfg)?.value)
}

pub fn cdf_eval(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    cfg.validate()?;
    check_x(x)?;
    let e = match cfg.method {
        Method::Quadrature => cdf_quadrature(p, x, cfg)?,
        Method::Series => series_eval(p, x, cfg, false)?,
        Method::Conjecture => {
            return Err(Error::Unavailable("the determinantal formula gives the density only".into()))
        }
        Method::Hgm => crate::hgm::cdf(p, x, cfg)?,
    };
    let e = finite(e)?;
    if e.value < -1e-8 || e.value > 1.0 + 1e-8 {
        return Err(Error::Domain(format!("{} route left [0, 1]: {}", e.method, e.value)));
    }
    Ok(Evaluation { value: e.value.clamp(0.0, 1.0), ..e })
}

pub fn pdf_eval(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    cfg.validate()?;
    check_x(x)?;
    let e = match cfg.method {
        Method::Quadrature => pdf_quadrature(p, x, cfg)?,
        Method::Series => series_eval(p, x, cfg, true)?,
        Method::Conjecture => pdf_conjecture_eval(p, x, cfg)?,
        Method::Hgm => crate::hgm::pdf(p, x, cfg)?,
    };
    finite(e)
}

/// Which of the two functions a grid evaluation computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Cdf,
    Pdf,
}

/// Evaluations at every x, computed in parallel and returned in input order.
pub fn eval_grid(q: Quantity, p: &WishartParams, xs: &[f64], cfg: &EvalConfig) -> Vec<Result<Evaluation>> {
    if cfg.method == Method::Hgm {
        // one trajectory through the sorted grid
        return crate::hgm::eval_grid(q, p, xs, cfg);
    }
    xs.par_iter()
        .map(|&x| match q {
            Quantity::Cdf => cdf_eval(p, x, cfg),
            Quantity::Pdf => pdf_eval(p, x, cfg),
        })
        .collect()
}

fn cdf_quadrature(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    let (n, nu) = (p.n, p.nu());
    let cols: Vec<HCol> = (1..=p.m as u32).map(|j| HCol { k: n - j, nu, x }).collect();
    let refs: Vec<&dyn ColumnFn> = cols.iter().map(|c| c as &dyn ColumnFn).collect();
    let (v, err) = quotient(&p.lambdas, &refs, cfg.tol(p), H_REL)?;
    let f = p.front();
    Ok(Evaluation { value: f * v, err_est: f * err, method: Method::Quadrature })
}

fn pdf_quadrature(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    let (n, nu) = (p.n, p.nu());
    let cols: Vec<HCol> = (1..=p.m as u32).map(|j| HCol { k: n - j, nu, x }).collect();
    let dcols: Vec<HypCol> = (1..=p.m as u32).map(|j| HypCol { k: n - j, nu, x, scale: 1.0 }).collect();
    let refs: Vec<&dyn ColumnFn> = cols.iter().map(|c| c as &dyn ColumnFn).collect();
    let drefs: Vec<&dyn ColumnFn> = dcols.iter().map(|c| c as &dyn ColumnFn).collect();
    let (v, err) = quotient_row_derivative(&p.lambdas, &refs, &drefs, cfg.tol(p), H_REL)?;
    let f = p.front();
    Ok(Evaluation { value: f * v, err_est: f * err, method: Method::Quadrature })
}

type SeriesKey = (u32, usize, usize, bool);
static SERIES: Lazy<Mutex<HashMap<SeriesKey, Arc<LambdaSeries>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn cached_series(n: u32, m: usize, order: usize, density: bool) -> Result<Arc<LambdaSeries>> {
    let key = (n, m, order, density);
    if let Some(s) = SERIES.lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let s = if density { build_psi_series(n, m, order, true)?.series } else { build_f_series(n, m, order)? };
    let s = Arc::new(s);
    SERIES.lock().unwrap().insert(key, s.clone());
    Ok(s)
}

fn series_eval(p: &WishartParams, x: f64, cfg: &EvalConfig, density: bool) -> Result<Evaluation> {
    let s = cached_series(p.n, p.m, cfg.order, density)?;
    let (v, tail) = s.eval_with_tail(x, &p.lambdas)?;
    Ok(Evaluation { value: v, err_est: tail, method: Method::Series })
}

/// (n−m+1)/∏_{k=1}^m (n−k+1)^k · x^{mn − C(m,2) − 1}; the e^{−mx} of the
/// front factor is carried by the columns.
pub fn conjecture_front_value(n: u32, m: usize, x: f64) -> f64 {
    let (ni, mi) = (n as i64, m as i64);
    let mut c = (ni - mi + 1) as f64;
    for k in 1..=mi {
        c /= ((ni - k + 1) as f64).powi(k as i32);
    }
    let pow = mi * ni - mi * (mi - 1) / 2 - 1;
    c * x.powi(pow as i32)
}

/// ψ from the determinant with first row 0F1(n−m+1; xλ_i) and rows
/// G_{n−m+j,j}(x, λ_i), j = 2..m.
pub fn pdf_conjecture(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(pdf_conjecture_eval(p, x, cfg)?.value)
}

fn pdf_conjecture_eval(p: &WishartParams, x: f64, cfg: &EvalConfig) -> Result<Evaluation> {
    let (n, m) = (p.n, p.m);
    if m > 4 || (m == 4 && !cfg.experimental) {
        return Err(Error::Unavailable(format!(
            "the determinantal formula is checked for m <= 3 (m = 4 is experimental), got m = {m}"
        )));
    }
    let first = HypCol { k: 0, nu: p.nu(), x, scale: 1.0 };
    let forms: Vec<FormCol> = (2..=m as u32)
        .map(|j| Ok(FormCol::new(g_form(n - m as u32 + j, j)?, x)))
        .collect::<Result<_>>()?;
    let mut refs: Vec<&dyn ColumnFn> = vec![&first];
    refs.extend(forms.iter().map(|c| c as &dyn ColumnFn));
    let (v, err) = quotient(&p.lambdas, &refs, cfg.tol(p), FORM_REL)?;
    let f = p.front() * conjecture_front_value(n, m, x);
    Ok(Evaluation { value: f * v, err_est: f * err, method: Method::Conjecture })
}

/// ψ_{n,2} = x^{2n−2} e^{−λ₁−λ₂−2x} / (n!(n−2)!(λ₁−λ₂)) ·
/// det(0F1(n−1; xλ_i); G_{n,2}(x, λ_i)).
pub fn pdf_m2_closed(p: &WishartParams, x: f64) -> Result<f64> {
    if p.m != 2 {
        return Err(Error::InvalidParams(format!("closed form is for m = 2, got m = {}", p.m)));
    }
    check_x(x)?;
    let n = p.n;
    let first = HypCol { k: 0, nu: n - 1, x, scale: 1.0 };
    let g = FormCol::new(g_form(n, 2)?, x);
    let cfg = EvalConfig::default();
    let (v, _) = quotient(&p.lambdas, &[&first, &g], cfg.tol(p), FORM_REL)?;
    let ln_f = -p.lambdas.iter().sum::<f64>() - ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 - 1.0);
    Ok(x.powi(2 * n as i32 - 2) * ln_f.exp() * v)
}
