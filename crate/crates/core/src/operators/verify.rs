//! Exact annihilation checks of operators against the λ-series of R and ψ.

use serde::Serialize;

use crate::error::Result;
use crate::scalar::q;
use crate::series::{build_psi_series, build_r_series, LambdaSeries};
use crate::QExpPoly;

use super::{euler_op, gauge_translate, theorem1_factors, theorem2_op, DiffOperator, OpBuilderParams, PrintedOperator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub n: u32,
    pub m: usize,
    pub order: usize,
}

/// One verification outcome. `max_residual_terms` counts the nonzero
/// residual coefficients up to `safe_order`; a pass requires zero.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: ReportParams,
    pub safe_order: usize,
    pub max_residual_terms: usize,
    pub pass: bool,
}

impl CheckReport {
    fn from_residual(check: String, params: ReportParams, residual: &LambdaSeries) -> Self {
        let nonzero = residual.len();
        CheckReport { check, params, safe_order: residual.order(), max_residual_terms: nonzero, pass: nonzero == 0 }
    }
}

/// T_k[λ₁]⋯T_k[λ_m] applied to R_{n,m}, for k = 1..m.
pub fn verify_theorem1(n: u32, m: usize, order: usize) -> Result<Vec<CheckReport>> {
    let r = build_r_series(n, m, order)?;
    let p = OpBuilderParams::new(n, m);
    let params = ReportParams { n, m, order };
    let mut out = Vec::new();
    for k in 1..=m {
        let mut s = r.clone();
        for f in theorem1_factors(p, k) {
            s = f.apply(&s)?;
        }
        out.push(CheckReport::from_residual(format!("theorem1-product-T{k}"), params.clone(), &s));
    }
    Ok(out)
}

/// The second-order operator with ∂x, and the eigen-identity it encodes.
pub fn verify_theorem2(n: u32, m: usize, order: usize) -> Result<Vec<CheckReport>> {
    let r = build_r_series(n, m, order)?;
    let p = OpBuilderParams::new(n, m);
    let params = ReportParams { n, m, order };
    let res = theorem2_op(p).apply(&r)?;
    let eig = (m * n as usize) as i64 - (m * (m - 1) / 2) as i64 - 1;
    let shifted = euler_op(p).apply(&r)?;
    let eigen_res = shifted.sub(&r.scale(&QExpPoly::constant(q(eig))))?;
    Ok(vec![
        CheckReport::from_residual("theorem2".into(), params.clone(), &res),
        CheckReport::from_residual(format!("theorem2-eigenvalue-{eig}"), params, &eigen_res),
    ])
}

/// A printed operator (denominators cleared) applied to R_{n,m}.
pub fn verify_printed(op: PrintedOperator, n: u32, order: usize) -> Result<CheckReport> {
    let m = op.m();
    let r = build_r_series(n, m, order)?;
    let res = op.build(n).clear_denominators().apply(&r)?;
    Ok(CheckReport::from_residual(op.name().into(), ReportParams { n, m, order }, &res))
}

/// A gauge-translated operator (denominators cleared) applied to the ψ series
/// with e^{−Σλ} folded in.
pub fn verify_gauge_psi(label: &str, op: &DiffOperator, n: u32, order: usize) -> Result<CheckReport> {
    let m = op.m();
    let psi = build_psi_series(n, m, order, true)?;
    let res = gauge_translate(op).clear_denominators().apply(&psi.series)?;
    Ok(CheckReport::from_residual(format!("gauge-{label}"), ReportParams { n, m, order }, &res))
}
