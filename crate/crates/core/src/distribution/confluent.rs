//! det(f_j(λ_i)) / ∏_{i<k}(λ_i − λ_k) through divided differences, with
//! near-coincident λ's handled by Taylor data instead of 0/0.

use crate::error::{Error, Result};
use crate::linalg::det_lu;

/// A column function with Taylor coefficients f^{(s)}(c)/s!.
pub trait ColumnFn {
    fn value(&self, y: f64) -> Result<f64>;
    fn taylor(&self, c: f64, s: usize) -> Result<f64>;
}

/// Indices of `points` grouped into runs whose consecutive gaps are below `tol`.
pub(crate) fn clusters(points: &[f64], tol: f64) -> Vec<usize> {
    let mut id = vec![0; points.len()];
    for i in 1..points.len() {
        id[i] = if (points[i] - points[i - 1]).abs() < tol { id[i - 1] } else { id[i - 1] + 1 };
    }
    id
}

// h_k(z_0..z_r), complete homogeneous symmetric polynomials for k = 0..kmax
pub(crate) fn complete_homogeneous(z: &[f64], kmax: usize) -> Vec<f64> {
    let mut h = vec![0.0; kmax + 1];
    h[0] = 1.0;
    for &zi in z {
        for k in 1..=kmax {
            h[k] += zi * h[k - 1];
        }
    }
    h
}

const MAX_EXTRA: usize = 40;

// f[p_0..p_r] for points inside one cluster, expanded around their mean:
// (y−c)^s[p_0..p_r] = h_{s−r}(p_0−c, …, p_r−c).
fn taylor_dd(f: &dyn ColumnFn, pts: &[f64]) -> Result<f64> {
    let r = pts.len() - 1;
    let c = pts.iter().sum::<f64>() / pts.len() as f64;
    let z: Vec<f64> = pts.iter().map(|p| p - c).collect();
    let spread = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if spread == 0.0 {
        return f.taylor(c, r);
    }
    let h = complete_homogeneous(&z, MAX_EXTRA);
    let mut acc = 0.0;
    for k in 0..=MAX_EXTRA {
        let t = f.taylor(c, r + k)? * h[k];
        acc += t;
        if k >= 2 && t.abs() <= 1e-17 * acc.abs() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// Newton divided-difference matrix: row r holds f_j[p_0, …, p_r].
pub fn dd_matrix(points: &[f64], cols: &[&dyn ColumnFn], tol: f64) -> Result<Vec<Vec<f64>>> {
    let m = points.len();
    if cols.len() != m {
        return Err(Error::InvalidParams(format!("{} columns for {} points", cols.len(), m)));
    }
    let id = clusters(points, tol);
    let mut out = vec![vec![0.0; m]; m];
    for (j, f) in cols.iter().enumerate() {
        // table[a] holds f[p_a..p_{a+len−1}] for the current length
        let mut table: Vec<f64> = points.iter().map(|&p| f.value(p)).collect::<Result<_>>()?;
        out[0][j] = table[0];
        for len in 2..=m {
            let mut next = Vec::with_capacity(m - len + 1);
            for a in 0..=(m - len) {
                let b = a + len - 1;
                let v = if id[a] == id[b] {
                    taylor_dd(*f, &points[a..=b])?
                } else {
                    (table[a + 1] - table[a]) / (points[b] - points[a])
                };
                next.push(v);
            }
            table = next;
            out[len - 1][j] = table[0];
        }
    }
    Ok(out)
}

/// (−1)^{C(m,2)}: det(f_j(p_i))/∏_{i<k}(p_i − p_k) = sign · det(dd_matrix).
pub fn vandermonde_sign(m: usize) -> f64 {
    if (m * (m.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The quotient and a rounding-error bound (Hadamard bound × `rel_entry`).
pub fn quotient(points: &[f64], cols: &[&dyn ColumnFn], tol: f64, rel_entry: f64) -> Result<(f64, f64)> {
    let d = dd_matrix(points, cols, tol)?;
    let bound: f64 = d.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
    Ok((vandermonde_sign(points.len()) * det_lu(d), bound * rel_entry * points.len() as f64))
}

/// Σ_k det(D with row k taken from `d_cols`), divided by the Vandermonde:
/// the derivative of the quotient when `d_cols` are the derivatives of `cols`.
pub fn quotient_row_derivative(
    points: &[f64],
    cols: &[&dyn ColumnFn],
    d_cols: &[&dyn ColumnFn],
    tol: f64,
    rel_entry: f64,
) -> Result<(f64, f64)> {
    let d = dd_matrix(points, cols, tol)?;
    let dd = dd_matrix(points, d_cols, tol)?;
    let m = points.len();
    let mut acc = 0.0;
    let mut err = 0.0;
    for k in 0..m {
        let mut a = d.clone();
        a[k] = dd[k].clone();
        let bound: f64 = a.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
        acc += det_lu(a);
        err += bound;
    }
    Ok((vandermonde_sign(m) * acc, err * rel_entry * m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Pow(i32);
    impl ColumnFn for Pow {
        fn value(&self, y: f64) -> Result<f64> {
            Ok(y.powi(self.0))
        }
        fn taylor(&self, c: f64, s: usize) -> Result<f64> {
            if s as i32 > self.0 {
                return Ok(0.0);
            }
            let binom = (0..s).fold(1.0, |a, i| a * (self.0 - i as i32) as f64 / (i + 1) as f64);
            Ok(binom * c.powi(self.0 - s as i32))
        }
    }

    struct Exp(f64);
    impl ColumnFn for Exp {
        fn value(&self, y: f64) -> Result<f64> {
            Ok((self.0 * y).exp())
        }
        fn taylor(&self, c: f64, s: usize) -> Result<f64> {
            let f: f64 = (1..=s).map(|i| i as f64).product();
            Ok(self.0.powi(s as i32) * (self.0 * c).exp() / f)
        }
    }

    #[test]
    fn schur_quotient_exact() {
        // det(λ_i^{q_j})/Vandermonde with q = (0, 2, 3), (−1)^3 orientation: s_(1,1)
        let (p0, p1, p2) = (3.0, 1.5, 0.25);
        let cols: [&dyn ColumnFn; 3] = [&Pow(0), &Pow(2), &Pow(3)];
        let (v, _) = quotient(&[p0, p1, p2], &cols, 1e-9, 1e-16).unwrap();
        // ∏_{i<k}(p_i − p_k) orientation gives s_{(1,1)} = p0p1+p0p2+p1p2 up to sign
        let e2 = p0 * p1 + p0 * p2 + p1 * p2;
        assert!((v.abs() - e2).abs() < 1e-12);
        let direct = {
            let m = vec![
                vec![1.0, p0 * p0, p0.powi(3)],
                vec![1.0, p1 * p1, p1.powi(3)],
                vec![1.0, p2 * p2, p2.powi(3)],
            ];
            det_lu(m) / ((p0 - p1) * (p0 - p2) * (p1 - p2))
        };
        assert!((v - direct).abs() < 1e-12);
    }

    // det(e^{p_i}, e^{2p_i})/(p0 − p1) = −e^{p0+2p1}·expm1(p0−p1)/(p0−p1)
    fn two_exp(p0: f64, p1: f64) -> f64 {
        let d = p0 - p1;
        let r = if d == 0.0 { 1.0 } else { d.exp_m1() / d };
        -(p0 + 2.0 * p1).exp() * r
    }

    #[test]
    fn confluent_limit_is_continuous() {
        let cols: [&dyn ColumnFn; 2] = [&Exp(1.0), &Exp(2.0)];
        for d in [0.0, 1e-9, 1e-7, 1e-6, 9e-6, 2e-5, 1e-3, 0.1] {
            let got = quotient(&[1.0 + d, 1.0], &cols, 1e-5, 1e-16).unwrap().0;
            let want = two_exp(1.0 + d, 1.0);
            assert!((got - want).abs() < 1e-11 * want.abs(), "{d}: {got} {want}");
        }
    }

    #[test]
    fn triple_cluster_and_mixed() {
        let cols: [&dyn ColumnFn; 4] = [&Exp(0.5), &Exp(1.0), &Exp(1.5), &Exp(-1.0)];
        let a = quotient(&[2.0, 1.0, 1.0, 1.0], &cols, 1e-5, 1e-16).unwrap().0;
        let b = quotient(&[2.0, 1.0 + 2e-6, 1.0, 1.0 - 3e-6], &cols, 1e-5, 1e-16).unwrap().0;
        assert!((a - b).abs() < 1e-5 * a.abs(), "{a} {b}");
        // Taylor about the cluster mean against Newton recursion at the same points
        let pts = [2.0, 1.0 + 2e-3, 1.0, 1.0 - 3e-3];
        let taylor = quotient(&pts, &cols, 1e-2, 1e-16).unwrap().0;
        let newton = quotient(&pts, &cols, 1e-5, 1e-16).unwrap().0;
        assert!((taylor - newton).abs() < 1e-8 * newton.abs(), "{taylor} {newton}");
    }

    #[test]
    fn symmetric_in_points() {
        let cols: [&dyn ColumnFn; 3] = [&Exp(0.3), &Exp(1.0), &Exp(2.0)];
        let a = quotient(&[0.5, 2.0, 1.0], &cols, 1e-5, 1e-16).unwrap().0;
        let b = quotient(&[2.0, 1.0, 0.5], &cols, 1e-5, 1e-16).unwrap().0;
        assert!((a - b).abs() < 1e-12 * a.abs());
    }
}
