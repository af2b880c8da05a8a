use super::extract::*;
use super::*;
use crate::distribution::{self as dist, WishartParams};
use crate::h_integrals::h_eval;

fn params(n: u32, l: &[f64]) -> WishartParams {
    WishartParams::new(n, l.len(), l).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn hgm_cfg() -> EvalConfig {
    EvalConfig::with_method(Method::Hgm)
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = a.len();
    (0..d).map(|r| (0..d).map(|c| (0..d).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}

#[test]
fn blocks_are_integrable() {
    for nn in 2..7 {
        let d = integrability_defect(nn);
        assert!(d.iter().flatten().all(|e| e.is_zero()), "N={nn}");
    }
}

#[test]
fn full_matrices_are_integrable() {
    // ∂_x Λ_i + Λ_i X = ∂_{λ_i} X + X Λ_i, checked by central differences
    let (n, l, x, h) = (5u32, [1.3, 0.6], 2.0, 1e-5);
    let sys = PfaffianSystem::new(n, &l).unwrap();
    for i in 0..2 {
        let dl = |s: f64| {
            let mut ls = l;
            ls[i] += s;
            PfaffianSystem::new(n, &ls).unwrap().x_matrix(x)
        };
        let (xp, xm) = (dl(h), dl(-h));
        let (lp, lm) = (sys.lambda_matrix(i, x + h), sys.lambda_matrix(i, x - h));
        let (xa, la) = (sys.x_matrix(x), sys.lambda_matrix(i, x));
        let (lx, xl) = (matmul(&la, &xa), matmul(&xa, &la));
        for r in 0..9 {
            for c in 0..9 {
                let lhs = (lp[r][c] - lm[r][c]) / (2.0 * h) + lx[r][c];
                let rhs = (xp[r][c] - xm[r][c]) / (2.0 * h) + xl[r][c];
                assert!((lhs - rhs).abs() < 1e-9, "i={i} ({r},{c}): {lhs} {rhs}");
            }
        }
    }
}

fn single(nn: u32, x: f64, y: f64) -> [f64; 3] {
    let f = x.powi(nn as i32) * (-x).exp();
    [
        h_eval(HIndex::new(nn - 1, nn), x, y).unwrap(),
        f * hpg01(nn as f64, x * y).unwrap(),
        f * hpg01(nn as f64 + 1.0, x * y).unwrap(),
    ]
}

#[test]
fn blocks_match_derivatives() {
    let h = 1e-4;
    for (nn, x, y) in [(3u32, 2.0, 1.0), (2, 0.7, 3.0), (5, 4.0, 0.0)] {
        let b = single(nn, x, y);
        let dx: Vec<f64> = (0..3)
            .map(|i| {
                let d = |h: f64| (single(nn, x + h, y)[i] - single(nn, x - h, y)[i]) / (2.0 * h);
                (4.0 * d(h / 2.0) - d(h)) / 3.0
            })
            .collect();
        let a = x_block_f64(nn, x, y);
        for i in 0..3 {
            let v: f64 = (0..3).map(|j| a[i][j] * b[j]).sum();
            assert!((v - dx[i]).abs() < 1e-10 * dx[i].abs().max(1.0), "N={nn} x={x} y={y} row {i}");
        }
        if y > 0.0 {
            let dy: Vec<f64> = (0..3)
                .map(|i| {
                    let d = |h: f64| (single(nn, x, y + h)[i] - single(nn, x, y - h)[i]) / (2.0 * h);
                    (4.0 * d(h / 2.0) - d(h)) / 3.0
                })
                .collect();
            let l = lambda_block_f64(nn, x, y);
            for i in 0..3 {
                let v: f64 = (0..3).map(|j| l[i][j] * b[j]).sum();
                assert!((v - dy[i]).abs() < 1e-9 * dy[i].abs().max(1.0), "N={nn} x={x} y={y} λ-row {i}");
            }
        }
    }
}

#[test]
fn lambda_block_is_finite_at_zero() {
    // ∂_λ b² = (N/λ)(b¹ − b²) has a removable singularity: b¹ = b² at λ = 0
    let (nn, x) = (3u32, 1.5);
    let b = single(nn, x, 0.0);
    assert!((b[1] - b[2]).abs() < 1e-15);
    let near = |y: f64| {
        let l = lambda_block_f64(nn, x, y);
        let b = single(nn, x, y);
        (0..3).map(|j| l[2][j] * b[j]).sum::<f64>()
    };
    assert!((near(1e-4) - near(2e-4)).abs() < 1e-3 * near(1e-4).abs());
}

#[test]
fn m1_extraction_is_the_integrand() {
    // R = ∂_x H^{n−1}_n = x^{n−1}e^{−x}0F1(n; xλ) = b¹/x
    for n in 2..6u32 {
        let r = r_extraction(n, 1).unwrap();
        let x = QRatFunc::var(2, 0);
        assert!(r[0].is_zero() && r[2].is_zero());
        assert!(&r[1] * &x == QRatFunc::one(2), "n={n}");
    }
}

#[test]
fn m2_has_no_double_h_term() {
    for n in 3..6u32 {
        assert!(r_extraction(n, 2).unwrap()[0].is_zero());
    }
}

#[test]
fn m2_r_table_is_reproduced() {
    for n in 3..8u32 {
        let (r, _) = m2_table_matches(n).unwrap();
        assert_eq!(r, [true; 8], "n={n}");
    }
}

#[test]
fn m2_derivative_table_agrees_on_four_entries() {
    // entries 1, 3, 6, 7 of the printed (n−1)∂R row are not the x-derivative
    for n in 3..8u32 {
        let (_, d) = m2_table_matches(n).unwrap();
        assert_eq!(d, [false, true, false, true, true, false, false, true], "n={n}");
    }
}

#[test]
fn m1_integration_matches_direct_values() {
    let sys = PfaffianSystem::new(4, &[1.0]).unwrap();
    let s0 = initial_state(&sys, 0.5).unwrap();
    let s1 = hgm_integrate(&sys, &s0, 5.0, &hgm_cfg()).unwrap();
    let direct = sys.basis_at(5.0).unwrap();
    for i in 0..3 {
        assert!(rel(s1.basis[i], direct[i]) < 1e-8, "{i}: {} {}", s1.basis[i], direct[i]);
    }
}

#[test]
fn zero_length_integration_returns_the_start() {
    let sys = PfaffianSystem::new(4, &[2.0, 1.0]).unwrap();
    let s0 = initial_state(&sys, 0.5).unwrap();
    assert_eq!(hgm_integrate(&sys, &s0, 0.5, &hgm_cfg()).unwrap(), s0);
}

#[test]
fn initial_state_matches_quadrature() {
    let sys = PfaffianSystem::new(5, &[1.5]).unwrap();
    let s = initial_state(&sys, 0.8).unwrap();
    let q = h_eval(HIndex::new(4, 5), 0.8, 1.5).unwrap();
    assert!(rel(s.basis[0], q) < 1e-12);
    assert!(initial_state(&sys, 0.0).is_err());
    assert!(initial_state(&sys, 1.5).is_err());
}

#[test]
fn round_trip() {
    // backward steps amplify error like (x1/x0)^{N·m}: the basis vanishes as x^N at 0
    let sys = PfaffianSystem::new(5, &[2.0, 0.5]).unwrap();
    let s0 = initial_state(&sys, 1.0).unwrap();
    for (x1, rtol) in [(2.0, 1e-10), (3.0, 1e-12)] {
        let cfg = EvalConfig { rtol, ..hgm_cfg() };
        let s1 = hgm_integrate(&sys, &s0, x1, &cfg).unwrap();
        let back = hgm_integrate(&sys, &s1, 1.0, &cfg).unwrap();
        for (a, b) in back.basis.iter().zip(&s0.basis) {
            assert!(rel(*a, *b) < 1e-9, "x1={x1}: {a} {b}");
        }
    }
}

#[test]
fn needs_more_samples_than_variables() {
    assert!(PfaffianSystem::new(2, &[1.0, 0.5]).is_err());
    assert!(dist::pdf(&params(3, &[3.0, 2.0, 1.0]), 1.0, &hgm_cfg()).is_err());
}

#[test]
fn m2_density_matches_quadrature_at_six() {
    let p = params(4, &[2.0, 1.0]);
    let a = pdf(&p, 6.0, &hgm_cfg()).unwrap().value;
    let b = dist::pdf(&p, 6.0, &EvalConfig::default()).unwrap();
    assert!(rel(a, b) < 1e-7, "{a} {b}");
}

#[test]
fn m2_r_follows_the_derivative_table() {
    // along the trajectory, dR/dx from the ODE equals the derived ∂R combination
    let p = params(4, &[2.0, 1.0]);
    let xs: Vec<f64> = (0..8).map(|i| 1.0 + i as f64).collect();
    let rows: Vec<_> = trajectory(&p, &xs, &hgm_cfg()).into_iter().map(|r| r.unwrap()).collect();
    let r = r_extraction(4, 2).unwrap();
    let dr = x_derivative(&r, 4, 2).unwrap();
    let sys = PfaffianSystem::new(4, &[2.0, 1.0]).unwrap();
    for row in &rows {
        let pt = [row.x, 2.0, 1.0];
        let comb = |c: &[QRatFunc], b: &[f64]| c.iter().zip(b).map(|(c, b)| c.eval_f64(&pt) * b).sum::<f64>();
        let mut ab = vec![0.0; 9];
        sys.derivative(row.x, &row.basis, &mut ab);
        let ode: f64 = r.iter().zip(&row.basis).zip(&ab).map(|((c, b), db)| c.derivative(0).eval_f64(&pt) * b + c.eval_f64(&pt) * db).sum();
        let table = comb(&dr, &row.basis);
        assert!(rel(ode, table) < 1e-8, "x={}: {ode} {table}", row.x);
        assert!(rel(comb(&r, &row.basis), row.r) < 1e-8, "x={}", row.x);
    }
}

#[test]
fn density_matches_quadrature_on_the_grid() {
    let xs: Vec<f64> = (0..40).map(|i| 0.5 + 19.5 * i as f64 / 39.0).collect();
    for l in [vec![2.0, 1.0], vec![1.0, 1.0], vec![3.0, 2.0, 1.0], vec![2.0, 2.0, 0.5]] {
        let n = if l.len() == 2 { 4 } else { 5 };
        let p = params(n, &l);
        let h = eval_grid(Quantity::Pdf, &p, &xs, &hgm_cfg());
        let q = dist::eval_grid(Quantity::Pdf, &p, &xs, &EvalConfig::default());
        for ((x, a), b) in xs.iter().zip(h).zip(q) {
            let (a, b) = (a.unwrap().value, b.unwrap().value);
            assert!(rel(a, b) < 1e-6, "n={n} {l:?} x={x}: {a} {b}");
        }
    }
}

#[test]
fn cdf_matches_quadrature() {
    let p = params(4, &[2.0, 1.0]);
    for x in [0.3, 3.0, 9.0] {
        let a = cdf(&p, x, &hgm_cfg()).unwrap().value;
        let b = dist::cdf(&p, x, &EvalConfig::default()).unwrap();
        assert!((a - b).abs() < 1e-8, "x={x}: {a} {b}");
    }
    assert_eq!(cdf(&p, 0.0, &hgm_cfg()).unwrap().value, 0.0);
}

#[test]
fn trajectory_keeps_input_order() {
    let p = params(4, &[2.0, 1.0]);
    let xs = [5.0, 0.2, 2.0];
    let rows: Vec<_> = trajectory(&p, &xs, &hgm_cfg()).into_iter().map(|r| r.unwrap()).collect();
    for (x, r) in xs.iter().zip(&rows) {
        assert_eq!(r.x, *x);
    }
    assert!(trajectory(&p, &[-1.0], &hgm_cfg())[0].is_err());
}

#[test]
fn csv_has_header_and_rows() {
    let p = params(4, &[2.0, 1.0]);
    let rows: Vec<_> = trajectory(&p, &[1.0, 2.0], &hgm_cfg()).into_iter().map(|r| r.unwrap()).collect();
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &rows).unwrap();
    let s = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("x,b0,") && lines[0].ends_with(",cdf,R,psi"));
    assert_eq!(lines[1].split(',').count(), 1 + 9 + 3);
    let psi: f64 = lines[2].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(psi, rows[1].pdf);
}

