//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! are printed under `cargo test`; exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use wishart_roots::distribution::conjecture::{m2_bracket_identity, m3_first_coefficient_identity};
use wishart_roots::distribution::gfun::{lowering, q_operator, raising, raising_by_lowered, relative_residual};
use wishart_roots::distribution::{self as dist, eval_grid, y_form, EvalConfig, Method, Quantity, WishartParams};
use wishart_roots::h_integrals::relation_grid;
use wishart_roots::hgm::{self, extract::m2_table_matches};
use wishart_roots::mc_validator::{compare_cdf_samples, sample_largest_eig, McConfig};
use wishart_roots::operators::{
    build_p, build_q, lclm, verify_printed, verify_theorem1, verify_theorem2, PrintedOperator, UOperator,
};
use wishart_roots::quad::integrate;
use wishart_roots::scalar::{q, qf};
use wishart_roots::special_fn::{incomplete_gamma, marcum_q};
use wishart_roots::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn params(n: u32, l: &[f64]) -> Result<WishartParams> {
    WishartParams::new(n, l.len(), l)
}

const GRID: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

fn c1_recurrences() -> Result<Outcome> {
    let rels = relation_grid(6, 6, 8);
    let mut worst: f64 = 0.0;
    for r in &rels {
        for &x in &GRID {
            for &y in &GRID {
                worst = worst.max(r.relative_residual(x, y)?);
            }
        }
    }
    // γ(a+1, x) = aγ(a, x) − x^a e^{−x}
    let mut gworst: f64 = 0.0;
    for a in 1..=8 {
        for &x in &GRID {
            let a = a as f64;
            let lhs = incomplete_gamma(a + 1.0, x)?;
            let rhs = a * incomplete_gamma(a, x)? - x.powf(a) * (-x).exp();
            gworst = gworst.max(rel(rhs, lhs));
        }
    }
    let worst = worst.max(gworst);
    outcome(worst < 1e-10, format!("{} relation instances x 25 points, worst relative residual {worst:.1e}", rels.len()))
}

const OP_GRID: [(u32, usize); 5] = [(3, 2), (4, 2), (5, 2), (4, 3), (5, 3)];

fn c2_theorem1() -> Result<Outcome> {
    let mut checks = 0;
    let mut bad = Vec::new();
    for (n, m) in OP_GRID {
        for r in verify_theorem1(n, m, 9)? {
            checks += 1;
            if !(r.pass && r.safe_order >= 2) {
                bad.push(format!("{} n={n} m={m}", r.check));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} products at order 9, nonzero residuals: {bad:?}"))
}

fn c3_theorem2() -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut eig_ok = true;
    for (n, m) in OP_GRID {
        let r = verify_theorem2(n, m, 9)?;
        let want = format!("theorem2-eigenvalue-{}", m * n as usize - m * (m - 1) / 2 - 1);
        eig_ok &= r[1].check == want;
        for c in r {
            if !c.pass {
                bad.push(format!("{} n={n} m={m}", c.check));
            }
        }
    }
    outcome(bad.is_empty() && eig_ok, format!("operator and eigen-identity residuals zero; eigenvalue mn-m(m-1)/2-1: {eig_ok}; failures {bad:?}"))
}

fn c4_printed() -> Result<Outcome> {
    use PrintedOperator::*;
    let mut bad = Vec::new();
    for op in [Rank12Euler, Rank12Mixed, Rank12Third, Order5, Rank8Third, M3Mixed, M3Order4SumAmended] {
        let order = if op.m() == 3 { 9 } else { 10 };
        for n in 3..=5 {
            let r = verify_printed(op, n, order)?;
            if !(r.pass && r.safe_order >= 2) {
                bad.push(format!("{} n={n}", op.name()));
            }
        }
    }
    let literal = verify_printed(M3Order4Sum, 4, 9)?;
    let mut lclm_ok = true;
    for (n, x) in [(4i64, q(2)), (5, qf(1, 2)), (6, q(-1))] {
        let at = |o: &wishart_roots::operators::DiffOperator| UOperator::from_diff_operator(&o.substitute(0, &x), 1);
        let l = lclm(&[at(&build_p(2, n - 2, 1))?, at(&build_q(2, n, n - 2, 1))?])?;
        lclm_ok &= l.monic() == at(&Order5.build(n as u32))?.monic();
    }
    outcome(
        bad.is_empty() && lclm_ok,
        format!(
            "generators, order-5, rank-8 third-order, m=3 mixed and fourth-order sum (with the lambda_k factor on d^3; as printed it leaves {} nonzero terms) annihilate R for n=3..5; order-5 = LCLM(P,Q) at 3 points: {lclm_ok}; failures {bad:?}",
            literal.max_residual_terms
        ),
    )
}

fn c5_conjecture_m2() -> Result<Outcome> {
    let cj = EvalConfig::with_method(Method::Conjecture);
    let qd = EvalConfig::default();
    let xs = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=6u32 {
        for l in [[2.0, 1.0], [0.5, 0.1], [4.0, 0.0], [1.0, 1.0]] {
            let p = params(n, &l)?;
            for &x in &xs {
                worst = worst.max(rel(dist::pdf(&p, x, &cj)?, dist::pdf(&p, x, &qd)?));
                count += 1;
            }
        }
    }
    let mut series_ok = true;
    for n in 2..=6 {
        series_ok &= m2_bracket_identity(n)? == [true; 4];
    }
    outcome(
        worst <= 1e-8 && series_ok,
        format!("{count} points incl. confluent pair, worst relative {worst:.1e}; bracket identities exact: {series_ok}"),
    )
}

fn c6_conjecture_m3() -> Result<Outcome> {
    let cj = EvalConfig::with_method(Method::Conjecture);
    let qd = EvalConfig::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 3..=5u32 {
        for l in [[3.0, 2.0, 1.0], [1.0, 0.5, 0.2], [2.0, 2.0, 0.5]] {
            let p = params(n, &l)?;
            for x in [1.0, 2.0, 4.0, 8.0] {
                worst = worst.max(rel(dist::pdf(&p, x, &cj)?, dist::pdf(&p, x, &qd)?));
                count += 1;
            }
        }
    }
    let mut exact = true;
    for n in 3..=7 {
        exact &= m3_first_coefficient_identity(n)? == [true; 4];
    }
    outcome(
        worst <= 1e-6 && exact,
        format!("{count} points, worst relative {worst:.1e}; c^(3) display and quadratic A/E identities exact: {exact}"),
    )
}

fn c7_closed_forms() -> Result<Outcome> {
    let pts = [(2.0, 1.0), (0.5, 0.5), (5.0, 3.0), (1.0, 7.0), (10.0, 2.0)];
    let mut worst: f64 = 0.0;
    for big_n in 3..7u32 {
        for big_m in 2..=4u32 {
            let (ni, mi) = (big_n as i64, big_m as i64);
            let y = y_form(big_n, big_m)?;
            let low = y.apply(&lowering());
            let up = y.apply(&raising(big_n, big_m));
            let up3 = raising_by_lowered(big_n, big_m, &y);
            for &(x, yy) in &pts {
                worst = worst.max(relative_residual(&y, &q_operator(ni, ni - mi), x, yy)?);
                if big_m <= big_n {
                    worst = worst.max(relative_residual(&low, &q_operator(ni, ni - mi + 1), x, yy)?);
                    worst = worst.max(relative_residual(&up, &q_operator(ni, ni - mi - 1), x, yy)?);
                    worst = worst.max(relative_residual(&up3, &q_operator(ni, ni - mi - 1), x, yy)?);
                }
            }
        }
    }
    outcome(worst < 1e-10, format!("Q.Y and lowering/raising images, N=3..6, M=2..4, worst relative {worst:.1e}"))
}

fn c8_hgm() -> Result<Outcome> {
    let xs: Vec<f64> = (0..40).map(|i| 0.5 + 19.5 * i as f64 / 39.0).collect();
    let hg = EvalConfig::with_method(Method::Hgm);
    let qd = EvalConfig::default();
    let mut worst: f64 = 0.0;
    for (n, l) in [(4u32, vec![2.0, 1.0]), (4, vec![1.0, 1.0]), (5, vec![3.0, 2.0, 1.0]), (5, vec![2.0, 2.0, 0.5])] {
        let p = params(n, &l)?;
        let a = hgm::eval_grid(Quantity::Pdf, &p, &xs, &hg);
        let b = eval_grid(Quantity::Pdf, &p, &xs, &qd);
        for (a, b) in a.into_iter().zip(b) {
            worst = worst.max(rel(a?.value, b?.value));
        }
    }
    let mut table = true;
    let mut d_rows = 0;
    for n in 3..=7 {
        let (r, d) = m2_table_matches(n)?;
        table &= r == [true; 8];
        d_rows += d.iter().filter(|&&v| v).count();
    }
    outcome(
        worst <= 1e-6 && table,
        format!(
            "pdf(hgm) vs quadrature on 40 points in [0.5,20], worst relative {worst:.1e}; R table exact for n=3..7: {table} (derivative row: {d_rows}/40 entries as printed)"
        ),
    )
}

fn c9_sanity() -> Result<Outcome> {
    let cfg = EvalConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, l) in [(3u32, vec![1.5, 0.5]), (4, vec![3.0, 2.0, 1.0]), (2, vec![5.0])] {
        let p = params(n, &l)?;
        let xs: Vec<f64> = (0..60).map(|i| 0.5 * i as f64).collect();
        let v: Vec<f64> = eval_grid(Quantity::Cdf, &p, &xs, &cfg).into_iter().map(|e| e.map(|e| e.value)).collect::<Result<_>>()?;
        let mono = v.windows(2).all(|w| w[1] >= w[0] - 1e-14);
        let deficit = 1.0 - dist::cdf(&p, p.upper_cutoff(), &cfg)?;
        let mass = integrate(|x| dist::pdf(&p, x, &cfg).unwrap_or(f64::NAN), 0.0, p.upper_cutoff(), 1e-11, 1e-10)?.value;
        ok &= mono && deficit < 1e-8 && (mass - 1.0).abs() < 1e-8;
        notes.push(format!("{l:?}: deficit {deficit:.0e}, mass-1 {:.0e}", mass - 1.0));
    }
    let mut mq: f64 = 0.0;
    for n in 1..6u32 {
        for l in [0.0, 0.3, 1.0, 4.0] {
            for x in [0.2, 1.0, 3.0, 8.0, 20.0] {
                let f = dist::cdf(&params(n, &[l])?, x, &cfg)?;
                mq = mq.max((f + marcum_q(n, l, x)? - 1.0).abs());
            }
        }
    }
    outcome(ok && mq < 1e-10, format!("{}; Marcum identity worst {mq:.1e}", notes.join("; ")))
}

fn c10_monte_carlo() -> Result<Outcome> {
    let cfg = EvalConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for (seed, (n, l)) in [(4u32, vec![2.0, 1.0]), (3, vec![1.0]), (5, vec![3.0, 2.0, 1.0])].into_iter().enumerate() {
        let p = params(n, &l)?;
        let s = sample_largest_eig(&p, &McConfig { samples: 100_000, seed: 1000 + seed as u64, bins: 1 })?;
        let good = compare_cdf_samples(&s, |x| dist::cdf(&p, x, &cfg))?;
        let bad = compare_cdf_samples(&s, |x| dist::cdf(&p, x, &cfg).map(|f| f + 0.02))?;
        let inside = good.points.iter().filter(|c| c.inside()).count();
        ok &= good.pass() && !bad.pass();
        notes.push(format!("n={n} {l:?}: {inside}/20 inside, control rejected: {}", !bad.pass()));
    }
    outcome(ok, notes.join("; "))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Option<Duration>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("recurrence suite", c1_recurrences, Some(Duration::from_secs(60))),
        ("operator products annihilate R", c2_theorem1, Some(Duration::from_secs(300))),
        ("second-order operator and eigen-identity", c3_theorem2, None),
        ("printed operators and LCLM", c4_printed, None),
        ("determinantal form, m=2", c5_conjecture_m2, None),
        ("determinantal form, m=3", c6_conjecture_m3, None),
        ("closed-form solutions and ladder maps", c7_closed_forms, None),
        ("holonomic route and extraction table", c8_hgm, None),
        ("distribution sanity", c9_sanity, None),
        ("Monte Carlo bands", c10_monte_carlo, Some(Duration::from_secs(120))),
    ];
    let results: Vec<(bool, String, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f, limit)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = f();
                    let dt = t.elapsed();
                    let slow = limit.is_some_and(|l| dt > l);
                    match r {
                        Ok(o) if slow => (false, format!("{} (over the {:?} budget)", o.detail, limit.unwrap()), dt),
                        Ok(o) => (o.pass, o.detail, dt),
                        Err(e) => (false, format!("error: {e}"), dt),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or((false, "panicked".into(), Duration::ZERO))).collect()
    });
    let mut failed = 0;
    for (i, ((name, _, _), (pass, detail, dt))) in criteria.iter().zip(&results).enumerate() {
        println!("criterion {:>2} {}: {name} [{:.1}s] {detail}", i + 1, if *pass { "PASS" } else { "FAIL" }, dt.as_secs_f64());
        failed += usize::from(!pass);
    }
    println!("acceptance: {}/10 pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
