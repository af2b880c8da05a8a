//! Command-line front end: evaluation, tabulation, holonomic trajectories,
//! Monte Carlo comparison and verification reports.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use wishart_roots::distribution::conjecture::{m2_bracket_identity, m3_first_coefficient_identity};
use wishart_roots::distribution::{self as dist, EvalConfig, Evaluation, Method, Quantity, WishartParams};
use wishart_roots::h_integrals::relation_grid;
use wishart_roots::hgm;
use wishart_roots::mc_validator::{self, McConfig};
use wishart_roots::operators::{verify_printed, verify_theorem1, verify_theorem2, CheckReport, PrintedOperator};
use wishart_roots::special_fn::incomplete_gamma;
use wishart_roots::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const THREADS_ENV: &str = "WISHART_ROOTS_THREADS";

const DEFAULT_POINTS: usize = 100;
const DEFAULT_OPERATOR_ORDER: usize = 9;
const DEFAULT_RECURRENCE_DEPTH: usize = 6;
const DEFAULT_RECURRENCE_N: u32 = 8;
const RECURRENCE_POINTS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
const CONJECTURE_POINTS: [f64; 6] = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

// Printed transcriptions known not to annihilate R; reported, not gating.
const KNOWN_MISPRINTS: [PrintedOperator; 2] = [PrintedOperator::Rank8Second, PrintedOperator::M3Order4Sum];

#[derive(Parser, Debug)]
#[command(name = "wishart-roots", version, about = "Largest eigenvalue of a non-central complex Wishart matrix")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Distribution function at --x (comma list) or on a grid.
    Cdf(Flags),
    /// Density at --x (comma list) or on a grid.
    Pdf(Flags),
    /// Distribution function and density on --x-min..--x-max.
    Table(Flags),
    /// Holonomic gradient trajectory: basis vector, cdf, R and density.
    Hgm(Flags),
    /// Empirical distribution of the largest eigenvalue against a route.
    Mc(Flags),
    /// Exact and numerical verification reports as JSON.
    Verify {
        what: VerifyWhat,
        /// Also check the printed operators for this m.
        #[arg(long)]
        printed: bool,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VerifyWhat {
    Operators,
    Recurrences,
    Conjecture,
}

/// Flags shared by every subcommand; a JSON config file with the same keys
/// supplies defaults.
#[derive(Args, Deserialize, Default, Debug, Clone)]
#[serde(default, deny_unknown_fields)]
struct Flags {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "x-min")]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(alias = "x-max")]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// quadrature, series, conjecture, hgm or all.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// JSON file with default values for the other flags.
    #[arg(long)]
    #[serde(skip)]
    json: Option<PathBuf>,
}

impl Flags {
    fn merged(self) -> Result<Flags, Failure> {
        let Some(path) = &self.json else { return Ok(self) };
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let base: Flags =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
        Ok(Flags {
            n: self.n.or(base.n),
            m: self.m.or(base.m),
            lambda: self.lambda.or(base.lambda),
            x: self.x.or(base.x),
            x_min: self.x_min.or(base.x_min),
            x_max: self.x_max.or(base.x_max),
            points: self.points.or(base.points),
            method: self.method.or(base.method),
            order: self.order.or(base.order),
            tol: self.tol.or(base.tol),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            json: None,
        })
    }

    fn params(&self) -> Result<WishartParams, Failure> {
        let lambda = self.lambda.clone().ok_or_else(|| Failure::Usage("--lambda is required".into()))?;
        let n = self.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
        let m = self.m.unwrap_or(lambda.len());
        WishartParams::new(n, m, &lambda).map_err(usage)
    }

    fn methods(&self) -> Result<Vec<Method>, Failure> {
        match self.method.as_deref() {
            None => Ok(vec![Method::Quadrature]),
            Some("all") => Ok(Method::ALL.to_vec()),
            Some(s) => Ok(vec![s.parse().map_err(usage)?]),
        }
    }

    fn config(&self, method: Method) -> Result<EvalConfig, Failure> {
        let mut cfg = EvalConfig::with_method(method);
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Failure::Usage(format!("--tol must be positive, got {t}")));
            }
            cfg.rtol = t;
        }
        if let Some(o) = self.order {
            cfg.order = o;
        }
        Ok(cfg)
    }

    /// --x if given, else an evenly spaced grid.
    fn xs(&self, p: Option<&WishartParams>) -> Result<Vec<f64>, Failure> {
        if let Some(x) = &self.x {
            if self.x_min.is_some() || self.x_max.is_some() {
                return Err(Failure::Usage("--x excludes --x-min/--x-max".into()));
            }
            return check_xs(x.clone());
        }
        let lo = self.x_min.unwrap_or(0.0);
        let hi = match (self.x_max, p) {
            (Some(h), _) => h,
            (None, Some(p)) => p.upper_cutoff(),
            (None, None) => return Err(Failure::Usage("--x or --x-max is required".into())),
        };
        let k = self.points.unwrap_or(DEFAULT_POINTS);
        if k == 0 || !(hi >= lo) || (k > 1 && hi == lo) {
            return Err(Failure::Usage(format!("empty grid: {k} points on [{lo}, {hi}]")));
        }
        let step = if k > 1 { (hi - lo) / (k - 1) as f64 } else { 0.0 };
        check_xs((0..k).map(|i| if i + 1 == k && k > 1 { hi } else { lo + step * i as f64 }).collect())
    }
}

fn check_xs(xs: Vec<f64>) -> Result<Vec<f64>, Failure> {
    if xs.is_empty() {
        return Err(Failure::Usage("no evaluation points".into()));
    }
    if let Some(x) = xs.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Failure::Usage(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(xs)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) => EXIT_NUMERIC,
            Failure::Verification(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(s) | Failure::Numeric(s) | Failure::Verification(s) => s,
        }
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

fn num(v: f64) -> String {
    // + 0.0 folds −0 into 0
    format!("{:.16e}", v + 0.0)
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Diagnostics go to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(cli.cmd, &mut obuf, &mut ebuf)));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "wishart-roots: {}", f.message());
            f.code()
        }
    }
}

/// Entry point for the binary.
pub fn run(argv: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_with(argv, &mut out, &mut stderr.lock());
    if out.flush().is_err() {
        return EXIT_NUMERIC;
    }
    code
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let k: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        b = b.num_threads(k);
    }
    b.build().map_err(numeric)
}

fn dispatch(cmd: Cmd, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<(), Failure> {
    match cmd {
        Cmd::Cdf(f) => point_values(Quantity::Cdf, f.merged()?, out, err),
        Cmd::Pdf(f) => point_values(Quantity::Pdf, f.merged()?, out, err),
        Cmd::Table(f) => table(f.merged()?, out, err),
        Cmd::Hgm(f) => hgm_trajectory(f.merged()?, out),
        Cmd::Mc(f) => monte_carlo(f.merged()?, out),
        Cmd::Verify { what, printed, flags } => {
            let f = flags.merged()?;
            match what {
                VerifyWhat::Operators => verify_operators(&f, printed, out),
                VerifyWhat::Recurrences => verify_recurrences(&f, out),
                VerifyWhat::Conjecture => verify_conjecture(&f, out),
            }
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Numeric(format!("write failed: {e}"))
}

/// Evaluates every route on the grid. A route that is unavailable for the
/// quantity leaves empty cells; any other failure is reported and turns the
/// exit code into a numeric failure after the table is written.
struct Columns {
    methods: Vec<Method>,
    cells: Vec<Vec<Option<Evaluation>>>,
    failures: Vec<String>,
}

fn evaluate(q: Quantity, p: &WishartParams, xs: &[f64], f: &Flags) -> Result<Columns, Failure> {
    let methods = f.methods()?;
    let cfgs = methods.iter().map(|&m| f.config(m)).collect::<Result<Vec<_>, _>>()?;
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    for (m, cfg) in methods.iter().zip(&cfgs) {
        let col = dist::eval_grid(q, p, xs, cfg);
        let mut vals = Vec::with_capacity(xs.len());
        for (x, r) in xs.iter().zip(col) {
            match r {
                Ok(e) => vals.push(Some(e)),
                Err(Error::Unavailable(_)) if methods.len() > 1 => vals.push(None),
                Err(Error::Unavailable(s)) => return Err(Failure::Usage(format!("{m}: {s}"))),
                Err(e) => {
                    failures.push(format!("{m} at x = {x}: {e}"));
                    vals.push(None);
                }
            }
        }
        cells.push(vals);
    }
    Ok(Columns { methods, cells, failures })
}

fn finish(failures: &[String], err: &mut Vec<u8>) -> Result<(), Failure> {
    for s in failures {
        let _ = writeln!(err, "wishart-roots: {s}");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("{} evaluation(s) failed", failures.len())))
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn point_values(q: Quantity, f: Flags, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<(), Failure> {
    let p = f.params()?;
    let xs = f.xs(Some(&p))?;
    let c = evaluate(q, &p, &xs, &f)?;
    if c.methods.len() == 1 {
        let m = c.methods[0];
        writeln!(out, "x,value,method,err_est").map_err(io)?;
        for (x, e) in xs.iter().zip(&c.cells[0]) {
            let (v, e) = (cell(e.map(|e| e.value)), cell(e.map(|e| e.err_est)));
            writeln!(out, "{},{v},{m},{e}", num(*x)).map_err(io)?;
        }
    } else {
        let head: Vec<&str> = c.methods.iter().map(|m| m.name()).collect();
        writeln!(out, "x,{}", head.join(",")).map_err(io)?;
        for (i, x) in xs.iter().enumerate() {
            let row: Vec<String> = c.cells.iter().map(|col| cell(col[i].map(|e| e.value))).collect();
            writeln!(out, "{},{}", num(*x), row.join(",")).map_err(io)?;
        }
    }
    finish(&c.failures, err)
}

fn table(f: Flags, out: &mut Vec<u8>, err: &mut Vec<u8>) -> Result<(), Failure> {
    let p = f.params()?;
    let xs = f.xs(Some(&p))?;
    let cdf = evaluate(Quantity::Cdf, &p, &xs, &f)?;
    let pdf = evaluate(Quantity::Pdf, &p, &xs, &f)?;
    if cdf.methods.len() == 1 {
        let m = cdf.methods[0];
        writeln!(out, "x,cdf,pdf,method,cdf_err,pdf_err").map_err(io)?;
        for (i, x) in xs.iter().enumerate() {
            let (a, b) = (cdf.cells[0][i], pdf.cells[0][i]);
            writeln!(
                out,
                "{},{},{},{m},{},{}",
                num(*x),
                cell(a.map(|e| e.value)),
                cell(b.map(|e| e.value)),
                cell(a.map(|e| e.err_est)),
                cell(b.map(|e| e.err_est))
            )
            .map_err(io)?;
        }
    } else {
        let mut head = vec!["x".to_string()];
        head.extend(cdf.methods.iter().map(|m| format!("cdf_{m}")));
        head.extend(pdf.methods.iter().map(|m| format!("pdf_{m}")));
        writeln!(out, "{}", head.join(",")).map_err(io)?;
        for (i, x) in xs.iter().enumerate() {
            let mut row = vec![num(*x)];
            row.extend(cdf.cells.iter().chain(&pdf.cells).map(|col| cell(col[i].map(|e| e.value))));
            writeln!(out, "{}", row.join(",")).map_err(io)?;
        }
    }
    let failures: Vec<String> = cdf.failures.into_iter().chain(pdf.failures).collect();
    finish(&failures, err)
}

fn hgm_trajectory(f: Flags, out: &mut Vec<u8>) -> Result<(), Failure> {
    let p = f.params()?;
    let xs = f.xs(Some(&p))?;
    if f.method.as_deref().is_some_and(|m| m != "hgm") {
        return Err(Failure::Usage("the hgm command has no --method choice".into()));
    }
    let cfg = f.config(Method::Hgm)?;
    let rows = hgm::trajectory(&p, &xs, &cfg).into_iter().collect::<Result<Vec<_>, _>>().map_err(numeric)?;
    hgm::write_trajectory_csv(out, &rows).map_err(io)
}

fn monte_carlo(f: Flags, out: &mut Vec<u8>) -> Result<(), Failure> {
    let p = f.params()?;
    let methods = f.methods()?;
    let [method] = methods[..] else {
        return Err(Failure::Usage("mc compares against one --method".into()));
    };
    if method == Method::Conjecture {
        return Err(Failure::Usage("the conjecture route gives the density only".into()));
    }
    let cfg = f.config(method)?;
    let mut mc = McConfig::default();
    if let Some(s) = f.samples {
        mc.samples = s;
    }
    if let Some(s) = f.seed {
        mc.seed = s;
    }
    let samples = mc_validator::sample_largest_eig(&p, &mc).map_err(usage)?;
    let report = mc_validator::compare_cdf_samples(&samples, |x| dist::cdf(&p, x, &cfg)).map_err(numeric)?;
    mc_validator::write_report_csv(out, &report).map_err(io)?;
    if report.pass() {
        Ok(())
    } else {
        let outside = report.points.iter().filter(|c| !c.inside()).count();
        Err(Failure::Verification(format!("{outside} of {} quantiles outside the 99.9% band", report.points.len())))
    }
}

fn emit<T: Serialize>(out: &mut Vec<u8>, v: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(numeric)?;
    writeln!(out).map_err(io)
}

#[derive(Serialize)]
struct OperatorReport {
    n: u32,
    m: usize,
    order: usize,
    checks: Vec<CheckReport>,
    /// Printed transcriptions that are known to leave a residual.
    informational: Vec<CheckReport>,
    pass: bool,
}

fn verify_operators(f: &Flags, printed: bool, out: &mut Vec<u8>) -> Result<(), Failure> {
    let n = f.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
    let m = f.m.or(f.lambda.as_ref().map(Vec::len)).ok_or_else(|| Failure::Usage("--m is required".into()))?;
    if m == 0 || (n as usize) < m {
        return Err(Failure::Usage(format!("need n >= m >= 1, got n={n}, m={m}")));
    }
    let order = f.order.unwrap_or(DEFAULT_OPERATOR_ORDER);
    let mut checks = verify_theorem1(n, m, order).map_err(numeric)?;
    checks.extend(verify_theorem2(n, m, order).map_err(numeric)?);
    let mut informational = Vec::new();
    if printed {
        for op in PrintedOperator::ALL.into_iter().filter(|op| op.m() == m) {
            let r = verify_printed(op, n, order).map_err(numeric)?;
            if KNOWN_MISPRINTS.contains(&op) {
                informational.push(r);
            } else {
                checks.push(r);
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    emit(out, &OperatorReport { n, m, order, checks, informational, pass })?;
    verdict(pass, "operator residuals are not all zero")
}

fn verdict(pass: bool, what: &str) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification(what.into()))
    }
}

#[derive(Serialize)]
struct RecurrenceReport {
    instances: usize,
    points: usize,
    worst_relative_residual: f64,
    worst_relation: String,
    gamma_recurrence_residual: f64,
    tol: f64,
    pass: bool,
}

fn verify_recurrences(f: &Flags, out: &mut Vec<u8>) -> Result<(), Failure> {
    let depth = f.order.unwrap_or(DEFAULT_RECURRENCE_DEPTH);
    let nmax = f.n.unwrap_or(DEFAULT_RECURRENCE_N);
    let tol = f.tol.unwrap_or(1e-10);
    if nmax < 2 || !(tol > 0.0) {
        return Err(Failure::Usage("need --n >= 2 and --tol > 0".into()));
    }
    let rels = relation_grid(depth as u32, depth as u32, nmax);
    let mut worst = (0.0f64, String::new());
    for r in &rels {
        for &x in &RECURRENCE_POINTS {
            for &y in &RECURRENCE_POINTS {
                let v = r.relative_residual(x, y).map_err(numeric)?;
                if v > worst.0 || worst.1.is_empty() {
                    worst = (v.max(worst.0), r.name.to_string());
                }
            }
        }
    }
    let mut gamma = 0.0f64;
    for a in 1..=8 {
        let a = a as f64;
        for &x in &RECURRENCE_POINTS {
            let lhs = incomplete_gamma(a + 1.0, x).map_err(numeric)?;
            let rhs = a * incomplete_gamma(a, x).map_err(numeric)? - x.powf(a) * (-x).exp();
            gamma = gamma.max((lhs - rhs).abs() / lhs.abs());
        }
    }
    let pass = worst.0 < tol && gamma < tol;
    let points = RECURRENCE_POINTS.len().pow(2);
    emit(
        out,
        &RecurrenceReport {
            instances: rels.len(),
            points,
            worst_relative_residual: worst.0,
            worst_relation: worst.1,
            gamma_recurrence_residual: gamma,
            tol,
            pass,
        },
    )?;
    verdict(pass, "recurrence residuals exceed the tolerance")
}

#[derive(Serialize)]
struct ConjecturePoint {
    x: f64,
    conjecture: f64,
    quadrature: f64,
    relative_difference: f64,
}

#[derive(Serialize)]
struct ConjectureReport {
    n: u32,
    lambda: Vec<f64>,
    points: Vec<ConjecturePoint>,
    worst_relative_difference: f64,
    tol: f64,
    exact_identities: Vec<bool>,
    pass: bool,
}

fn verify_conjecture(f: &Flags, out: &mut Vec<u8>) -> Result<(), Failure> {
    let p = f.params()?;
    let xs = if f.x.is_some() || f.x_max.is_some() { f.xs(Some(&p))? } else { CONJECTURE_POINTS.to_vec() };
    let tol = f.tol.unwrap_or(if p.m() <= 2 { 1e-8 } else { 1e-6 });
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let cj = dist::eval_grid(Quantity::Pdf, &p, &xs, &EvalConfig::with_method(Method::Conjecture));
    let qd = dist::eval_grid(Quantity::Pdf, &p, &xs, &EvalConfig::default());
    let mut points = Vec::new();
    for ((x, a), b) in xs.iter().zip(cj).zip(qd) {
        let a = a.map_err(|e| match e {
            Error::Unavailable(s) => Failure::Usage(s),
            e => numeric(e),
        })?;
        let b = b.map_err(numeric)?;
        let d = (a.value - b.value).abs() / b.value.abs().max(f64::MIN_POSITIVE);
        points.push(ConjecturePoint { x: *x, conjecture: a.value, quadrature: b.value, relative_difference: d });
    }
    let worst = points.iter().map(|c| c.relative_difference).fold(0.0, f64::max);
    let exact_identities = match p.m() {
        2 => m2_bracket_identity(p.n()).map_err(numeric)?.to_vec(),
        3 => m3_first_coefficient_identity(p.n()).map_err(numeric)?.to_vec(),
        _ => Vec::new(),
    };
    let pass = worst <= tol && exact_identities.iter().all(|&b| b);
    let lambda = p.lambdas().to_vec();
    emit(out, &ConjectureReport { n: p.n(), lambda, points, worst_relative_difference: worst, tol, exact_identities, pass })?;
    verdict(pass, "the determinantal form disagrees with quadrature")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(args: &[&str]) -> Flags {
        let mut argv = vec!["wishart-roots", "cdf"];
        argv.extend_from_slice(args);
        match Cli::try_parse_from(argv).unwrap().cmd {
            Cmd::Cdf(f) => f,
            _ => unreachable!(),
        }
    }

    #[test]
    fn grid_includes_both_ends() {
        let xs = flags(&["--x-min", "0.5", "--x-max", "20", "--points", "40"]).xs(None).unwrap();
        assert_eq!(xs.len(), 40);
        assert_eq!((xs[0], xs[39]), (0.5, 20.0));
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn single_point_grid() {
        assert_eq!(flags(&["--x-min", "2", "--x-max", "2", "--points", "1"]).xs(None).unwrap(), vec![2.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        for args in [
            &["--x-min", "3", "--x-max", "1"][..],
            &["--x-max", "2", "--points", "0"],
            &["--x", "1", "--x-max", "2"],
            &["--x", "-1"],
            &["--points", "5"],
        ] {
            assert!(matches!(flags(args).xs(None), Err(Failure::Usage(_))), "{args:?}");
        }
    }

    #[test]
    fn m_defaults_to_lambda_count() {
        let p = flags(&["--n", "4", "--lambda", "2,1"]).params().unwrap();
        assert_eq!((p.n(), p.m()), (4, 2));
        assert!(matches!(flags(&["--n", "4", "--m", "3", "--lambda", "2,1"]).params(), Err(Failure::Usage(_))));
    }

    #[test]
    fn method_all_expands() {
        assert_eq!(flags(&["--method", "all"]).methods().unwrap(), Method::ALL.to_vec());
        assert!(flags(&["--method", "newton"]).methods().is_err());
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, 123456.789] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
