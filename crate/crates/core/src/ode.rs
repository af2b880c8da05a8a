//! Dormand–Prince 5(4) with adaptive steps, forward or backward in t.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// First trial step; 0 picks one from the tolerances.
    pub h_init: T,
    pub max_steps: usize,
}

impl<T: Real> OdeOptions<T> {
    pub fn new(rtol: T, atol: T) -> Self {
        OdeOptions { rtol, atol, h_init: T::zero(), max_steps: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus the embedded fourth-order ones
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// y(t1) for y' = f(t, y), y(t0) = y0.
pub fn dopri5<T: Real, F: FnMut(T, &[T], &mut [T])>(
    mut f: F,
    t0: T,
    y0: &[T],
    t1: T,
    opts: &OdeOptions<T>,
) -> Result<(Vec<T>, OdeStats)> {
    let d = y0.len();
    let mut y = y0.to_vec();
    let mut stats = OdeStats::default();
    if t1 == t0 {
        return Ok((y, stats));
    }
    let dir = if t1 > t0 { T::one() } else { -T::one() };
    let span = (t1 - t0).abs();
    let mut k: Vec<Vec<T>> = vec![vec![T::zero(); d]; 7];
    f(t0, &y, &mut k[0]);
    let mut h = if opts.h_init > T::zero() { opts.h_init } else { initial_step(&y, &k[0], opts, span) };
    let mut t = t0;
    let mut ytmp = vec![T::zero(); d];
    let mut ynew = vec![T::zero(); d];
    let (safety, fac_min, fac_max) = (T::lit(0.9), T::lit(0.2), T::lit(5.0));
    let fifth = T::lit(0.2);
    for _ in 0..opts.max_steps {
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = h * dir;
        for s in 1..7 {
            for i in 0..d {
                let mut acc = y[i];
                for (r, kr) in k.iter().enumerate().take(s) {
                    let a = A[s][r];
                    if a != 0.0 {
                        acc = acc + hs * T::lit(a) * kr[i];
                    }
                }
                ytmp[i] = acc;
            }
            f(t + hs * T::lit(C[s]), &ytmp, &mut k[s]);
            if s == 6 {
                ynew.copy_from_slice(&ytmp);
            }
        }
        let mut err = T::zero();
        for i in 0..d {
            let mut e = T::zero();
            for (r, kr) in k.iter().enumerate() {
                if E[r] != 0.0 {
                    e = e + T::lit(E[r]) * kr[i];
                }
            }
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            let q = hs * e / sc;
            err = err + q * q;
        }
        let err = (err / T::from_usize_(d.max(1))).sqrt();
        if !err.is_finite() {
            h = h * fac_min;
            stats.rejected += 1;
        } else if err <= T::one() {
            stats.accepted += 1;
            t = if last { t1 } else { t + hs };
            y.copy_from_slice(&ynew);
            if last {
                return Ok((y, stats));
            }
            // first-same-as-last
            let k6 = k[6].clone();
            k[0] = k6;
            let fac = if err == T::zero() { fac_max } else { (safety * err.powf(-fifth)).min(fac_max) };
            h = h * fac.max(T::one());
        } else {
            stats.rejected += 1;
            h = h * (safety * err.powf(-fifth)).max(fac_min);
        }
        if h <= T::epsilon() * T::lit(16.0) * t.abs().max(T::one()) {
            return Err(Error::StepSizeUnderflow(t.to_f64().unwrap_or(f64::NAN)));
        }
    }
    Err(Error::NonConvergence { what: "Dormand-Prince integration", iterations: opts.max_steps })
}

fn initial_step<T: Real>(y: &[T], dy: &[T], opts: &OdeOptions<T>, span: T) -> T {
    let mut d0 = T::zero();
    let mut d1 = T::zero();
    for (a, b) in y.iter().zip(dy) {
        let sc = opts.atol + opts.rtol * a.abs();
        d0 = d0 + (*a / sc) * (*a / sc);
        d1 = d1 + (*b / sc) * (*b / sc);
    }
    let h = if d0 < T::lit(1e-10) || d1 < T::lit(1e-10) { T::lit(1e-6) } else { T::lit(0.01) * (d0 / d1).sqrt() };
    h.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let opts = OdeOptions::new(1e-11, 1e-14);
        let (y, st) = dopri5(|_, y: &[f64], o: &mut [f64]| o[0] = y[0], 0.0, &[1.0], 3.0, &opts).unwrap();
        assert!((y[0] - 3f64.exp()).abs() < 1e-9 * 3f64.exp());
        assert!(st.accepted > 0);
    }

    #[test]
    fn harmonic_backward_and_round_trip() {
        let opts = OdeOptions::new(1e-12, 1e-14);
        let rhs = |_: f64, y: &[f64], o: &mut [f64]| {
            o[0] = y[1];
            o[1] = -y[0];
        };
        let (a, _) = dopri5(rhs, 1.0, &[1f64.sin(), 1f64.cos()], -2.0, &opts).unwrap();
        assert!((a[0] - (-2f64).sin()).abs() < 1e-10);
        let (b, _) = dopri5(rhs, -2.0, &a, 1.0, &opts).unwrap();
        assert!((b[0] - 1f64.sin()).abs() < 1e-10 && (b[1] - 1f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn zero_length_returns_start() {
        let opts = OdeOptions::new(1e-10, 1e-13);
        let (y, st) = dopri5(|_, _: &[f64], o: &mut [f64]| o[0] = 1.0, 2.0, &[5.0], 2.0, &opts).unwrap();
        assert_eq!(y, vec![5.0]);
        assert_eq!(st, OdeStats::default());
    }

    #[test]
    fn f32_works() {
        let opts = OdeOptions::new(1e-5f32, 1e-7);
        let (y, _) = dopri5(|t: f32, _: &[f32], o: &mut [f32]| o[0] = 2.0 * t, 0.0, &[0.0], 2.0, &opts).unwrap();
        assert!((y[0] - 4.0).abs() < 1e-4);
    }
}
