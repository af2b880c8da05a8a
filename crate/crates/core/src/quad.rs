//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_err: T,
    pub intervals: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    err: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let s = f(c - dx) + f(c + dx);
        kron = kron + T::lit(WGK[i]) * s;
        if i % 2 == 1 {
            gauss = gauss + T::lit(WG[i / 2]) * s;
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    Segment { a, b, value, err }
}

/// ∫_a^b f with the error target max(abs_tol, rel_tol·|I|).
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<QuadResult<T>> {
    integrate_with_breaks(f, &[a, b], abs_tol, rel_tol)
}

/// Like [`integrate`], with the initial partition given by `points`.
pub fn integrate_with_breaks<T: Real, F: Fn(T) -> T>(
    f: F,
    points: &[T],
    abs_tol: T,
    rel_tol: T,
) -> Result<QuadResult<T>> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] != w[0] {
            heap.push(gk15(&f, w[0], w[1]));
        }
    }
    if heap.is_empty() {
        return Ok(QuadResult { value: T::zero(), abs_err: T::zero(), intervals: 0 });
    }
    loop {
        let total: T = heap.iter().map(|s| s.value).sum();
        let err: T = heap.iter().map(|s| s.err).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand produced a non-finite value".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, abs_err: err, intervals: heap.len() });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {err} above target after {MAX_INTERVALS} intervals"
            )));
        }
        let worst = heap.pop().unwrap();
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution; accept it as is
            let total: T = heap.iter().map(|s| s.value).sum::<T>() + worst.value;
            let err: T = heap.iter().map(|s| s.err).sum::<T>() + worst.err;
            return Ok(QuadResult { value: total, abs_err: err, intervals: heap.len() + 1 });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let r = integrate(|t: f64| t * t, 0.0, 3.0, 1e-14, 1e-14).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
        let r = integrate(|t: f64| t * t * (-t).exp(), 0.0, 2.0, 1e-15, 1e-14).unwrap();
        assert!((r.value - 0.646_647_167_633_873_1).abs() < 1e-14);
    }

    #[test]
    fn single_precision() {
        let r = integrate(|t: f32| t.sin(), 0.0, std::f32::consts::PI, 1e-6, 1e-6).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5);
    }

    #[test]
    fn breaks_and_peaks() {
        let f = |t: f64| 1.0 / ((t - 0.3).powi(2) + 1e-4);
        let r = integrate_with_breaks(f, &[0.0, 0.3, 1.0], 1e-12, 1e-12).unwrap();
        let exact = 100.0 * ((70.0f64).atan() + (30.0f64).atan());
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }
}
