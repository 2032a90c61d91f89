//! Modified Bessel function of the second kind, order zero.
//!
//! Two regimes, switching at x = 2:
//! * x ≤ 2: the ascending series
//!   K₀(x) = −(ln(x/2) + γ)·I₀(x) + Σ_{k≥1} (x²/4)^k / (k!)² · H_k
//!   with H_k the k-th harmonic number;
//! * x > 2: Temme's continued fraction evaluated with Steed's algorithm,
//!   K₀(x) = √(π/2x)·e^{−x} / s.
//!
//! Both are good to a few ulps; the switchover agrees to ~1e-15 relative.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{BornError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
const SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct K0Eval {
    pub x: f64,
    pub value: f64,
    /// Conservative bound on the truncation plus rounding error.
    pub est_err: f64,
}

/// K₀(x) for x > 0, underflowing to zero past x ≈ 745.
pub fn bessel_k0(x: f64) -> Result<K0Eval> {
    if !(x > 0.0) {
        return Err(BornError::domain(format!(
            "K0 requires a positive argument, got x = {x}"
        )));
    }
    let (value, est_err) = if x.is_infinite() {
        (0.0, 0.0)
    } else if x <= SERIES_LIMIT {
        k0_series(x)
    } else {
        k0_continued_fraction(x)
    };
    Ok(K0Eval { x, value, est_err })
}

/// Value-only K₀ for quadrature loops. Returns NaN for x ≤ 0.
pub fn k0(x: f64) -> f64 {
    bessel_k0(x).map(|e| e.value).unwrap_or(f64::NAN)
}

pub(crate) fn k0_series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let log_part = (0.5 * x).ln() + EULER_GAMMA;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= t / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic <= f64::EPSILON * 0.125 * tail.abs().max(i0) || k >= MAX_TERMS {
            break;
        }
    }
    let value = tail - log_part * i0;
    // remaining terms shrink at least geometrically with ratio 1.5·t/(k+1)²
    let ratio = (1.5 * t / (((k + 1) * (k + 1)) as f64)).min(0.5);
    let trunc = term * harmonic * ratio / (1.0 - ratio) * (1.0 + log_part.abs());
    let rounding = 8.0 * f64::EPSILON * (log_part.abs() * i0 + tail);
    (value, trunc + rounding)
}

pub(crate) fn k0_continued_fraction(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut last = f64::INFINITY;
    for i in 2..MAX_TERMS {
        a -= (2 * (i - 1)) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        last = (dels / s).abs();
        if last < 0.25 * f64::EPSILON {
            break;
        }
    }
    let _ = h;
    let value = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    (value, (last + 8.0 * f64::EPSILON) * value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let k = bessel_k0(1.0).unwrap();
        assert!((k.value - 0.421_024_438_240_708_3).abs() < 1e-15, "{}", k.value);
        let k = bessel_k0(10.0).unwrap();
        assert!((k.value / 1.778_006_231_616_765_2e-5 - 1.0).abs() < 1e-13, "{}", k.value);
    }

    #[test]
    fn regimes_agree_at_switchover() {
        for &x in &[1.6, 1.8, 1.9, 2.0, 2.1, 2.3] {
            let (s, _) = k0_series(x);
            let (c, _) = k0_continued_fraction(x);
            assert!((s / c - 1.0).abs() <= 1e-13, "x={x}: {s} vs {c}");
        }
    }

    #[test]
    fn error_estimates_are_sane() {
        for &x in &[1e-8, 0.1, 1.0, 2.0, 2.5, 10.0, 100.0, 700.0] {
            let e = bessel_k0(x).unwrap();
            assert!(e.est_err >= 0.0);
            assert!(e.est_err <= 1e-13 * e.value, "x={x} err={}", e.est_err);
        }
    }

    #[test]
    fn positivity_and_monotone_decrease() {
        let mut prev = f64::INFINITY;
        let mut x = 1e-8;
        while x < 700.0 {
            let v = k0(x);
            assert!(v > 0.0 && v < prev, "x={x}");
            prev = v;
            x *= 1.07;
        }
    }

    #[test]
    fn logarithmic_singularity() {
        for k in 1..=8 {
            let x = 10f64.powi(-k);
            let v = k0(x);
            assert!((v + x.ln()).abs() < 0.2, "x={x}");
            assert!(x * v < 10.0 * x * (1.0 / x).ln());
        }
        assert!(1e-300 * k0(1e-300) < 1e-297);
    }

    #[test]
    fn underflow_and_domain() {
        assert_eq!(k0(800.0), 0.0);
        assert_eq!(bessel_k0(f64::INFINITY).unwrap().value, 0.0);
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k0(-1.0).is_err());
        assert!(k0(f64::NAN).is_nan());
    }
}
