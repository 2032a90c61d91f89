use std::f64::consts::PI;

use serde::Serialize;

use super::{integrate_adaptive, integrate_semi_infinite, QuadOptions, QuadResult};
use crate::error::{BornError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigKind {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OscDomain {
    /// (0, ∞)
    HalfLine,
    /// (−∞, ∞)
    FullLine,
}

/// Sums kept in the epsilon table.
const EPSILON_WINDOW: usize = 31;
const MIN_TERMS: usize = 4;

/// ∫ g(x)·trig(qx) dx over the half or full line.
///
/// The range is cut at the zeros of trig(qx); each half-period is integrated
/// adaptively and the alternating partial sums are accelerated with Wynn's
/// epsilon algorithm. Summation stops once the accelerated tail bound falls
/// below a tenth of the target accuracy; the cut point is reported as
/// `truncation_radius`. `g` must decay at least like 1/|x|.
pub fn integrate_oscillatory<G: Fn(f64) -> f64>(
    g: G,
    q: f64,
    kind: TrigKind,
    domain: OscDomain,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    opts.validate()?;
    if !(q >= 0.0) || !q.is_finite() {
        return Err(BornError::domain(format!(
            "oscillation frequency must be non-negative and finite, got q = {q}"
        )));
    }
    // fold the full line onto the half line
    let h = |x: f64| match (domain, kind) {
        (OscDomain::HalfLine, _) => g(x),
        (OscDomain::FullLine, TrigKind::Cos) => g(x) + g(-x),
        (OscDomain::FullLine, TrigKind::Sin) => g(x) - g(-x),
    };

    if q == 0.0 {
        return match kind {
            TrigKind::Sin => Ok(QuadResult {
                truncation_radius: Some(0.0),
                ..QuadResult::exact_zero()
            }),
            TrigKind::Cos => integrate_semi_infinite(h, 0.0, opts),
        };
    }

    let half_period = PI / q;
    let first_zero = match kind {
        TrigKind::Sin => half_period,
        TrigKind::Cos => 0.5 * half_period,
    };
    let seg_opts = QuadOptions {
        rel_tol: 0.1 * opts.rel_tol,
        abs_tol: 0.01 * opts.abs_tol,
        ..*opts
    };

    let first = first_segment(&h, q, kind, first_zero, &seg_opts)?;
    let mut nodes = first.nodes;
    let mut seg_err = first.est_err;
    let mut abs_sum = first.abs_integral;
    let mut partial = first.value;
    let mut sums = vec![partial];
    let mut scale = first.value.abs().max(first.abs_integral);
    let mut prev_estimate = f64::NAN;

    for k in 1..=opts.max_half_periods {
        let start = first_zero + (k - 1) as f64 * half_period;
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        let term_opts = QuadOptions {
            abs_tol: seg_opts.abs_tol.max(0.01 * opts.rel_tol * scale * 1e-3),
            ..seg_opts
        };
        let term = integrate_adaptive(
            |t: f64| sign * (q * t).sin() * h(start + t),
            0.0,
            half_period,
            &term_opts,
        )?;
        nodes += term.nodes;
        seg_err += term.est_err;
        abs_sum += term.abs_integral;
        partial += term.value;
        scale = scale.max(partial.abs());
        sums.push(partial);

        let end = start + half_period;
        let roundoff = 64.0 * f64::EPSILON * abs_sum;
        let window = &sums[sums.len().saturating_sub(EPSILON_WINDOW)..];
        let (estimate, accel_err) = wynn_epsilon(window);
        let target = opts
            .abs_tol
            .max(opts.rel_tol * estimate.abs())
            .max(roundoff);

        // plain alternating-series bound
        if k >= MIN_TERMS && term.value.abs() <= 0.1 * target {
            return Ok(QuadResult {
                value: partial,
                est_err: term.value.abs() + seg_err + roundoff,
                nodes,
                truncation_radius: Some(end),
                abs_integral: abs_sum,
            });
        }
        if k >= MIN_TERMS
            && accel_err <= 0.1 * target
            && (estimate - prev_estimate).abs() <= 0.1 * target
        {
            let step = (estimate - prev_estimate).abs();
            return Ok(QuadResult {
                value: estimate,
                est_err: accel_err.max(step) + seg_err + roundoff,
                nodes,
                truncation_radius: Some(end),
                abs_integral: abs_sum,
            });
        }
        prev_estimate = estimate;
    }
    Err(BornError::no_convergence(
        "oscillatory quadrature",
        format!(
            "partial sums did not settle after {} half-periods (q = {q})",
            opts.max_half_periods
        ),
    ))
}

/// [0, first zero], split geometrically from the origin so a narrow feature
/// near x = 0 is not stepped over when the half-period is long.
fn first_segment<H: Fn(f64) -> f64>(
    h: &H,
    q: f64,
    kind: TrigKind,
    end: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let trig = |x: f64| match kind {
        TrigKind::Sin => (q * x).sin(),
        TrigKind::Cos => (q * x).cos(),
    };
    let mut total = QuadResult {
        nodes: 0,
        ..QuadResult::exact_zero()
    };
    let mut lo = 0.0;
    let mut width = end.min(1.0);
    while lo < end {
        let hi = if lo + width >= end * (1.0 - 1e-12) { end } else { lo + width };
        let piece = integrate_adaptive(|x: f64| trig(x) * h(x), lo, hi, opts)?;
        total.value += piece.value;
        total.est_err += piece.est_err;
        total.nodes += piece.nodes;
        total.abs_integral += piece.abs_integral;
        lo = hi;
        width *= 2.0;
    }
    Ok(total)
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the even-column entry with the smallest local error estimate and
/// that estimate.
pub(crate) fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (sums[0], f64::INFINITY),
        _ => {}
    }
    let mut best = sums[n - 1];
    let mut best_err = (sums[n - 1] - sums[n - 2]).abs();
    let mut prev_col: Vec<f64> = vec![0.0; n + 1];
    let mut col: Vec<f64> = sums.to_vec();
    let mut last_even = sums[n - 1];
    let mut k = 0;
    while col.len() >= 2 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for j in 0..col.len() - 1 {
            let diff = col[j + 1] - col[j];
            if diff == 0.0 || !diff.is_finite() {
                return (best, best_err);
            }
            next.push(prev_col[j + 1] + 1.0 / diff);
        }
        prev_col = col;
        col = next;
        k += 1;
        if k % 2 == 0 {
            let cand = col[col.len() - 1];
            if !cand.is_finite() {
                break;
            }
            let err = if col.len() >= 2 {
                (cand - col[col.len() - 2]).abs()
            } else {
                (cand - last_even).abs()
            };
            if err < best_err {
                best = cand;
                best_err = err;
            }
            last_even = cand;
        }
    }
    (best, best_err)
}
