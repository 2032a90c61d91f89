//! The Coulomb routes.
//!
//! The Coulomb potential has no absolutely convergent Born integral, so each
//! route regularizes it differently:
//!
//! * screened limit: Yukawa amplitudes by real quadrature, extrapolated to λ → 0;
//! * cylindrical: the z-integral first (giving 2K₀(qρ)), then ρ;
//! * hard mode: the same iterated integral with q tilted off the z axis.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;

use super::{
    amplitude_sign, born_radial, check_mass, check_q_positive, Amplitude, BornOptions,
    Diagnostics, Method,
};
use crate::potentials::{RadialPotential, SignConvention};
use crate::quadrature::{
    extrapolate_to_zero_with_errors, integrate_adaptive, integrate_oscillatory,
    integrate_semi_infinite, EndpointSingularity, OscDomain, QuadOptions, TrigKind,
};
use crate::specfun::bessel_k0;
use crate::{BornError, Result};

fn check_coupling(e2: f64) -> Result<()> {
    if e2 > 0.0 && e2.is_finite() {
        Ok(())
    } else {
        Err(BornError::domain(format!(
            "coupling e2 must be positive and finite, got {e2}"
        )))
    }
}

/// f = ∓2me²/q².
pub fn coulomb_closed(m: f64, e2: f64, sign: SignConvention, q: f64) -> Result<Amplitude> {
    check_mass(m)?;
    check_coupling(e2)?;
    check_q_positive(q)?;
    let value = amplitude_sign(sign) * 2.0 * m * e2 / (q * q);
    Ok(Amplitude::exact(value, Method::ClosedForm))
}

/// f = ∓2me²/(q² + λ²). Reserved for oracles and the `closed_form` route on
/// Yukawa inputs; the screened route never calls it.
pub fn yukawa_closed(
    m: f64,
    e2: f64,
    lambda: f64,
    sign: SignConvention,
    q: f64,
) -> Result<Amplitude> {
    if lambda == 0.0 {
        return coulomb_closed(m, e2, sign, q);
    }
    check_mass(m)?;
    check_coupling(e2)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(BornError::domain(format!(
            "screening mass lambda must be non-negative and finite, got {lambda}"
        )));
    }
    if !(q >= 0.0) || !q.is_finite() {
        return Err(BornError::domain(format!(
            "momentum transfer must be non-negative and finite, got q = {q}"
        )));
    }
    let value = amplitude_sign(sign) * 2.0 * m * e2 / (q * q + lambda * lambda);
    Ok(Amplitude::exact(value, Method::ClosedForm))
}

/// Yukawa amplitudes by quadrature on the λ ladder, extrapolated to λ = 0.
pub fn coulomb_screened_limit(
    m: f64,
    e2: f64,
    sign: SignConvention,
    q: f64,
    opts: &BornOptions,
) -> Result<Amplitude> {
    check_mass(m)?;
    check_coupling(e2)?;
    check_q_positive(q)?;
    opts.ladder.validate()?;
    let lambdas = opts.ladder.values();
    let mut samples = Vec::with_capacity(lambdas.len());
    let mut errors = Vec::with_capacity(lambdas.len());
    let mut nodes = 0;
    for &lambda in &lambdas {
        let pot = RadialPotential::yukawa(e2, lambda, sign)?;
        let amp = born_radial(&pot, m, q, opts)?;
        samples.push((lambda, amp.value));
        errors.push(amp.est_err);
        nodes += amp.diagnostics.nodes;
    }
    let report = extrapolate_to_zero_with_errors(&samples, &errors, opts.model)?;
    Ok(Amplitude {
        value: report.extrapolated,
        method: Method::ScreenedLimit,
        est_err: report.est_err,
        diagnostics: Diagnostics {
            nodes,
            extrapolation: Some(report),
            ..Diagnostics::default()
        },
    })
}

/// Error recorded inside a quadrature callback, which can only return f64.
#[derive(Default)]
struct Deferred {
    error: RefCell<Option<BornError>>,
    inner_nodes: Cell<usize>,
    /// (ρ, outer weight × inner error estimate) at every outer node.
    inner_errors: RefCell<Vec<(f64, f64)>>,
}

impl Deferred {
    fn record<T>(&self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let mut slot = self.error.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                None
            }
        }
    }

    fn failed(&self) -> bool {
        self.error.borrow().is_some()
    }

    fn take(&self) -> Option<BornError> {
        self.error.borrow_mut().take()
    }

    fn note_inner(&self, rho: f64, nodes: usize, weighted_err: f64) {
        self.inner_nodes.set(self.inner_nodes.get() + nodes);
        self.inner_errors.borrow_mut().push((rho, weighted_err));
    }

    /// ∫ weight·err_inner dρ by the trapezoid rule over the outer nodes: how
    /// far the inner errors can move the outer integral.
    fn propagated_inner_error(&self) -> f64 {
        let mut pts = self.inner_errors.borrow().clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }
}

/// ∫_{−∞}^{∞} cos(qz)/√(ρ² + z²) dz by the oscillatory engine.
fn inner_z_integral(rho: f64, q: f64, quad: &QuadOptions) -> Result<crate::quadrature::QuadResult> {
    integrate_oscillatory(
        |z: f64| 1.0 / rho.hypot(z),
        q,
        TrigKind::Cos,
        OscDomain::FullLine,
        quad,
    )
}

/// Ordered iterated integral in cylindrical coordinates: z first, then ρ.
///
/// In validated mode the z-integral is 2K₀(qρ) from [`bessel_k0`]. In strict
/// mode it is computed by oscillatory quadrature at every outer node and
/// compared with 2K₀(qρ); a deviation above ten times the combined error
/// estimate is an error.
pub fn coulomb_cylindrical(
    m: f64,
    e2: f64,
    sign: SignConvention,
    q: f64,
    opts: &BornOptions,
) -> Result<Amplitude> {
    check_mass(m)?;
    check_coupling(e2)?;
    check_q_positive(q)?;
    opts.validate()?;
    let quad = opts.quad();
    let deferred = Deferred::default();
    let max_ratio = Cell::new(0.0f64);

    let inner = |rho: f64| -> f64 {
        if deferred.failed() {
            return 0.0;
        }
        let Some(k0) = deferred.record(bessel_k0(q * rho)) else {
            return 0.0;
        };
        if !opts.strict {
            return 2.0 * k0.value;
        }
        let Some(z) = deferred.record(inner_z_integral(rho, q, &quad)) else {
            return 0.0;
        };
        let reference = 2.0 * k0.value;
        let combined =
            z.est_err + 2.0 * k0.est_err + 8.0 * f64::EPSILON * (reference.abs() + z.abs_integral);
        let ratio = (z.value - reference).abs() / combined;
        max_ratio.set(max_ratio.get().max(ratio));
        deferred.note_inner(rho, z.nodes, rho * z.est_err);
        if ratio > 10.0 {
            deferred.record::<()>(Err(BornError::StrictCheck(format!(
                "inner z-integral at rho = {rho} is {} but 2K0(q rho) = {reference}; \
                 deviation exceeds 10x the combined error estimate {combined}",
                z.value
            ))));
        }
        z.value
    };

    let outer_opts = quad.with_singularity(EndpointSingularity::Left);
    let outer = integrate_semi_infinite(|rho: f64| rho * inner(rho), 0.0, &outer_opts);
    if let Some(e) = deferred.take() {
        return Err(e);
    }
    let outer = outer?;

    let prefactor = amplitude_sign(sign) * m * e2;
    let value = prefactor * outer.value;
    let inner_err = prefactor.abs() * deferred.propagated_inner_error();
    Ok(Amplitude {
        value,
        method: Method::Cylindrical,
        est_err: prefactor.abs() * outer.est_err + inner_err,
        diagnostics: Diagnostics {
            nodes: outer.nodes + deferred.inner_nodes.get(),
            truncation_radius: outer.truncation_radius,
            quadrature: Some(outer),
            strict_max_deviation_ratio: opts.strict.then(|| max_ratio.get()),
            ..Diagnostics::default()
        },
    })
}

/// Outer cut-off in units of the decay length 1/|b| of K₀(|b|ρ).
const HARD_MODE_DECAY_LENGTHS: f64 = 60.0;

/// ∫₀^{2π} cos(x cos φ) dφ by the periodic trapezoid rule, which converges
/// geometrically once the node count exceeds x.
fn azimuthal_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 2.0 * PI;
    }
    let n = ((x.abs() + 40.0).ceil() as usize).next_power_of_two();
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n).map(|j| (x * (j as f64 * h).cos()).cos()).sum();
    sum * h
}

/// Oppenheimer's orientation: q·r = pρ sinθ cos φ + p(cos θ − 1) z.
///
/// The φ-integral no longer trivializes, so the integrand carries an
/// azimuthal factor Φ(ρ) and the z-integral runs at frequency |b| = 2p sin²(θ/2).
/// Expensive: every outer node costs a full oscillatory z-integral.
pub fn coulomb_oppenheimer_hard_mode(
    m: f64,
    e2: f64,
    sign: SignConvention,
    p: f64,
    theta: f64,
    opts: &BornOptions,
) -> Result<Amplitude> {
    check_mass(m)?;
    check_coupling(e2)?;
    opts.validate()?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(BornError::domain(format!(
            "momentum p must be positive and finite, got {p}"
        )));
    }
    if !(theta > 0.0 && theta <= PI) {
        return Err(BornError::domain(format!(
            "hard mode needs theta in (0, pi], got {theta}"
        )));
    }
    let (a, b) = hard_mode_coefficients(p, theta);
    let freq = b.abs();
    let quad = opts.quad();
    let deferred = Deferred::default();

    let integrand = |rho: f64| -> f64 {
        if deferred.failed() || rho <= 0.0 {
            return 0.0;
        }
        let Some(z) = deferred.record(inner_z_integral(rho, freq, &quad)) else {
            return 0.0;
        };
        let phi = azimuthal_integral(a * rho);
        deferred.note_inner(rho, z.nodes, rho * phi.abs() * z.est_err);
        rho * phi * z.value
    };
    let outer_opts = quad.with_singularity(EndpointSingularity::Left);
    let outer = integrate_adaptive(integrand, 0.0, HARD_MODE_DECAY_LENGTHS / freq, &outer_opts);
    if let Some(e) = deferred.take() {
        return Err(e);
    }
    let outer = outer?;

    let prefactor = amplitude_sign(sign) * m * e2 / (2.0 * PI);
    let value = prefactor * outer.value;
    let inner_err = prefactor.abs() * deferred.propagated_inner_error();
    Ok(Amplitude {
        value,
        method: Method::OppenheimerHardMode,
        est_err: prefactor.abs() * outer.est_err + inner_err,
        diagnostics: Diagnostics {
            nodes: outer.nodes + deferred.inner_nodes.get(),
            truncation_radius: Some(HARD_MODE_DECAY_LENGTHS / freq),
            quadrature: Some(outer),
            ..Diagnostics::default()
        },
    })
}

/// (a, b) with q·r = aρ cos φ + b z. `a` is exactly 0 at θ = π.
fn hard_mode_coefficients(p: f64, theta: f64) -> (f64, f64) {
    let a = if theta > 0.5 * PI {
        p * (PI - theta).sin()
    } else {
        p * theta.sin()
    };
    let s = (0.5 * theta).sin();
    (a, -2.0 * p * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::LambdaLadder;
    use crate::specfun::k0;
    use SignConvention::{Attractive, Repulsive};

    #[test]
    fn closed_form_examples() {
        assert_eq!(coulomb_closed(1.0, 1.0, Repulsive, 2.0).unwrap().value, -0.5);
        assert_eq!(coulomb_closed(1.0, 1.0, Attractive, 2.0).unwrap().value, 0.5);
        let q = 2.0 * 2f64.sqrt();
        assert!((coulomb_closed(1.0, 1.0, Repulsive, q).unwrap().value + 0.25).abs() < 1e-16);
        assert!(coulomb_closed(1.0, 1.0, Repulsive, 0.0).is_err());
        assert_eq!(coulomb_closed(1.0, 1.0, Repulsive, 2.0).unwrap().est_err, 0.0);
    }

    #[test]
    fn closed_form_scaling_is_exact_for_powers_of_two() {
        let f = coulomb_closed(1.3, 0.7, Repulsive, 0.9).unwrap().value;
        let g = coulomb_closed(1.3, 0.7, Repulsive, 1.8).unwrap().value;
        assert_eq!(g, f / 4.0);
    }

    #[test]
    fn yukawa_closed_reduces_to_coulomb() {
        let y = yukawa_closed(1.0, 1.0, 0.0, Repulsive, 2.0).unwrap().value;
        assert_eq!(y, -0.5);
        let y = yukawa_closed(1.0, 1.0, 1.0, Repulsive, 1.0).unwrap().value;
        assert_eq!(y, -1.0);
        assert_eq!(yukawa_closed(1.0, 1.0, 1.0, Repulsive, 0.0).unwrap().value, -2.0);
    }

    #[test]
    fn screened_limit_examples() {
        let ladder = LambdaLadder::new(0.4, 0.5, 4).unwrap();
        let opts = BornOptions::default().with_ladder(ladder);
        let a = coulomb_screened_limit(1.0, 1.0, Repulsive, 1.0, &opts).unwrap();
        assert!((a.value + 2.0).abs() < 1e-6, "{}", a.value);
        let report = a.diagnostics.extrapolation.as_ref().unwrap();
        assert_eq!(report.samples.len(), 4);
        assert!((report.samples[0].1 + 2.0 / 1.16).abs() < 1e-9);
        let b = coulomb_screened_limit(1.0, 1.0, Attractive, 2.0, &opts).unwrap();
        assert!((b.value - 0.5).abs() < 1e-6, "{}", b.value);
    }

    #[test]
    fn screened_limit_rejects_bad_ladder() {
        let bad = LambdaLadder {
            start: 0.4,
            ratio: 0.9,
            steps: 5,
        };
        let opts = BornOptions::default().with_ladder(bad);
        assert!(matches!(
            coulomb_screened_limit(1.0, 1.0, Repulsive, 1.0, &opts),
            Err(BornError::IllConditioned(_))
        ));
    }

    #[test]
    fn cylindrical_examples() {
        let opts = BornOptions::default();
        let a = coulomb_cylindrical(1.0, 1.0, Repulsive, 2.0, &opts).unwrap();
        assert!((a.value + 0.5).abs() < 0.5e-8, "{}", a.value);
        let b = coulomb_cylindrical(1.0, 1.0, Attractive, 1.0, &opts).unwrap();
        assert!((b.value - 2.0).abs() < 2e-8, "{}", b.value);
        // outer integrand spot value
        assert!((1.0 * k0(1.0) - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn cylindrical_strict_mode_agrees() {
        let opts = BornOptions::default().with_strict(true);
        let a = coulomb_cylindrical(1.0, 1.0, Repulsive, 2.0, &opts).unwrap();
        assert!((a.value + 0.5).abs() < 0.5e-8, "{}", a.value);
        let ratio = a.diagnostics.strict_max_deviation_ratio.unwrap();
        assert!(ratio <= 10.0, "{ratio}");
    }

    #[test]
    fn azimuthal_integral_is_two_pi_j0() {
        // 2π J₀(x) from the power series
        let j0 = |x: f64| {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..60 {
                term *= -(x * x / 4.0) / (k * k) as f64;
                sum += term;
            }
            sum
        };
        for &x in &[0.0, 0.3, 1.0, 5.0] {
            assert!((azimuthal_integral(x) - 2.0 * PI * j0(x)).abs() < 1e-13, "x={x}");
        }
        // beyond the series' comfort zone: compare with a much finer rule
        for &x in &[12.0, 40.0, 150.0] {
            let n = 8192;
            let h = 2.0 * PI / n as f64;
            let fine: f64 = (0..n).map(|j| (x * (j as f64 * h).cos()).cos()).sum::<f64>() * h;
            assert!((azimuthal_integral(x) - fine).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn hard_mode_backscatter_loses_azimuthal_term() {
        let (a, b) = hard_mode_coefficients(1.0, PI);
        assert_eq!(a, 0.0);
        assert_eq!(b, -2.0);
        assert_eq!(azimuthal_integral(0.0), 2.0 * PI);
    }

    #[test]
    fn error_estimates_bound_the_error_without_exploding() {
        let opts = BornOptions::default();
        let strict = opts.clone().with_strict(true);
        for theta in [PI / 6.0, PI / 2.0, PI] {
            let q = 2.0 * (theta / 2.0).sin();
            let want = -2.0 / (q * q);
            let hard = coulomb_oppenheimer_hard_mode(1.0, 1.0, Repulsive, 1.0, theta, &opts).unwrap();
            let cyl = coulomb_cylindrical(1.0, 1.0, Repulsive, q, &strict).unwrap();
            for amp in [hard, cyl] {
                let err = (amp.value - want).abs();
                assert!(err <= amp.est_err, "{}: error {err:e} > estimate {:e}", amp.method, amp.est_err);
                assert!(amp.est_err <= 1e-7 * want.abs(), "{}: estimate {:e}", amp.method, amp.est_err);
            }
        }
    }

    #[test]
    fn hard_mode_examples() {
        let opts = BornOptions::default().with_tol(1e-8);
        let a = coulomb_oppenheimer_hard_mode(1.0, 1.0, Repulsive, 1.0, PI, &opts).unwrap();
        assert!((a.value + 0.5).abs() < 1e-5, "{}", a.value);
        let b = coulomb_oppenheimer_hard_mode(1.0, 1.0, Repulsive, 1.0, PI / 2.0, &opts).unwrap();
        assert!((b.value + 1.0).abs() < 1e-5, "{}", b.value);
        assert!(coulomb_oppenheimer_hard_mode(1.0, 1.0, Repulsive, 1.0, 0.0, &opts).is_err());
    }
    #[test]
    fn routes_agree_on_the_equivalence_grid() {
        let opts = BornOptions::default();
        for &q in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for sign in [Repulsive, Attractive] {
                let closed = coulomb_closed(1.0, 1.0, sign, q).unwrap().value;
                let screened = coulomb_screened_limit(1.0, 1.0, sign, q, &opts).unwrap();
                let cyl = coulomb_cylindrical(1.0, 1.0, sign, q, &opts).unwrap();
                let gap_s = (screened.value - closed).abs() / closed.abs();
                let gap_c = (cyl.value - closed).abs() / closed.abs();
                assert!(gap_s <= 1e-6, "screened q={q} {sign:?}: {gap_s:e}");
                assert!(gap_c <= 1e-8, "cylindrical q={q} {sign:?}: {gap_c:e}");
                assert!(screened.est_err >= 0.0 && cyl.est_err >= 0.0);
            }
        }
    }

    #[test]
    fn sign_antisymmetry_per_route() {
        let opts = BornOptions::default();
        let q = 1.5;
        let pairs = [
            (
                coulomb_screened_limit(1.0, 1.0, Repulsive, q, &opts).unwrap(),
                coulomb_screened_limit(1.0, 1.0, Attractive, q, &opts).unwrap(),
            ),
            (
                coulomb_cylindrical(1.0, 1.0, Repulsive, q, &opts).unwrap(),
                coulomb_cylindrical(1.0, 1.0, Attractive, q, &opts).unwrap(),
            ),
            (
                coulomb_closed(1.0, 1.0, Repulsive, q).unwrap(),
                coulomb_closed(1.0, 1.0, Attractive, q).unwrap(),
            ),
        ];
        for (rep, att) in pairs {
            assert!(rep.value < 0.0 && att.value > 0.0);
            assert!((rep.value + att.value).abs() <= rep.est_err + att.est_err);
            assert_eq!(rep.value * rep.value, att.value * att.value);
        }
    }

    #[test]
    fn amplitudes_are_linear_in_mass() {
        let opts = BornOptions::default();
        let alpha = 4.0;
        let q = 0.7;
        let base = coulomb_cylindrical(1.0, 1.0, Repulsive, q, &opts).unwrap().value;
        let scaled = coulomb_cylindrical(alpha, 1.0, Repulsive, q, &opts).unwrap().value;
        assert_eq!(scaled, alpha * base);
        let base = coulomb_closed(1.0, 1.0, Repulsive, q).unwrap().value;
        let scaled = coulomb_closed(alpha, 1.0, Repulsive, q).unwrap().value;
        assert_eq!(scaled, alpha * base);
    }
}
