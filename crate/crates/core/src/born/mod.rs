//! Born-approximation amplitudes and cross sections.
//!
//! The generic path integrates `f_B = −(2m/q)∫₀^∞ V(r) sin(qr) r dr` for
//! potentials with ∫r²|V| dr < ∞. The Coulomb potential violates that
//! condition and is handled by dedicated routes (see [`routes`]), all of
//! which must agree with the closed form `∓2me²/q²`.

mod registry;
mod routes;

use serde::Serialize;

use crate::kinematics::Kinematics;
use crate::potentials::{
    integrability_check, DecayClass, IntegrabilityVerdict, RadialPotential, SignConvention,
};
use crate::quadrature::{
    integrate_oscillatory, integrate_semi_infinite, ExtrapolationModel, ExtrapolationReport,
    LambdaLadder, OscDomain, QuadOptions, QuadResult, TrigKind,
};
use crate::{BornError, Result};

pub use registry::{AmplitudeRequest, AmplitudeRoute, RouteRegistry};
pub use routes::{
    coulomb_closed, coulomb_cylindrical, coulomb_oppenheimer_hard_mode, coulomb_screened_limit,
    yukawa_closed,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GenericRadial,
    ScreenedLimit,
    Cylindrical,
    ClosedForm,
    OppenheimerHardMode,
    Distributional,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::GenericRadial,
        Method::ScreenedLimit,
        Method::Cylindrical,
        Method::ClosedForm,
        Method::OppenheimerHardMode,
        Method::Distributional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::GenericRadial => "generic_radial",
            Method::ScreenedLimit => "screened_limit",
            Method::Cylindrical => "cylindrical",
            Method::ClosedForm => "closed_form",
            Method::OppenheimerHardMode => "oppenheimer_hard_mode",
            Method::Distributional => "distributional",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where an amplitude came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Total integrand evaluations across all quadratures.
    pub nodes: usize,
    pub truncation_radius: Option<f64>,
    pub quadrature: Option<QuadResult>,
    pub extrapolation: Option<ExtrapolationReport>,
    /// Largest |inner − 2K₀| / combined error seen by the strict cylindrical check.
    pub strict_max_deviation_ratio: Option<f64>,
    /// True when generic_radial used the small-q series branch.
    pub small_q_series: bool,
}

impl Diagnostics {
    pub fn extrapolation_order(&self) -> Option<usize> {
        self.extrapolation.as_ref().map(|e| e.order_used)
    }
}

/// A Born amplitude f_B (length units).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Amplitude {
    pub value: f64,
    pub method: Method,
    pub est_err: f64,
    pub diagnostics: Diagnostics,
}

impl Amplitude {
    pub(crate) fn exact(value: f64, method: Method) -> Self {
        Amplitude {
            value,
            method,
            est_err: 0.0,
            diagnostics: Diagnostics::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSection {
    /// dσ/dΩ, length².
    pub value: f64,
    pub theta: f64,
}

/// Numerical settings shared by every route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornOptions {
    pub tol: f64,
    /// Cylindrical route: evaluate the inner z-integral by quadrature and
    /// check it against 2K₀. Generic route: run the integrability probe.
    pub strict: bool,
    pub ladder: LambdaLadder,
    pub model: ExtrapolationModel,
}

impl Default for BornOptions {
    fn default() -> Self {
        BornOptions {
            tol: 1e-10,
            strict: false,
            ladder: LambdaLadder::default(),
            model: ExtrapolationModel::default(),
        }
    }
}

impl BornOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn with_ladder(mut self, ladder: LambdaLadder) -> Self {
        self.ladder = ladder;
        self
    }

    pub fn with_model(mut self, model: ExtrapolationModel) -> Self {
        self.model = model;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(BornError::domain(format!(
                "tolerance must lie in (0, 1), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub(crate) fn quad(&self) -> QuadOptions {
        QuadOptions::new(self.tol)
    }
}

pub fn reduced_mass(m1: f64, m2: f64) -> Result<f64> {
    for (name, m) in [("m1", m1), ("m2", m2)] {
        if !(m > 0.0) || !m.is_finite() {
            return Err(BornError::domain(format!(
                "mass {name} must be positive and finite, got {m}"
            )));
        }
    }
    // m1·m2/(m1+m2) written to stay finite for very unequal masses
    Ok(m1 / (1.0 + m1 / m2))
}

pub(crate) fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(BornError::domain(format!(
            "reduced mass must be positive and finite, got {m}"
        )))
    }
}

pub(crate) fn check_q_positive(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else if q == 0.0 {
        Err(BornError::domain(
            "q = 0: the Coulomb amplitude diverges in the forward direction",
        ))
    } else {
        Err(BornError::domain(format!(
            "momentum transfer must be positive and finite, got q = {q}"
        )))
    }
}

/// Below this value of q·r_trunc the generic route switches to the
/// small-q series of sin(qr)/q.
const SMALL_Q_SERIES_THRESHOLD: f64 = 1e-4;

/// Generic Born amplitude for a potential with ∫₀^∞ r²|V(r)| dr < ∞.
///
/// `q = 0` is allowed and handled by the series
/// `sin(qr)/q = r − q²r³/6 + q⁴r⁵/120 − …`.
pub fn born_radial(pot: &RadialPotential, m: f64, q: f64, opts: &BornOptions) -> Result<Amplitude> {
    check_mass(m)?;
    opts.validate()?;
    if !(q >= 0.0) || !q.is_finite() {
        return Err(BornError::domain(format!(
            "momentum transfer must be non-negative and finite, got q = {q}"
        )));
    }
    if pot.decay_class() == DecayClass::CoulombLike {
        return Err(BornError::NotIntegrable(format!(
            "integrability condition ∫r²|V|dr<∞ violated: potential '{}' has a Coulomb tail; \
             use the screened_limit, cylindrical or closed_form route",
            pot.name()
        )));
    }
    if opts.strict {
        let report = integrability_check(pot, 1e4)?;
        if report.verdict == IntegrabilityVerdict::Fails {
            return Err(BornError::NotIntegrable(format!(
                "integrability condition ∫r²|V|dr<∞ violated: partial integrals of \
                 potential '{}' keep growing on the doubling ladder",
                pot.name()
            )));
        }
    }
    let quad = opts.quad();
    let g = |r: f64| if r > 0.0 { r * pot.value_at(r) } else { 0.0 };

    if q * support_radius(pot, opts.tol) >= SMALL_Q_SERIES_THRESHOLD {
        let res = integrate_oscillatory(g, q, TrigKind::Sin, OscDomain::HalfLine, &quad)?;
        {
            let factor = -2.0 * m / q;
            return Ok(Amplitude {
                value: factor * res.value,
                method: Method::GenericRadial,
                est_err: factor.abs() * res.est_err,
                diagnostics: Diagnostics {
                    nodes: res.nodes,
                    truncation_radius: res.truncation_radius,
                    quadrature: Some(res),
                    ..Diagnostics::default()
                },
            });
        }
    }
    small_q_series(pot, m, q, &quad)
}

/// Radius beyond which r³|V(r)| stays below `tol` times its largest value
/// along a doubling ladder; infinite if no such radius is found.
fn support_radius(pot: &RadialPotential, tol: f64) -> f64 {
    let weight = |r: f64| r * r * r * pot.value_at(r).abs();
    let mut peak = 0.0f64;
    let mut r = 1.0 / 1024.0;
    while r < 1e15 {
        let (here, next) = (weight(r), weight(2.0 * r));
        if !here.is_finite() || !next.is_finite() {
            return f64::INFINITY;
        }
        peak = peak.max(here).max(next);
        if peak > 0.0 && here <= tol * peak && next <= tol * peak {
            return r;
        }
        r *= 2.0;
    }
    f64::INFINITY
}

fn small_q_series(pot: &RadialPotential, m: f64, q: f64, quad: &QuadOptions) -> Result<Amplitude> {
    let moment = |power: i32| {
        integrate_semi_infinite(
            |r: f64| if r > 0.0 { r.powi(power) * pot.value_at(r) } else { 0.0 },
            0.0,
            quad,
        )
    };
    let m2 = moment(2)?;
    let q2 = q * q;
    let (mut value, mut err, mut nodes) = (m2.value, m2.est_err, m2.nodes);
    if q2 > 0.0 {
        let m4 = moment(4)?;
        let m6 = moment(6)?;
        value += -q2 / 6.0 * m4.value + q2 * q2 / 120.0 * m6.value;
        // the first omitted term is bounded by the last kept one
        err += q2 / 6.0 * m4.est_err + q2 * q2 / 120.0 * (m6.est_err + m6.abs_integral);
        nodes += m4.nodes + m6.nodes;
    }
    let factor = -2.0 * m;
    Ok(Amplitude {
        value: factor * value,
        method: Method::GenericRadial,
        est_err: factor.abs() * err,
        diagnostics: Diagnostics {
            nodes,
            quadrature: Some(m2),
            small_q_series: true,
            ..Diagnostics::default()
        },
    })
}

/// dσ/dΩ = f_B².
pub fn cross_section(amp: &Amplitude, k: &Kinematics) -> Result<CrossSection> {
    if !amp.value.is_finite() {
        return Err(BornError::domain(format!(
            "amplitude must be finite, got {}",
            amp.value
        )));
    }
    Ok(CrossSection {
        value: amp.value * amp.value,
        theta: k.theta(),
    })
}

/// Sign of the Coulomb amplitude: repulsive potentials scatter with f < 0.
pub(crate) fn amplitude_sign(sign: SignConvention) -> f64 {
    -sign.multiplier()
}
