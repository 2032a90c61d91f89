//! Numerical integration engines.
//!
//! * [`integrate_adaptive`] / [`integrate_semi_infinite`]: globally adaptive
//!   15-point Gauss–Kronrod with QUADPACK-style error scaling.
//! * [`integrate_oscillatory`]: ∫ g(x)·{sin,cos}(qx) dx over the half or full
//!   line, summed half-period by half-period and accelerated with Wynn's
//!   epsilon algorithm.
//! * [`extrapolate_to_zero`]: Richardson-style extrapolation of a sequence
//!   sampled on a geometric λ ladder.

mod adaptive;
mod extrapolation;
mod legendre;
mod oscillatory;

use serde::Serialize;

pub use adaptive::{integrate_adaptive, integrate_adaptive_complex, integrate_semi_infinite};
pub use extrapolation::{
    extrapolate_to_zero, extrapolate_to_zero_with_errors, ExtrapolationModel,
    ExtrapolationReport, LambdaLadder,
};
pub use legendre::{gauss_legendre, GaussRule};
pub use oscillatory::{integrate_oscillatory, OscDomain, TrigKind};

/// Outcome of a one-dimensional quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub est_err: f64,
    /// Number of integrand evaluations.
    pub nodes: usize,
    /// Where a semi-infinite oscillatory integral was cut off.
    pub truncation_radius: Option<f64>,
    /// Quadrature estimate of ∫|f|, the natural scale for relative errors.
    pub abs_integral: f64,
}

impl QuadResult {
    pub(crate) fn exact_zero() -> Self {
        QuadResult {
            value: 0.0,
            est_err: 0.0,
            nodes: 1,
            truncation_radius: None,
            abs_integral: 0.0,
        }
    }
}

/// Integrable endpoint singularities removed by `x = a + (b − a)·u²`
/// (mirrored for the right end).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointSingularity {
    #[default]
    None,
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper bound on half-periods summed by the oscillatory engine.
    pub max_half_periods: usize,
    pub singularity: EndpointSingularity,
}

impl QuadOptions {
    pub fn new(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            max_half_periods: 20_000,
            singularity: EndpointSingularity::None,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_singularity(mut self, singularity: EndpointSingularity) -> Self {
        self.singularity = singularity;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn with_max_half_periods(mut self, n: usize) -> Self {
        self.max_half_periods = n;
        self
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return Err(crate::BornError::domain(format!(
                "tolerances must be positive (rel = {}, abs = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        Ok(())
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions::new(1e-10)
    }
}
