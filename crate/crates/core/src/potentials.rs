//! Spherically symmetric potential energies V(r).
//!
//! The coupling `e2` is the product of the two charges (or any other
//! strength); integer charge numbers are folded into it by the caller.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{BornError, Result};
use crate::quadrature::{integrate_adaptive, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    Repulsive,
    Attractive,
}

impl SignConvention {
    pub fn multiplier(self) -> f64 {
        match self {
            SignConvention::Repulsive => 1.0,
            SignConvention::Attractive => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SignConvention::Repulsive => SignConvention::Attractive,
            SignConvention::Attractive => SignConvention::Repulsive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Repulsive => "repulsive",
            SignConvention::Attractive => "attractive",
        }
    }
}

impl std::str::FromStr for SignConvention {
    type Err = BornError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "repulsive" | "+" | "plus" => Ok(SignConvention::Repulsive),
            "attractive" | "-" | "minus" => Ok(SignConvention::Attractive),
            other => Err(BornError::domain(format!(
                "unknown sign '{other}', expected repulsive|attractive"
            ))),
        }
    }
}

/// Large-r behaviour class of a potential.
///
/// `Integrable` means ∫₀^∞ r²|V(r)| dr < ∞, which is what the generic radial
/// Born integral needs. Coulomb tails are `CoulombLike`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    Integrable,
    CoulombLike,
}

/// User-supplied potential. The evaluator must be free of side effects.
#[derive(Clone)]
pub struct CustomPotential {
    name: String,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    decay_class: DecayClass,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("name", &self.name)
            .field("decay_class", &self.decay_class)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum RadialPotential {
    Coulomb {
        e2: f64,
        sign: SignConvention,
    },
    Yukawa {
        e2: f64,
        lambda: f64,
        sign: SignConvention,
    },
    Custom(CustomPotential),
}

fn check_coupling(e2: f64) -> Result<()> {
    if e2 > 0.0 && e2.is_finite() {
        Ok(())
    } else {
        Err(BornError::domain(format!(
            "coupling e2 must be positive and finite, got {e2}"
        )))
    }
}

impl RadialPotential {
    pub fn coulomb(e2: f64, sign: SignConvention) -> Result<Self> {
        check_coupling(e2)?;
        Ok(RadialPotential::Coulomb { e2, sign })
    }

    /// Screened Coulomb potential `±e2·exp(−λr)/r`.
    pub fn yukawa(e2: f64, lambda: f64, sign: SignConvention) -> Result<Self> {
        check_coupling(e2)?;
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(BornError::domain(format!(
                "screening mass lambda must be non-negative and finite, got {lambda}"
            )));
        }
        Ok(RadialPotential::Yukawa { e2, lambda, sign })
    }

    pub fn custom<F>(name: impl Into<String>, decay_class: DecayClass, evaluator: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialPotential::Custom(CustomPotential {
            name: name.into(),
            evaluator: Arc::new(evaluator),
            decay_class,
        })
    }

    pub fn name(&self) -> String {
        match self {
            RadialPotential::Coulomb { .. } => "coulomb".into(),
            RadialPotential::Yukawa { .. } => "yukawa".into(),
            RadialPotential::Custom(c) => c.name.clone(),
        }
    }

    pub fn decay_class(&self) -> DecayClass {
        match self {
            RadialPotential::Coulomb { .. } => DecayClass::CoulombLike,
            RadialPotential::Yukawa { lambda, .. } if *lambda == 0.0 => DecayClass::CoulombLike,
            RadialPotential::Yukawa { .. } => DecayClass::Integrable,
            RadialPotential::Custom(c) => c.decay_class,
        }
    }

    /// Coupling and sign when the potential is a pure Coulomb tail
    /// (Coulomb, or Yukawa with λ = 0).
    pub fn as_coulomb(&self) -> Option<(f64, SignConvention)> {
        match *self {
            RadialPotential::Coulomb { e2, sign } => Some((e2, sign)),
            RadialPotential::Yukawa { e2, lambda, sign } if lambda == 0.0 => Some((e2, sign)),
            _ => None,
        }
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(BornError::domain(format!(
                "potential evaluated at non-positive radius r = {r}"
            )));
        }
        Ok(self.value_at(r))
    }

    /// Unchecked evaluation for hot quadrature loops; `r > 0` is the caller's job.
    pub(crate) fn value_at(&self, r: f64) -> f64 {
        match self {
            RadialPotential::Coulomb { e2, sign } => sign.multiplier() * e2 / r,
            RadialPotential::Yukawa { e2, lambda, sign } => {
                sign.multiplier() * e2 * (-lambda * r).exp() / r
            }
            RadialPotential::Custom(c) => (c.evaluator)(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrabilityVerdict {
    Integrable,
    Fails,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrabilityReport {
    pub verdict: IntegrabilityVerdict,
    /// (R, ∫₀^R r²|V| dr) along the doubling ladder ending at `r_max`.
    pub partial_integrals: Vec<(f64, f64)>,
}

const LADDER_DOUBLINGS: usize = 12;
const GROWTH_RATIO: f64 = 1.5;

/// Probe ∫₀^R r²|V(r)| dr on a doubling ladder up to `r_max`.
///
/// Reports `Fails` when each of the last three doublings multiplies the
/// partial integral by more than 1.5.
pub fn integrability_check(pot: &RadialPotential, r_max: f64) -> Result<IntegrabilityReport> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(BornError::domain(format!(
            "r_max must be positive and finite, got {r_max}"
        )));
    }
    let opts = QuadOptions::new(1e-10).with_abs_tol(1e-300);
    let integrand = |r: f64| {
        if r > 0.0 {
            r * r * pot.value_at(r).abs()
        } else {
            0.0
        }
    };
    let mut partial = Vec::with_capacity(LADDER_DOUBLINGS + 1);
    let mut lo = 0.0;
    let mut total = 0.0;
    for k in 0..=LADDER_DOUBLINGS {
        let hi = r_max / f64::powi(2.0, (LADDER_DOUBLINGS - k) as i32);
        total += integrate_adaptive(&integrand, lo, hi, &opts)?.value;
        partial.push((hi, total));
        lo = hi;
    }
    let growing = partial
        .windows(2)
        .rev()
        .take(3)
        .all(|w| {
            let (prev, next) = (w[0].1, w[1].1);
            prev > 0.0 && next / prev > GROWTH_RATIO
        });
    Ok(IntegrabilityReport {
        verdict: if growing {
            IntegrabilityVerdict::Fails
        } else {
            IntegrabilityVerdict::Integrable
        },
        partial_integrals: partial,
    })
}
