//! Functions of slow growth: locally integrable, bounded by a polynomial.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::good::GoodFunction1d;
use crate::quadrature::{integrate_adaptive, QuadOptions};
use crate::{BornError, Result};

/// Where a slow-growth function lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlowDomain {
    /// f(x) on the real line.
    Line,
    /// f(r) on R³, depending on the radius only.
    RadialR3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Singularity {
    None,
    /// Unbounded at the origin but locally integrable there (1/r in R³).
    IntegrableAtOrigin,
}

#[derive(Clone)]
pub struct SlowGrowthFunction {
    name: String,
    domain: SlowDomain,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// N such that ∫|f|/(1 + x²)^N < ∞.
    growth_cert: u32,
    singularity: Singularity,
    /// Points where f or a derivative jumps; quadrature splits there.
    breakpoints: Vec<f64>,
}

impl fmt::Debug for SlowGrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlowGrowthFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("growth_cert", &self.growth_cert)
            .field("singularity", &self.singularity)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl SlowGrowthFunction {
    pub fn custom<F>(
        name: impl Into<String>,
        domain: SlowDomain,
        growth_cert: u32,
        singularity: Singularity,
        breakpoints: Vec<f64>,
        evaluator: F,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SlowGrowthFunction {
            name: name.into(),
            domain,
            evaluator: Arc::new(evaluator),
            growth_cert,
            singularity,
            breakpoints,
        }
    }

    fn line(name: &str, growth_cert: u32, breakpoints: Vec<f64>, f: fn(f64) -> f64) -> Self {
        Self::custom(name, SlowDomain::Line, growth_cert, Singularity::None, breakpoints, f)
    }

    pub fn one() -> Self {
        Self::line("one", 1, vec![], |_| 1.0)
    }

    pub fn x() -> Self {
        Self::line("x", 2, vec![], |x| x)
    }

    /// θ(x), with θ(0) = 1/2 (immaterial under the integral).
    pub fn heaviside() -> Self {
        Self::line("heaviside", 1, vec![0.0], |x| {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                0.0
            } else {
                0.5
            }
        })
    }

    pub fn abs() -> Self {
        Self::line("abs", 2, vec![0.0], f64::abs)
    }

    pub fn cos(k: f64) -> Self {
        Self::custom(
            format!("cos({k}x)"),
            SlowDomain::Line,
            1,
            Singularity::None,
            vec![],
            move |x| (k * x).cos(),
        )
    }

    pub fn sin(k: f64) -> Self {
        Self::custom(
            format!("sin({k}x)"),
            SlowDomain::Line,
            1,
            Singularity::None,
            vec![],
            move |x| (k * x).sin(),
        )
    }

    /// 1/r on R³.
    pub fn inverse_r() -> Self {
        Self::custom(
            "inverse_r",
            SlowDomain::RadialR3,
            2,
            Singularity::IntegrableAtOrigin,
            vec![],
            |r| 1.0 / r,
        )
    }

    /// The constant 1 on R³.
    pub fn one_r3() -> Self {
        Self::custom("one_r3", SlowDomain::RadialR3, 2, Singularity::None, vec![], |_| 1.0)
    }

    /// A real good function viewed as a (rapidly decreasing) slow-growth function.
    pub fn from_good(g: &GoodFunction1d) -> Result<Self> {
        if !g.is_real() {
            return Err(BornError::domain(
                "only real good functions can act as slow-growth functions",
            ));
        }
        let g = g.clone();
        Ok(Self::custom(
            "good",
            SlowDomain::Line,
            0,
            Singularity::None,
            vec![],
            move |x| g.eval1(x).re,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> SlowDomain {
        self.domain
    }

    pub fn growth_cert(&self) -> u32 {
        self.growth_cert
    }

    pub fn singularity(&self) -> Singularity {
        self.singularity
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    /// Checks ∫|f|/(1 + x²)^N < ∞ on a doubling ladder R = 1, 2, 4, …, 2¹²:
    /// the increments over the last three doublings must each shrink by a
    /// factor 0.75 or better.
    pub fn verify_growth(&self) -> Result<bool> {
        let n = self.growth_cert as i32;
        let opts = QuadOptions::new(1e-8).with_abs_tol(1e-300);
        let weight = |x: f64| {
            let w = (1.0 + x * x).powi(-n);
            match self.domain {
                SlowDomain::Line => (self.eval(x).abs() + self.eval(-x).abs()) * w,
                SlowDomain::RadialR3 => x * x * self.eval(x).abs() * w,
            }
        };
        let mut increments = Vec::new();
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..=12 {
            // split at integers so oscillating evaluators stay resolved
            let pieces = ((hi - lo) as usize).clamp(1, 4096);
            let step = (hi - lo) / pieces as f64;
            let mut inc = 0.0;
            for j in 0..pieces {
                let a = lo + j as f64 * step;
                inc += integrate_adaptive(&weight, a, a + step, &opts)?.value;
            }
            increments.push(inc);
            lo = hi;
            hi *= 2.0;
        }
        Ok(increments
            .windows(2)
            .rev()
            .take(3)
            .all(|w| w[1] <= 0.75 * w[0]))
    }
}
