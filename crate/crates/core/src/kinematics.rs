//! Elastic-scattering kinematics in the centre-of-mass frame.
//!
//! Everything is in natural units (ħ = c = 1): momenta and masses carry
//! inverse length, amplitudes carry length. Angles are radians; conversion
//! from degrees happens at the CLI boundary only.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{BornError, Result};

/// Centre-of-mass momentum magnitude `p` and scattering angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kinematics {
    p: f64,
    theta: f64,
}

impl Kinematics {
    pub fn new(p: f64, theta: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(BornError::domain(format!(
                "momentum must be positive and finite, got p = {p}"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(BornError::domain(format!(
                "scattering angle must lie in [0, pi], got theta = {theta}"
            )));
        }
        Ok(Self { p, theta })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// q = 2 p sin(θ/2).
    pub fn momentum_transfer(&self) -> f64 {
        2.0 * self.p * (0.5 * self.theta).sin()
    }
}

/// Momentum-transfer magnitude for elastic scattering, `q = 2 p sin(θ/2)`.
pub fn momentum_transfer(p: f64, theta: f64) -> Result<f64> {
    Kinematics::new(p, theta).map(|k| k.momentum_transfer())
}

/// Inverse of [`momentum_transfer`]: `θ = 2 asin(q / 2p)`.
pub fn angle_from_q(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(BornError::domain(format!(
            "momentum must be positive and finite, got p = {p}"
        )));
    }
    if !(q >= 0.0) || q > 2.0 * p {
        return Err(BornError::domain(format!(
            "momentum transfer must lie in [0, 2p] = [0, {}], got q = {q}",
            2.0 * p
        )));
    }
    // asin loses accuracy next to 1; clamp guards the last ulp.
    Ok(2.0 * (q / (2.0 * p)).min(1.0).asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn endpoint_values() {
        assert_eq!(momentum_transfer(1.0, PI).unwrap(), 2.0);
        assert_eq!(momentum_transfer(1.0, 0.0).unwrap(), 0.0);
        let q = momentum_transfer(1.0, PI / 2.0).unwrap();
        assert!((q - 2f64.sqrt()).abs() <= 4.0 * f64::EPSILON * q);
    }

    #[test]
    fn agrees_with_cosine_form() {
        // the cosine form is only accurate where 1 − cos θ does not cancel
        for &theta in &[PI / 2.0, 1.9, 2.3, 2.9, PI] {
            let q = momentum_transfer(1.7, theta).unwrap();
            let alt = (2.0 * 1.7f64.powi(2) * (1.0 - f64::cos(theta))).sqrt();
            assert!((q - alt).abs() <= 4.0 * f64::EPSILON * q.max(alt), "{theta}");
        }
    }

    #[test]
    fn inversion() {
        assert_eq!(angle_from_q(1.0, 2.0).unwrap(), PI);
        assert_eq!(angle_from_q(1.0, 0.0).unwrap(), 0.0);
        let th = angle_from_q(2.0, 2.0).unwrap();
        assert!((th - PI / 3.0).abs() < 1e-15);
        let back = momentum_transfer(2.0, th).unwrap();
        assert!((back - 2.0).abs() <= 1e-14 * 2.0);
    }

    #[test]
    fn domain_errors() {
        assert!(momentum_transfer(0.0, 1.0).is_err());
        assert!(momentum_transfer(-1.0, 1.0).is_err());
        assert!(momentum_transfer(1.0, -0.1).is_err());
        assert!(momentum_transfer(1.0, PI + 1e-9).is_err());
        assert!(angle_from_q(1.0, 2.0 + 1e-12).is_err());
        assert!(angle_from_q(1.0, -1e-12).is_err());
        assert!(angle_from_q(1.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(p in 0.01f64..100.0, theta in 1e-6f64..(PI - 1e-6)) {
            let q = momentum_transfer(p, theta).unwrap();
            let back = angle_from_q(p, q).unwrap();
            prop_assert!((back - theta).abs() <= 1e-12);
        }

        #[test]
        fn cosine_identity(p in 0.01f64..100.0, theta in 0.5f64..PI) {
            let q = momentum_transfer(p, theta).unwrap();
            let rhs = 2.0 * p * p * (1.0 - theta.cos());
            prop_assert!((q * q - rhs).abs() <= 1e-13 * rhs);
        }

        #[test]
        fn monotone_in_angle_and_momentum(p in 0.01f64..100.0, t1 in 1e-3f64..3.0, dt in 1e-3f64..0.1) {
            let t2 = (t1 + dt).min(PI);
            prop_assert!(momentum_transfer(p, t2).unwrap() > momentum_transfer(p, t1).unwrap());
            prop_assert!(momentum_transfer(p * 1.01, t1).unwrap() > momentum_transfer(p, t1).unwrap());
        }

        #[test]
        fn bounded_by_2p(p in 0.01f64..100.0, theta in 0.0f64..=PI) {
            let q = momentum_transfer(p, theta).unwrap();
            prop_assert!((0.0..=2.0 * p).contains(&q));
        }
    }
}
