//! A numerical calculus of tempered distributions.
//!
//! Slow-growth functions f are paired with good test functions φ through
//! ⟨f, φ⟩ = ∫ f·φ. Derivatives and Fourier transforms act on f by being
//! moved onto φ, where they are exact:
//!
//! * ⟨f⁽ᵏ⁾, φ⟩ = (−1)ᵏ⟨f, φ⁽ᵏ⁾⟩
//! * ⟨f̂, φ⟩ = ⟨f, φ̂⟩, with φ̂(q) = ∫ φ(x) e^{−iqx} dx
//!
//! The identity suite checks the facts that give the Coulomb amplitude its
//! distributional meaning, above all Δ(1/r) = −4πδ.

mod good;
mod identities;
mod pairing;
mod slow;

use std::f64::consts::PI;

use crate::born::{amplitude_sign, check_mass, check_q_positive, Amplitude, Method};
use crate::potentials::SignConvention;
use crate::{BornError, Result};

pub use good::{Axis, AxisParams, Family, GoodFunction, GoodFunction1d, GoodFunction3d};
pub use identities::{
    random_test_functions, Identity, IdentityRecord, IdentityRegistry, IdentitySuite, PhiParams,
    TestCase, TestFunction,
};
pub use pairing::{
    angular_terms, pair, pair_derivative, pair_fourier, pair_good, pair_laplacian_radial,
    verify_fourier_laplacian, FourierLaplacianReport, Pairable, PairingMeaning, PairingOptions,
    PairingReport,
};
pub use slow::{Singularity, SlowDomain, SlowGrowthFunction};

/// Factor of the inverse transform per dimension, f(x) = (1/2π)∫ f̂(q) e^{iqx} dq.
/// Only oracles use it; every operation here is written with the forward
/// transform.
pub const INVERSE_FOURIER_FACTOR: f64 = 1.0 / (2.0 * PI);

/// Weight of the delta function in Δ(1/r) = −4πδ, checked by the
/// `laplacian_inverse_r` identity.
pub const INVERSE_R_LAPLACIAN_WEIGHT: f64 = 4.0 * PI;

/// Transform of 1/r in R³: from (Δf)^ = −q² f̂ and Δ(1/r) = −4πδ with δ̂ = 1,
/// −q²·(1/r)^ = −4π.
pub fn inverse_r_transform(q: f64) -> Result<f64> {
    check_q_positive(q)?;
    Ok(INVERSE_R_LAPLACIAN_WEIGHT / (q * q))
}

/// Coulomb amplitude assembled from the transform of 1/r:
/// f = ∓(me²/2π)·(1/r)^(q).
pub fn route3_reconstruction(m: f64, e2: f64, sign: SignConvention, q: f64) -> Result<Amplitude> {
    check_mass(m)?;
    if !(e2 > 0.0) || !e2.is_finite() {
        return Err(BornError::domain(format!(
            "coupling e2 must be positive and finite, got {e2}"
        )));
    }
    let transform = inverse_r_transform(q)?;
    let value = amplitude_sign(sign) * m * e2 / (2.0 * PI) * transform;
    Ok(Amplitude::exact(value, Method::Distributional))
}
