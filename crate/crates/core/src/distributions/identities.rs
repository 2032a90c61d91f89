//! Identity checks over randomized good test functions.
//!
//! Each [`Identity`] turns one test function into a (value, expected) pair;
//! the suite runs every registered identity over a seeded sample and emits
//! one [`IdentityRecord`] per identity per test function.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::good::{AxisParams, GoodFunction1d, GoodFunction3d};
use super::pairing::{
    angular_terms, pair, pair_derivative, pair_fourier, pair_good, pair_laplacian_radial,
    verify_fourier_laplacian, PairingOptions,
};
use super::slow::SlowGrowthFunction;
use super::INVERSE_R_LAPLACIAN_WEIGHT;
use crate::{BornError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiParams {
    pub index: usize,
    pub dimension: usize,
    /// One entry per factor of the product.
    pub factors: Vec<AxisParams>,
}

#[derive(Debug, Clone)]
pub enum TestFunction {
    Line(GoodFunction1d),
    Space(GoodFunction3d),
}

#[derive(Debug, Clone)]
pub struct TestCase {
    pub params: PhiParams,
    pub phi: TestFunction,
}

impl TestCase {
    fn line(&self) -> Result<&GoodFunction1d> {
        match &self.phi {
            TestFunction::Line(g) => Ok(g),
            TestFunction::Space(_) => Err(BornError::domain("identity needs a 1-D test function")),
        }
    }

    fn space(&self) -> Result<&GoodFunction3d> {
        match &self.phi {
            TestFunction::Space(g) => Ok(g),
            TestFunction::Line(_) => Err(BornError::domain("identity needs a 3-D test function")),
        }
    }
}

fn random_factor(rng: &mut ChaCha8Rng, max_order: u32, center: f64, width: (f64, f64)) -> Result<GoodFunction1d> {
    let c = rng.gen_range(-center..=center);
    let w = rng.gen_range(width.0..=width.1);
    if rng.gen_bool(0.5) {
        GoodFunction1d::gaussian(c, w)
    } else {
        GoodFunction1d::hermite_gaussian(rng.gen_range(0..=max_order), c, w)
    }
}

/// Seeded sample of test functions.
///
/// 1-D: Gaussian or Hermite–Gaussian of order ≤ 4, center in [−2, 2], width
/// in [0.5, 2]. 3-D: products of three such factors with order ≤ 2, center
/// in [−0.75, 0.75] and width in [0.7, 1.4] per axis.
pub fn random_test_functions(dimension: usize, seed: u64, count: usize) -> Result<Vec<TestCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (dimension as u64).wrapping_mul(0x9E37_79B9));
    (0..count)
        .map(|index| {
            let phi = match dimension {
                1 => TestFunction::Line(random_factor(&mut rng, 4, 2.0, (0.5, 2.0))?),
                3 => {
                    let fx = random_factor(&mut rng, 2, 0.75, (0.7, 1.4))?;
                    let fy = random_factor(&mut rng, 2, 0.75, (0.7, 1.4))?;
                    let fz = random_factor(&mut rng, 2, 0.75, (0.7, 1.4))?;
                    TestFunction::Space(GoodFunction3d::product(&fx, &fy, &fz))
                }
                d => {
                    return Err(BornError::domain(format!(
                        "test functions exist in dimension 1 or 3, not {d}"
                    )))
                }
            };
            let factors = match &phi {
                TestFunction::Line(g) => g.params().to_vec(),
                TestFunction::Space(g) => g.params().to_vec(),
            };
            Ok(TestCase {
                params: PhiParams {
                    index,
                    dimension,
                    factors,
                },
                phi,
            })
        })
        .collect()
}

/// Raw outcome of one identity on one test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub expected: Complex64,
    pub est_err: f64,
    /// Magnitude against which a relative gap is measured, beyond |expected|.
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    Absolute,
    /// |value − expected| / max(|expected|, scale).
    Relative,
}

pub trait Identity: Send + Sync {
    fn name(&self) -> &'static str;
    fn dimension(&self) -> usize;
    fn tolerance(&self) -> f64;
    fn gap_kind(&self) -> GapKind;

    /// Only run when the suite is strict.
    fn strict_only(&self) -> bool {
        false
    }

    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub identity: String,
    pub phi_params: PhiParams,
    pub value: f64,
    pub expected: f64,
    pub gap: f64,
    pub est_err: f64,
    pub pass: bool,
}

fn record(identity: &dyn Identity, case: &TestCase, e: Evaluation) -> IdentityRecord {
    let diff = (e.value - e.expected).norm();
    let gap = match identity.gap_kind() {
        GapKind::Absolute => diff,
        GapKind::Relative => {
            let scale = e.expected.norm().max(e.scale);
            if scale > 0.0 {
                diff / scale
            } else {
                diff
            }
        }
    };
    IdentityRecord {
        identity: identity.name().to_string(),
        phi_params: case.params.clone(),
        value: e.value.re,
        expected: e.expected.re,
        gap,
        est_err: e.est_err,
        pass: gap <= identity.tolerance(),
    }
}

/// ⟨θ′, φ⟩ = φ(0).
struct HeavisideDelta;

impl Identity for HeavisideDelta {
    fn name(&self) -> &'static str {
        "heaviside_delta"
    }
    fn dimension(&self) -> usize {
        1
    }
    fn tolerance(&self) -> f64 {
        1e-9
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Absolute
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.line()?;
        let p = pair_derivative(&SlowGrowthFunction::heaviside(), phi, 1, opts)?;
        Ok(Evaluation {
            value: p.complex(),
            expected: phi.value_at_origin(),
            est_err: p.est_err,
            scale: p.abs_integral,
        })
    }
}

/// ⟨δ̂, φ⟩ = ∫φ, with δ realized as θ′: ⟨δ̂, φ⟩ = ⟨θ′, φ̂⟩ = −⟨θ, φ̂′⟩.
struct DeltaHat;

impl Identity for DeltaHat {
    fn name(&self) -> &'static str {
        "delta_hat"
    }
    fn dimension(&self) -> usize {
        1
    }
    fn tolerance(&self) -> f64 {
        1e-9
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Relative
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.line()?;
        let value = pair_derivative(&SlowGrowthFunction::heaviside(), &phi.fourier(), 1, opts)?;
        let expected = pair(&SlowGrowthFunction::one(), phi, opts)?;
        Ok(Evaluation {
            value: value.complex(),
            expected: expected.complex(),
            est_err: value.est_err + expected.est_err,
            scale: expected.abs_integral,
        })
    }
}

/// ⟨f̂, φ⟩ = ⟨f, φ̂⟩ for an ordinary Gaussian f, whose transform is known.
struct Parseval {
    center: f64,
    width: f64,
}

impl Identity for Parseval {
    fn name(&self) -> &'static str {
        "parseval"
    }
    fn dimension(&self) -> usize {
        1
    }
    fn tolerance(&self) -> f64 {
        1e-10
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Relative
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.line()?;
        let f = GoodFunction1d::gaussian(self.center, self.width)?;
        let value = pair_fourier(&SlowGrowthFunction::from_good(&f)?, phi, opts)?;
        let expected = pair_good(&f.fourier(), phi, opts)?;
        Ok(Evaluation {
            value: value.complex(),
            expected: expected.complex(),
            est_err: value.est_err + expected.est_err,
            scale: expected.abs_integral,
        })
    }
}

/// ⟨Δ(1/r), φ⟩ = −4πφ(0).
struct LaplacianInverseR;

impl Identity for LaplacianInverseR {
    fn name(&self) -> &'static str {
        "laplacian_inverse_r"
    }
    fn dimension(&self) -> usize {
        3
    }
    fn tolerance(&self) -> f64 {
        1e-7
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Relative
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.space()?;
        let relaxed = PairingOptions {
            strict: false,
            ..*opts
        };
        let p = pair_laplacian_radial(&SlowGrowthFunction::inverse_r(), phi, &relaxed)?;
        Ok(Evaluation {
            value: p.complex(),
            expected: -INVERSE_R_LAPLACIAN_WEIGHT * phi.value_at_origin(),
            est_err: p.est_err,
            scale: p.abs_integral,
        })
    }
}

/// ⟨1/r, Δφ̂⟩ = ⟨1/r, (−|x|²φ)^⟩.
struct FourierLaplacian;

impl Identity for FourierLaplacian {
    fn name(&self) -> &'static str {
        "fourier_laplacian"
    }
    fn dimension(&self) -> usize {
        3
    }
    fn tolerance(&self) -> f64 {
        1e-8
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Relative
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.space()?;
        let rep = verify_fourier_laplacian(&SlowGrowthFunction::inverse_r(), phi, opts)?;
        Ok(Evaluation {
            value: rep.lhs.complex(),
            expected: rep.rhs.complex(),
            est_err: rep.lhs.est_err + rep.rhs.est_err,
            scale: rep.rhs.abs_integral,
        })
    }
}

/// ⟨1/r, Δφ⟩ − ⟨1/r, (1/r²)∂ᵣ(r²∂ᵣφ)⟩ = 0: the angular part of Δφ
/// contributes nothing.
struct AngularVanishing;

impl Identity for AngularVanishing {
    fn name(&self) -> &'static str {
        "angular_vanishing"
    }
    fn dimension(&self) -> usize {
        3
    }
    fn tolerance(&self) -> f64 {
        1e-9
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Absolute
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.space()?;
        let f = SlowGrowthFunction::inverse_r();
        let relaxed = PairingOptions {
            strict: false,
            ..*opts
        };
        let full = pair(&f, &phi.laplacian(), &relaxed)?;
        let radial = pair_laplacian_radial(&f, phi, &relaxed)?;
        Ok(Evaluation {
            value: full.complex() - radial.complex(),
            expected: Complex64::new(0.0, 0.0),
            est_err: full.est_err + radial.est_err,
            scale: full.abs_integral,
        })
    }
}

/// One angular part of Δφ paired with 1/r, expected to vanish.
struct AngularTerm {
    polar: bool,
}

impl Identity for AngularTerm {
    fn name(&self) -> &'static str {
        if self.polar {
            "angular_b"
        } else {
            "angular_c"
        }
    }
    fn dimension(&self) -> usize {
        3
    }
    fn tolerance(&self) -> f64 {
        1e-9
    }
    fn gap_kind(&self) -> GapKind {
        GapKind::Absolute
    }
    fn strict_only(&self) -> bool {
        true
    }
    fn evaluate(&self, case: &TestCase, opts: &PairingOptions) -> Result<Evaluation> {
        let phi = case.space()?;
        let (b, c) = angular_terms(&SlowGrowthFunction::inverse_r(), phi, opts)?;
        let t = if self.polar { b } else { c };
        Ok(Evaluation {
            value: t.complex(),
            expected: Complex64::new(0.0, 0.0),
            est_err: t.est_err,
            scale: t.abs_integral,
        })
    }
}

/// Identities in registration order, selectable by name.
#[derive(Clone)]
pub struct IdentityRegistry {
    identities: Vec<Arc<dyn Identity>>,
}

impl IdentityRegistry {
    pub fn empty() -> Self {
        IdentityRegistry {
            identities: Vec::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = IdentityRegistry::empty();
        reg.register(Arc::new(HeavisideDelta));
        reg.register(Arc::new(DeltaHat));
        reg.register(Arc::new(Parseval {
            center: 0.3,
            width: 1.1,
        }));
        reg.register(Arc::new(LaplacianInverseR));
        reg.register(Arc::new(FourierLaplacian));
        reg.register(Arc::new(AngularVanishing));
        reg.register(Arc::new(AngularTerm { polar: true }));
        reg.register(Arc::new(AngularTerm { polar: false }));
        reg
    }

    /// Adds an identity, replacing one with the same name.
    pub fn register(&mut self, identity: Arc<dyn Identity>) {
        match self.identities.iter_mut().find(|i| i.name() == identity.name()) {
            Some(slot) => *slot = identity,
            None => self.identities.push(identity),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.identities.iter().map(|i| i.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Identity>> {
        self.identities.iter().find(|i| i.name() == name).cloned()
    }
}

impl Default for IdentityRegistry {
    fn default() -> Self {
        IdentityRegistry::with_builtins()
    }
}

/// Configuration of one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySuite {
    pub seed: u64,
    /// Test functions per identity.
    pub count: usize,
    /// Restrict to these identities (all when empty).
    pub only: Vec<String>,
    pub strict: bool,
    pub opts: PairingOptions,
}

impl Default for IdentitySuite {
    fn default() -> Self {
        IdentitySuite {
            seed: 20_240_601,
            count: 20,
            only: Vec::new(),
            strict: false,
            opts: PairingOptions::default(),
        }
    }
}

impl IdentitySuite {
    pub fn run(&self, registry: &IdentityRegistry) -> Result<Vec<IdentityRecord>> {
        for name in &self.only {
            if registry.get(name).is_none() {
                return Err(BornError::domain(format!(
                    "unknown identity '{name}'; available: {}",
                    registry.names().join(", ")
                )));
            }
        }
        if self.count == 0 {
            return Err(BornError::domain("identity suite needs at least one test function"));
        }
        let opts = PairingOptions {
            strict: self.strict,
            ..self.opts
        };
        let selected: Vec<Arc<dyn Identity>> = registry
            .identities
            .iter()
            .filter(|i| {
                if self.only.is_empty() {
                    self.strict || !i.strict_only()
                } else {
                    self.only.iter().any(|n| n == i.name())
                }
            })
            .cloned()
            .collect();
        let lines = random_test_functions(1, self.seed, self.count)?;
        let spaces = random_test_functions(3, self.seed, self.count)?;
        let jobs: Vec<(Arc<dyn Identity>, &TestCase)> = selected
            .iter()
            .flat_map(|id| {
                let cases = if id.dimension() == 1 { &lines } else { &spaces };
                cases.iter().map(move |c| (id.clone(), c))
            })
            .collect();
        jobs.par_iter()
            .map(|(id, case)| Ok(record(id.as_ref(), case, id.evaluate(case, &opts)?)))
            .collect()
    }
}
