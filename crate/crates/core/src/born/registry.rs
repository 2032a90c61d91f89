//! Amplitude routes behind a common trait, selected by name at run time.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use super::routes::{
    coulomb_closed, coulomb_cylindrical, coulomb_oppenheimer_hard_mode, coulomb_screened_limit,
    yukawa_closed,
};
use super::{born_radial, check_q_positive, Amplitude, BornOptions, Method};
use crate::distributions::route3_reconstruction;
use crate::kinematics::Kinematics;
use crate::potentials::{RadialPotential, SignConvention};
use crate::{BornError, Result};

/// Inputs for one amplitude evaluation.
#[derive(Debug, Clone)]
pub struct AmplitudeRequest {
    pub potential: RadialPotential,
    /// Reduced mass.
    pub m: f64,
    pub q: f64,
    /// Full kinematics when known; the hard mode needs p and θ, not just q.
    pub kinematics: Option<Kinematics>,
}

impl AmplitudeRequest {
    pub fn new(potential: RadialPotential, m: f64, q: f64) -> Self {
        AmplitudeRequest {
            potential,
            m,
            q,
            kinematics: None,
        }
    }

    pub fn with_kinematics(mut self, k: Kinematics) -> Self {
        self.kinematics = Some(k);
        self
    }

    fn coulomb(&self, route: &str) -> Result<(f64, SignConvention)> {
        self.potential.as_coulomb().ok_or_else(|| {
            BornError::domain(format!(
                "route '{route}' needs a Coulomb potential, got '{}'",
                self.potential.name()
            ))
        })
    }
}

pub trait AmplitudeRoute: Send + Sync {
    fn method(&self) -> Method;

    fn name(&self) -> &'static str {
        self.method().as_str()
    }

    /// Short spellings accepted on the command line.
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    fn evaluate(&self, req: &AmplitudeRequest, opts: &BornOptions) -> Result<Amplitude>;
}

struct GenericRadial;

impl AmplitudeRoute for GenericRadial {
    fn method(&self) -> Method {
        Method::GenericRadial
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["generic", "radial"]
    }

    fn evaluate(&self, req: &AmplitudeRequest, opts: &BornOptions) -> Result<Amplitude> {
        born_radial(&req.potential, req.m, req.q, opts)
    }
}

struct ClosedForm;

impl AmplitudeRoute for ClosedForm {
    fn method(&self) -> Method {
        Method::ClosedForm
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["closed"]
    }

    fn evaluate(&self, req: &AmplitudeRequest, _opts: &BornOptions) -> Result<Amplitude> {
        match req.potential {
            RadialPotential::Coulomb { e2, sign } => coulomb_closed(req.m, e2, sign, req.q),
            RadialPotential::Yukawa { e2, lambda, sign } => {
                yukawa_closed(req.m, e2, lambda, sign, req.q)
            }
            RadialPotential::Custom(_) => Err(BornError::domain(format!(
                "no closed form for custom potential '{}'",
                req.potential.name()
            ))),
        }
    }
}

struct ScreenedLimit;

impl AmplitudeRoute for ScreenedLimit {
    fn method(&self) -> Method {
        Method::ScreenedLimit
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["screened"]
    }

    fn evaluate(&self, req: &AmplitudeRequest, opts: &BornOptions) -> Result<Amplitude> {
        let (e2, sign) = req.coulomb(self.name())?;
        coulomb_screened_limit(req.m, e2, sign, req.q, opts)
    }
}

struct Cylindrical;

impl AmplitudeRoute for Cylindrical {
    fn method(&self) -> Method {
        Method::Cylindrical
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["cyl"]
    }

    fn evaluate(&self, req: &AmplitudeRequest, opts: &BornOptions) -> Result<Amplitude> {
        let (e2, sign) = req.coulomb(self.name())?;
        coulomb_cylindrical(req.m, e2, sign, req.q, opts)
    }
}

struct OppenheimerHardMode;

impl AmplitudeRoute for OppenheimerHardMode {
    fn method(&self) -> Method {
        Method::OppenheimerHardMode
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["oppenheimer", "hard"]
    }

    /// Without kinematics, q is realized at θ = π/2, i.e. p = q/√2.
    fn evaluate(&self, req: &AmplitudeRequest, opts: &BornOptions) -> Result<Amplitude> {
        let (e2, sign) = req.coulomb(self.name())?;
        let (p, theta) = match req.kinematics {
            Some(k) => (k.p(), k.theta()),
            None => {
                check_q_positive(req.q)?;
                (req.q * FRAC_1_SQRT_2, std::f64::consts::FRAC_PI_2)
            }
        };
        coulomb_oppenheimer_hard_mode(req.m, e2, sign, p, theta, opts)
    }
}

struct Distributional;

impl AmplitudeRoute for Distributional {
    fn method(&self) -> Method {
        Method::Distributional
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["distribution", "fourier"]
    }

    fn evaluate(&self, req: &AmplitudeRequest, _opts: &BornOptions) -> Result<Amplitude> {
        let (e2, sign) = req.coulomb(self.name())?;
        route3_reconstruction(req.m, e2, sign, req.q)
    }
}

/// Routes keyed by canonical name, with aliases.
#[derive(Clone)]
pub struct RouteRegistry {
    routes: BTreeMap<&'static str, Arc<dyn AmplitudeRoute>>,
    aliases: BTreeMap<&'static str, &'static str>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        RouteRegistry {
            routes: BTreeMap::new(),
            aliases: BTreeMap::new(),
        }
    }

    /// Every built-in route.
    pub fn with_builtins() -> Self {
        let mut reg = RouteRegistry::empty();
        reg.register(Arc::new(GenericRadial));
        reg.register(Arc::new(ClosedForm));
        reg.register(Arc::new(ScreenedLimit));
        reg.register(Arc::new(Cylindrical));
        reg.register(Arc::new(OppenheimerHardMode));
        reg.register(Arc::new(Distributional));
        reg
    }

    /// Adds or replaces a route under its canonical name and aliases.
    pub fn register(&mut self, route: Arc<dyn AmplitudeRoute>) {
        let name = route.name();
        for &alias in route.aliases() {
            self.aliases.insert(alias, name);
        }
        self.routes.insert(name, route);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn AmplitudeRoute>> {
        let key = name.trim().to_ascii_lowercase().replace('-', "_");
        let canonical = self
            .aliases
            .get(key.as_str())
            .copied()
            .unwrap_or(key.as_str());
        self.routes.get(canonical).cloned().ok_or_else(|| {
            BornError::domain(format!(
                "unknown method '{name}'; available: {}",
                self.names().join(", ")
            ))
        })
    }

    pub fn evaluate(
        &self,
        name: &str,
        req: &AmplitudeRequest,
        opts: &BornOptions,
    ) -> Result<Amplitude> {
        self.get(name)?.evaluate(req, opts)
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        RouteRegistry::with_builtins()
    }
}

impl std::fmt::Debug for RouteRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RouteRegistry")
            .field("routes", &self.names())
            .finish()
    }
}
