use born_core::born::{coulomb_closed, cross_section, AmplitudeRequest, RouteRegistry};
use born_core::distributions::{IdentityRecord, IdentityRegistry, IdentitySuite};
use born_core::kinematics::{angle_from_q, Kinematics};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{GridPoint, RunConfig};
use crate::output::{render, Rendered, Summary};
use crate::CliError;

#[derive(Debug, Serialize)]
struct AmplitudeRow {
    q: f64,
    method: &'static str,
    value: f64,
    est_err: f64,
}

#[derive(Debug, Serialize)]
struct XsecRow {
    theta_deg: f64,
    q: f64,
    method: &'static str,
    amplitude: f64,
    est_err: f64,
    dsigma_domega: f64,
}

#[derive(Debug, Serialize)]
struct CompareRow {
    q: f64,
    closed: f64,
    screened: f64,
    cylindrical: f64,
    max_gap: f64,
    pass: bool,
}

/// Flat form of an identity record for CSV, with φ's parameters as JSON text.
#[derive(Debug, Serialize)]
struct VerifyRow {
    identity: String,
    phi_index: usize,
    phi_params: String,
    value: f64,
    expected: f64,
    gap: f64,
    est_err: f64,
    pass: bool,
}

fn request(cfg: &RunConfig, pt: &GridPoint) -> Result<AmplitudeRequest, CliError> {
    let req = AmplitudeRequest::new(cfg.potential().clone(), cfg.m, pt.q);
    Ok(match (pt.theta_deg, cfg.p) {
        (Some(deg), Some(p)) => req.with_kinematics(Kinematics::new(p, deg.to_radians())?),
        _ => req,
    })
}

/// Maps every grid point in parallel, keeping grid order.
fn per_point<R: Send>(
    cfg: &RunConfig,
    f: impl Fn(&GridPoint) -> Result<Vec<R>, CliError> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    let chunks: Vec<Vec<R>> = cfg.grid.par_iter().map(f).collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn resolve_methods(cfg: &RunConfig, registry: &RouteRegistry) -> Result<Vec<&'static str>, CliError> {
    cfg.methods
        .iter()
        .map(|m| Ok(registry.get(m)?.name()))
        .collect()
}

pub fn run_amplitude(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let registry = RouteRegistry::default();
    let methods = resolve_methods(cfg, &registry)?;
    let rows = per_point(cfg, |pt| {
        let req = request(cfg, pt)?;
        methods
            .iter()
            .map(|&name| {
                let amp = registry.evaluate(name, &req, &cfg.born)?;
                Ok(AmplitudeRow {
                    q: pt.q,
                    method: amp.method.as_str(),
                    value: amp.value,
                    est_err: amp.est_err,
                })
            })
            .collect()
    })?;
    render(cfg, &rows, &rows, Summary::table(rows.len()))
}

pub fn run_xsec(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let p = cfg
        .p
        .ok_or_else(|| CliError::usage("xsec needs the momentum --p"))?;
    let registry = RouteRegistry::default();
    let methods = resolve_methods(cfg, &registry)?;
    let rows = per_point(cfg, |pt| {
        let theta = match pt.theta_deg {
            Some(deg) => deg.to_radians(),
            None => angle_from_q(p, pt.q)?,
        };
        let k = Kinematics::new(p, theta)?;
        let req = AmplitudeRequest::new(cfg.potential().clone(), cfg.m, pt.q).with_kinematics(k);
        methods
            .iter()
            .map(|&name| {
                let amp = registry.evaluate(name, &req, &cfg.born)?;
                let xs = cross_section(&amp, &k)?;
                Ok(XsecRow {
                    theta_deg: pt.theta_deg.unwrap_or_else(|| theta.to_degrees()),
                    q: pt.q,
                    method: amp.method.as_str(),
                    amplitude: amp.value,
                    est_err: amp.est_err,
                    dsigma_domega: xs.value,
                })
            })
            .collect()
    })?;
    render(cfg, &rows, &rows, Summary::table(rows.len()))
}

/// Largest accepted relative gap between a numerical route and the closed form.
pub fn compare_threshold(cfg: &RunConfig) -> f64 {
    cfg.gap_tol.unwrap_or((10.0 * cfg.tol).max(1e-6))
}

pub fn run_compare(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let registry = RouteRegistry::default();
    let threshold = compare_threshold(cfg);
    let (e2, sign) = cfg
        .potential()
        .as_coulomb()
        .ok_or_else(|| CliError::usage("compare needs --potential coulomb"))?;
    let rows = per_point(cfg, |pt| {
        let req = request(cfg, pt)?;
        let closed = coulomb_closed(cfg.m, e2, sign, pt.q)?.value;
        let screened = registry.evaluate("screened_limit", &req, &cfg.born)?.value;
        let cylindrical = registry.evaluate("cylindrical", &req, &cfg.born)?.value;
        let gap = |v: f64| (v - closed).abs() / closed.abs();
        let max_gap = gap(screened).max(gap(cylindrical));
        Ok(vec![CompareRow {
            q: pt.q,
            closed,
            screened,
            cylindrical,
            max_gap,
            pass: max_gap <= threshold,
        }])
    })?;
    let failures = rows.iter().filter(|r| !r.pass).count();
    render(cfg, &rows, &rows, Summary::checks(rows.len(), failures))
}

pub fn run_verify(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let defaults = IdentitySuite::default();
    let suite = IdentitySuite {
        seed: cfg.seed.unwrap_or(defaults.seed),
        count: cfg.count.unwrap_or(defaults.count),
        only: cfg.identities.clone(),
        strict: cfg.strict,
        opts: defaults.opts,
    };
    let records: Vec<IdentityRecord> = suite.run(&IdentityRegistry::default())?;
    let flat: Vec<VerifyRow> = records
        .iter()
        .map(|r| VerifyRow {
            identity: r.identity.clone(),
            phi_index: r.phi_params.index,
            phi_params: serde_json::to_string(&r.phi_params).expect("parameters serialize"),
            value: r.value,
            expected: r.expected,
            gap: r.gap,
            est_err: r.est_err,
            pass: r.pass,
        })
        .collect();
    let failures = records.iter().filter(|r| !r.pass).count();
    render(cfg, &flat, &records, Summary::checks(records.len(), failures))
}
