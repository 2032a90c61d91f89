//! Config files and the resolved run configuration.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use born_core::born::BornOptions;
use born_core::kinematics::momentum_transfer;
use born_core::potentials::{RadialPotential, SignConvention};
use born_core::quadrature::LambdaLadder;
use born_core::born::reduced_mass;
use serde::Serialize;

use crate::args::{Cli, Command, Format, PotentialKind};
use crate::CliError;

/// Keys a config file may set; each mirrors the flag of the same name.
const KEYS: [&str; 22] = [
    "potential", "e2", "lambda", "sign", "m1", "m2", "m", "p", "theta-deg", "q", "tol",
    "lambda-start", "lambda-ratio", "lambda-steps", "method", "strict", "format", "out",
    "gap-tol", "seed", "count", "identity",
];

/// Finds `--config PATH` or `--config=PATH` without full parsing.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("config line {}: expected key = value, got '{raw}'", n + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config line {}: unknown key '{key}'; known keys: {}",
                n + 1,
                KEYS.join(", ")
            )));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Command-line arguments with config-file entries spliced in ahead of the
/// user's flags. Repeated flags override earlier ones, so flags win.
pub fn effective_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(|e| {
        CliError::usage(format!("cannot read config file {}: {e}", Path::new(&path).display()))
    })?;
    let mut injected = Vec::new();
    for (key, value) in parse_config(&text)? {
        if key == "strict" {
            match value.as_str() {
                "true" | "1" | "yes" => injected.push(OsString::from("--strict")),
                "false" | "0" | "no" => {}
                other => {
                    return Err(CliError::usage(format!("config: strict must be true or false, got '{other}'")))
                }
            }
        } else {
            injected.push(format!("--{key}").into());
            injected.push(value.into());
        }
    }
    let mut out = Vec::with_capacity(args.len() + injected.len());
    let mut rest = args.into_iter();
    out.extend(rest.next());
    out.extend(injected);
    out.extend(rest);
    Ok(out)
}

/// One grid point: q, and θ when the grid was given in angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub q: f64,
    pub theta_deg: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialSpec {
    pub kind: &'static str,
    pub e2: f64,
    pub lambda: Option<f64>,
    pub sign: &'static str,
}

/// Everything a command needs, after defaults and validation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub potential: PotentialSpec,
    /// Reduced mass.
    pub m: f64,
    pub p: Option<f64>,
    pub grid: Vec<GridPoint>,
    pub tol: f64,
    pub lambda_start: f64,
    pub lambda_ratio: f64,
    pub lambda_steps: usize,
    pub methods: Vec<String>,
    pub strict: bool,
    pub format: &'static str,
    pub gap_tol: Option<f64>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub identities: Vec<String>,
    #[serde(skip)]
    pub radial: Option<RadialPotential>,
    #[serde(skip)]
    pub born: BornOptions,
    #[serde(skip)]
    pub format_kind: Format,
    #[serde(skip)]
    pub command_kind: Command,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("--{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let s = &cli.shared;
        let command = cli.command;
        let sign: SignConvention = match &s.sign {
            Some(text) => text.parse().map_err(CliError::from)?,
            None => SignConvention::Repulsive,
        };
        let e2 = positive("e2", s.e2.unwrap_or(1.0))?;
        let kind = s.potential.unwrap_or(PotentialKind::Coulomb);
        let (radial, lambda) = match kind {
            PotentialKind::Coulomb => {
                if s.lambda.is_some() {
                    return Err(CliError::usage("--lambda only applies to --potential yukawa"));
                }
                (RadialPotential::coulomb(e2, sign)?, None)
            }
            PotentialKind::Yukawa => {
                let lambda = s.lambda.ok_or_else(|| CliError::usage("--potential yukawa needs --lambda"))?;
                (RadialPotential::yukawa(e2, lambda, sign)?, Some(lambda))
            }
        };
        let m = match (s.m, s.m1, s.m2) {
            (Some(m), None, None) => positive("m", m)?,
            (None, Some(m1), Some(m2)) => reduced_mass(m1, m2)?,
            (None, None, None) => 1.0,
            (Some(_), _, _) => return Err(CliError::usage("give either --m or --m1 with --m2, not both")),
            _ => return Err(CliError::usage("--m1 and --m2 must be given together")),
        };
        let tol = s.tol.unwrap_or(1e-10);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::usage(format!("--tol must lie in (0, 1), got {tol}")));
        }
        let default_ladder = LambdaLadder::default();
        let ladder = LambdaLadder {
            start: s.lambda_start.unwrap_or(default_ladder.start),
            ratio: s.lambda_ratio.unwrap_or(default_ladder.ratio),
            steps: s.lambda_steps.unwrap_or(default_ladder.steps),
        };
        let needs_ladder = command == Command::Compare
            || s.method.iter().flatten().any(|m| m.to_ascii_lowercase().starts_with("screen"));
        if needs_ladder {
            ladder.validate()?;
        }
        let p = s.p.map(|p| positive("p", p)).transpose()?;
        let grid = match (&s.theta_deg, &s.q) {
            (Some(_), Some(_)) => return Err(CliError::usage("give either --theta-deg or --q, not both")),
            (Some(thetas), None) => {
                let p = p.ok_or_else(|| CliError::usage("--theta-deg needs --p"))?;
                thetas
                    .iter()
                    .map(|&deg| {
                        Ok(GridPoint {
                            q: momentum_transfer(p, deg.to_radians())?,
                            theta_deg: Some(deg),
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?
            }
            (None, Some(qs)) => qs.iter().map(|&q| GridPoint { q, theta_deg: None }).collect(),
            (None, None) => Vec::new(),
        };
        if grid.is_empty() && command != Command::Verify {
            return Err(CliError::usage(format!(
                "{} needs a grid: --q or --theta-deg with --p",
                command.as_str()
            )));
        }
        if command == Command::Compare && kind != PotentialKind::Coulomb {
            return Err(CliError::usage("compare needs --potential coulomb"));
        }
        let methods = match (&s.method, command) {
            (Some(ms), _) if !ms.is_empty() => ms.clone(),
            (_, Command::Compare) => vec!["closed_form".into(), "screened_limit".into(), "cylindrical".into()],
            _ => match kind {
                PotentialKind::Coulomb => vec!["closed_form".into()],
                PotentialKind::Yukawa => vec!["generic_radial".into()],
            },
        };
        if let Some(g) = s.gap_tol {
            positive("gap-tol", g)?;
        }
        let format_kind = s.format.unwrap_or(Format::Csv);
        Ok(RunConfig {
            command: command.as_str(),
            potential: PotentialSpec {
                kind: match kind {
                    PotentialKind::Coulomb => "coulomb",
                    PotentialKind::Yukawa => "yukawa",
                },
                e2,
                lambda,
                sign: sign.as_str(),
            },
            m,
            p,
            grid,
            tol,
            lambda_start: ladder.start,
            lambda_ratio: ladder.ratio,
            lambda_steps: ladder.steps,
            methods,
            strict: s.strict,
            format: match format_kind {
                Format::Csv => "csv",
                Format::Json => "json",
            },
            gap_tol: s.gap_tol,
            seed: s.seed,
            count: s.count,
            identities: s.identity.clone().unwrap_or_default(),
            radial: Some(radial),
            born: BornOptions::default().with_tol(tol).with_strict(s.strict).with_ladder(ladder),
            format_kind,
            command_kind: command,
        })
    }

    pub fn potential(&self) -> &RadialPotential {
        self.radial.as_ref().expect("potential is always set")
    }
}
