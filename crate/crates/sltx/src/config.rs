//! JSON problem configuration, canonical digest and solver overrides.
//!
//! ```json
//! {
//!   "h1": -0.3333333333333333, "h2": 0.3333333333333333,
//!   "omega": [1, 1, 1], "alpha": 0,
//!   "beta": [0, 1], "beta_prime": [1, 0],
//!   "gamma": [1, 1, 1, 1], "delta": [1, 1, 1, 1],
//!   "q": { "pieces": [[0], [0], [0]] },
//!   "solver": { "rk_tol": 1e-10 },
//!   "asymptotics": { "phase": "accumulated" }
//! }
//! ```
//!
//! `q`, `solver` (and each of its keys) and `asymptotics` are optional.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use sltx_core::problem::PhaseConvention;
use sltx_core::{validate, PiecewisePotential, ProblemSpec, SolverConfig, ValidatedProblem, ValidationError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config error at `{key}`: {message}")]
    Parse { key: String, message: String },
    #[error("config rejected: {0}")]
    Validation(#[from] ValidationError),
    #[error("bad --tol-override `{0}`: {1}")]
    Override(String, String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    h1: f64,
    h2: f64,
    omega: [f64; 3],
    alpha: f64,
    beta: [f64; 2],
    beta_prime: [f64; 2],
    gamma: [f64; 4],
    delta: [f64; 4],
    #[serde(default)]
    q: Option<RawPotential>,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    asymptotics: RawAsymptotics,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    pieces: [Vec<f64>; 3],
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    rk_tol: Option<f64>,
    root_tol: Option<f64>,
    quad_nodes: Option<usize>,
    bracket_subdiv: Option<usize>,
    scan_floor_factor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAsymptotics {
    #[serde(default)]
    phase: RawPhase,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawPhase {
    #[default]
    Accumulated,
    Printed,
}

/// A validated problem together with the digest of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub problem: ValidatedProblem,
    /// Hex SHA-256 of the canonical (sorted-key, compact) JSON.
    pub digest: String,
}

/// Reads, parses and validates a config file.
pub fn load(path: &Path, overrides: &[String]) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse(&text, overrides)
}

/// Parses and validates config text, then applies `key=value` solver overrides.
pub fn parse(text: &str, overrides: &[String]) -> Result<LoadedConfig, ConfigError> {
    let value: serde_json::Value = {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(parse_error)?
    };
    let digest = digest(&value);
    let raw: RawConfig = serde_path_to_error::deserialize(value).map_err(parse_error)?;
    let mut spec = ProblemSpec {
        h1: raw.h1,
        h2: raw.h2,
        omega: raw.omega,
        alpha: raw.alpha,
        beta: raw.beta,
        beta_prime: raw.beta_prime,
        gamma: raw.gamma,
        delta: raw.delta,
        q: match raw.q {
            Some(RawPotential { pieces: [l, m, r] }) => PiecewisePotential::new(l, m, r),
            None => PiecewisePotential::zero(),
        },
        solver: solver_config(&raw.solver),
        phase_convention: match raw.asymptotics.phase {
            RawPhase::Accumulated => PhaseConvention::Accumulated,
            RawPhase::Printed => PhaseConvention::Printed,
        },
    };
    for o in overrides {
        apply_override(&mut spec.solver, o)?;
    }
    Ok(LoadedConfig { problem: validate(spec)?, digest })
}

fn parse_error<E: std::fmt::Display>(e: serde_path_to_error::Error<E>) -> ConfigError {
    let key = e.path().to_string();
    ConfigError::Parse { key, message: e.inner().to_string() }
}

fn solver_config(raw: &RawSolver) -> SolverConfig {
    let d = SolverConfig::default();
    SolverConfig {
        rk_tol: raw.rk_tol.unwrap_or(d.rk_tol),
        root_tol: raw.root_tol.unwrap_or(d.root_tol),
        quad_nodes: raw.quad_nodes.unwrap_or(d.quad_nodes),
        bracket_subdiv: raw.bracket_subdiv.unwrap_or(d.bracket_subdiv),
        scan_floor_factor: raw.scan_floor_factor.unwrap_or(d.scan_floor_factor),
    }
}

/// Applies `key=value` (key optionally prefixed with `solver.`).
pub fn apply_override(solver: &mut SolverConfig, item: &str) -> Result<(), ConfigError> {
    let bad = |msg: &str| ConfigError::Override(item.to_string(), msg.to_string());
    let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
    let key = key.trim();
    let key = key.strip_prefix("solver.").unwrap_or(key);
    let value = value.trim();
    let float = || value.parse::<f64>().map_err(|e| bad(&e.to_string()));
    let count = || value.parse::<usize>().map_err(|e| bad(&e.to_string()));
    match key {
        "rk_tol" => solver.rk_tol = float()?,
        "root_tol" => solver.root_tol = float()?,
        "scan_floor_factor" => solver.scan_floor_factor = float()?,
        "quad_nodes" => solver.quad_nodes = count()?,
        "bracket_subdiv" => solver.bracket_subdiv = count()?,
        _ => return Err(bad("unknown solver key")),
    }
    Ok(())
}

/// SHA-256 of the compact serialization; object keys serialize sorted.
pub fn digest(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("JSON values always serialize");
    let hash = Sha256::digest(canonical.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}
