//! Flat key-value study configuration: one `key = value` pair per line,
//! dotted section keys, `#` comments. Parse errors carry the line number.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use moa::mining::{CartConfig, PNorm};
use moa::nsga2::AlgorithmConfig;
use moa::problems::ProblemConfig;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Cluster count for k-means over front parameters.
    pub k: usize,
    pub p_norm: PNorm,
    /// Replication factor applied to the minority class before tree
    /// training; 1 disables balancing.
    pub balance_factor: u64,
    pub neighborhood_tolerance: f64,
    pub cart: CartConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            k: 3,
            p_norm: PNorm::L2,
            balance_factor: 1,
            neighborhood_tolerance: 0.05,
            cart: CartConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub problem: ProblemConfig,
    /// Sparse per-dimension bound overrides (index, lower, upper); must
    /// stay within the problem's declared space.
    pub space_overrides: Vec<(usize, f64, f64)>,
    /// Algorithm settings; the `seed` field is ignored here (per-run seeds
    /// are derived from `master_seed + run_index`).
    pub algorithm: AlgorithmConfig,
    pub runs: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    /// Convergence threshold on the relative hypervolume difference.
    pub threshold: f64,
    /// Disparity cutoff for the conservative front; absent skips Ψcons.
    pub epsilon: Option<f64>,
    pub analysis: AnalysisConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            space_overrides: Vec::new(),
            algorithm: AlgorithmConfig::default(),
            runs: 5,
            master_seed: 0,
            output_dir: PathBuf::from("study-out"),
            threshold: 0.05,
            epsilon: None,
            analysis: AnalysisConfig::default(),
        }
    }
}

fn parse<T: std::str::FromStr>(line: usize, key: &str, value: &str, what: &str) -> CliResult<T> {
    value.parse().map_err(|_| {
        CliError::Config(format!("line {line}: {key} expects {what}, got '{value}'"))
    })
}

fn parse_finite(line: usize, key: &str, value: &str) -> CliResult<f64> {
    let v: f64 = parse(line, key, value, "a number")?;
    if !v.is_finite() {
        return Err(CliError::Config(format!(
            "line {line}: {key} must be finite, got '{value}'"
        )));
    }
    Ok(v)
}

/// Parse a study config from text. Every key is optional except
/// `problem.name`; unknown and duplicate keys are errors naming the line.
pub fn parse_study_config(text: &str) -> CliResult<StudyConfig> {
    let mut cfg = StudyConfig::default();
    let mut seen: Vec<String> = Vec::new();
    let mut named = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.trim();
        if stripped.is_empty() || stripped.starts_with('#') {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {line}: expected 'key = value', got '{stripped}'"
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(CliError::Config(format!(
                "line {line}: duplicate key '{key}'"
            )));
        }
        seen.push(key.to_string());

        match key {
            "problem.name" => {
                cfg.problem.name = value.to_string();
                named = true;
            }
            "problem.eval_seed" => cfg.problem.eval_seed = parse(line, key, value, "an integer")?,
            "problem.channels" => cfg.problem.channels = parse(line, key, value, "an integer")?,
            "problem.input_count" => {
                cfg.problem.input_count = parse(line, key, value, "an integer")?
            }
            "problem.settle_iters" => {
                cfg.problem.settle_iters = parse(line, key, value, "an integer")?
            }
            "problem.redraw_per_individual" => {
                cfg.problem.redraw_per_individual = parse(line, key, value, "true or false")?
            }
            "algorithm.population_size" => {
                cfg.algorithm.population_size = parse(line, key, value, "an integer")?
            }
            "algorithm.generations" => {
                cfg.algorithm.generations = parse(line, key, value, "an integer")?
            }
            "algorithm.crossover_probability" => {
                cfg.algorithm.crossover_probability = parse_finite(line, key, value)?
            }
            "algorithm.mutation_probability" => {
                cfg.algorithm.mutation_probability = Some(parse_finite(line, key, value)?)
            }
            "algorithm.eta_c" => cfg.algorithm.eta_c = parse_finite(line, key, value)?,
            "algorithm.eta_m" => cfg.algorithm.eta_m = parse_finite(line, key, value)?,
            "study.runs" => cfg.runs = parse(line, key, value, "an integer")?,
            "study.master_seed" => cfg.master_seed = parse(line, key, value, "an integer")?,
            "study.output_dir" => cfg.output_dir = PathBuf::from(value),
            "study.threshold" => cfg.threshold = parse_finite(line, key, value)?,
            "study.epsilon" => {
                let v: f64 = parse(line, key, value, "a number")?;
                if v.is_nan() || v < 0.0 {
                    return Err(CliError::Config(format!(
                        "line {line}: study.epsilon must be non-negative, got '{value}'"
                    )));
                }
                cfg.epsilon = Some(v);
            }
            "analysis.k" => cfg.analysis.k = parse(line, key, value, "an integer")?,
            "analysis.p_norm" => {
                cfg.analysis.p_norm = value.parse().map_err(|e| {
                    CliError::Config(format!("line {line}: analysis.p_norm: {e}"))
                })?
            }
            "analysis.balance_factor" => {
                cfg.analysis.balance_factor = parse(line, key, value, "an integer")?
            }
            "analysis.neighborhood_tolerance" => {
                cfg.analysis.neighborhood_tolerance = parse_finite(line, key, value)?
            }
            "analysis.cart_max_depth" => {
                cfg.analysis.cart.max_depth = parse(line, key, value, "an integer")?
            }
            "analysis.cart_min_samples_leaf" => {
                cfg.analysis.cart.min_samples_leaf = parse(line, key, value, "an integer")?
            }
            "analysis.cart_min_impurity_decrease" => {
                cfg.analysis.cart.min_impurity_decrease = parse_finite(line, key, value)?
            }
            _ if key.starts_with("space.dim") => {
                let index: usize = key["space.dim".len()..].parse().map_err(|_| {
                    CliError::Config(format!(
                        "line {line}: space override keys look like space.dim0, got '{key}'"
                    ))
                })?;
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(CliError::Config(format!(
                        "line {line}: {key} expects '<lower> <upper>', got '{value}'"
                    )));
                }
                let lo = parse_finite(line, key, parts[0])?;
                let hi = parse_finite(line, key, parts[1])?;
                if lo >= hi {
                    return Err(CliError::Config(format!(
                        "line {line}: {key} needs lower < upper, got {lo} and {hi}"
                    )));
                }
                cfg.space_overrides.push((index, lo, hi));
            }
            _ => {
                return Err(CliError::Config(format!(
                    "line {line}: unknown key '{key}'"
                )));
            }
        }
    }

    if !named {
        return Err(CliError::Config(
            "missing required key problem.name".to_string(),
        ));
    }
    if cfg.runs < 1 {
        return Err(CliError::Config("study.runs must be at least 1".to_string()));
    }
    if !(cfg.threshold > 0.0 && cfg.threshold < 1.0) {
        return Err(CliError::Config(format!(
            "study.threshold must lie in (0, 1), got {}",
            cfg.threshold
        )));
    }
    Ok(cfg)
}
