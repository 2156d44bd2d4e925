//! Benchmark problems and the interface the optimizer drives.
//!
//! Problems report raw values in their declared physical orientation;
//! [`internalize`] negates minimized objectives so the rest of the toolkit
//! can assume maximization, and [`externalize`] undoes it for export.

mod aero;
mod synthetic;
mod wta;

pub use aero::{
    aero_features, waveforms, AeroConstants, AeroFeatures, KinematicRecord, Waveforms,
};
pub use synthetic::SyntheticBiobjective;
pub use wta::{wta_scores, Plausibility, WtaProblem, WtaSpec};

use serde::{Deserialize, Serialize};

use crate::pareto::{ObjectiveVector, SearchSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub name: String,
    pub sense: ObjectiveSense,
}

impl ObjectiveSpec {
    pub fn maximize(name: &str) -> Self {
        Self {
            name: name.into(),
            sense: ObjectiveSense::Maximize,
        }
    }

    pub fn minimize(name: &str) -> Self {
        Self {
            name: name.into(),
            sense: ObjectiveSense::Minimize,
        }
    }
}

/// A parameterized model under study. Evaluation must be a pure function of
/// (parameters, evaluation seed): repeated calls with the same arguments
/// return identical values.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;
    fn search_space(&self) -> &SearchSpace;
    fn objectives(&self) -> &[ObjectiveSpec];
    /// Raw objective values in declared orientation. Non-finite components
    /// are allowed here; the optimizer demotes such candidates instead of
    /// aborting.
    fn evaluate_raw(&self, params: &[f64]) -> Vec<f64>;
}

/// Convert raw (physical) values to the internal all-maximized convention.
/// Returns `None` when any component is non-finite.
pub fn internalize(specs: &[ObjectiveSpec], raw: &[f64]) -> Option<ObjectiveVector> {
    assert_eq!(specs.len(), raw.len(), "objective count mismatch");
    if raw.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let values = specs
        .iter()
        .zip(raw)
        .map(|(s, &v)| match s.sense {
            ObjectiveSense::Maximize => v,
            ObjectiveSense::Minimize => -v,
        })
        .collect();
    Some(ObjectiveVector::new(values).expect("finite values"))
}

/// Undo [`internalize`]: recover raw values in declared orientation.
pub fn externalize(specs: &[ObjectiveSpec], internal: &ObjectiveVector) -> Vec<f64> {
    assert_eq!(specs.len(), internal.len(), "objective count mismatch");
    specs
        .iter()
        .zip(internal.values())
        .map(|(s, &v)| match s.sense {
            ObjectiveSense::Maximize => v,
            ObjectiveSense::Minimize => -v,
        })
        .collect()
}

/// Configuration for constructing a named problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub name: String,
    /// Seed for problem-owned randomness (e.g. the WTA input set).
    pub eval_seed: u64,
    pub channels: usize,
    pub input_count: usize,
    pub settle_iters: usize,
    pub redraw_per_individual: bool,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            name: String::new(),
            eval_seed: 0,
            channels: 3,
            input_count: 500,
            settle_iters: 100,
            redraw_per_individual: false,
        }
    }
}

/// Concrete problem dispatch. An enum (rather than trait objects all the way
/// down) so callers can reach problem-specific analyses like plausibility.
#[derive(Debug)]
pub enum ProblemInstance {
    Synthetic(SyntheticBiobjective),
    Wta(WtaProblem),
}

impl ProblemInstance {
    pub fn as_wta(&self) -> Option<&WtaProblem> {
        match self {
            ProblemInstance::Wta(p) => Some(p),
            _ => None,
        }
    }
}

impl Problem for ProblemInstance {
    fn name(&self) -> &str {
        match self {
            ProblemInstance::Synthetic(p) => p.name(),
            ProblemInstance::Wta(p) => p.name(),
        }
    }
    fn search_space(&self) -> &SearchSpace {
        match self {
            ProblemInstance::Synthetic(p) => p.search_space(),
            ProblemInstance::Wta(p) => p.search_space(),
        }
    }
    fn objectives(&self) -> &[ObjectiveSpec] {
        match self {
            ProblemInstance::Synthetic(p) => p.objectives(),
            ProblemInstance::Wta(p) => p.objectives(),
        }
    }
    fn evaluate_raw(&self, params: &[f64]) -> Vec<f64> {
        match self {
            ProblemInstance::Synthetic(p) => p.evaluate_raw(params),
            ProblemInstance::Wta(p) => p.evaluate_raw(params),
        }
    }
}

pub fn build_problem(cfg: &ProblemConfig) -> Result<ProblemInstance> {
    match cfg.name.as_str() {
        "synthetic" => Ok(ProblemInstance::Synthetic(SyntheticBiobjective::new())),
        "wta" => Ok(ProblemInstance::Wta(WtaProblem::new(
            WtaSpec {
                channels: cfg.channels,
                input_count: cfg.input_count,
                settle_iters: cfg.settle_iters,
                ..WtaSpec::default()
            },
            cfg.eval_seed,
            cfg.redraw_per_individual,
        )?)),
        other => Err(Error::InvalidConfig(format!(
            "unknown problem name '{other}' (known problems: synthetic, wta)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_round_trips() {
        let specs = [ObjectiveSpec::minimize("a"), ObjectiveSpec::maximize("b")];
        let internal = internalize(&specs, &[0.25, 0.5]).unwrap();
        assert_eq!(internal.values(), &[-0.25, 0.5]);
        assert_eq!(externalize(&specs, &internal), vec![0.25, 0.5]);
    }

    #[test]
    fn internalize_flags_non_finite() {
        let specs = [ObjectiveSpec::minimize("a"), ObjectiveSpec::maximize("b")];
        assert!(internalize(&specs, &[f64::NAN, 0.5]).is_none());
        assert!(internalize(&specs, &[1.0, f64::NEG_INFINITY]).is_none());
    }

    #[test]
    fn unknown_problem_name_is_rejected() {
        let cfg = ProblemConfig {
            name: "nope".into(),
            ..ProblemConfig::default()
        };
        let err = build_problem(&cfg).unwrap_err();
        assert!(err.to_string().contains("unknown problem name"));
    }
}
