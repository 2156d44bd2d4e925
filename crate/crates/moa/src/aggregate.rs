//! Multi-run evaluation pipeline: per-point disparity across runs,
//! conservative-front filtering, convergence verdicts, and whole-front
//! comparison.

use serde::{Deserialize, Serialize};

use crate::indicators::{
    hypervolume_clipped, ideal, nadir, psi0, psi1, reference_points, relative_difference, RunSet,
};
use crate::pareto::{dominates, Front, ObjectiveVector};
use crate::{Error, Result};

/// Distance metric for per-point disparity, measured in objective space.
///
/// The default is plain Euclidean distance on the physically scaled
/// objective values, so a disparity threshold carries the objectives'
/// units. The normalized variant divides each objective's difference by
/// the grand front's range on that objective first (degenerate objectives
/// with zero range are left unscaled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisparityMetric {
    #[default]
    RawEuclidean,
    NormalizedEuclidean,
}

/// For each grand-front member, the worst over runs of the distance to
/// that run's closest point: how far some run stayed from this point.
/// Returned in grand-front member order.
pub fn per_point_disparity(
    grand: &Front,
    runs: &RunSet,
    metric: DisparityMetric,
) -> Result<Vec<f64>> {
    if runs.len() < 2 {
        return Err(Error::NotEnoughRuns {
            needed: 2,
            found: runs.len(),
        });
    }
    if grand.objective_count() != runs.objective_count() {
        return Err(Error::ObjectiveCountMismatch {
            expected: grand.objective_count(),
            found: runs.objective_count(),
        });
    }
    for f in runs.fronts() {
        if f.is_empty() {
            return Err(Error::EmptyInput("disparity needs non-empty run fronts"));
        }
    }

    let scale: Vec<f64> = match metric {
        DisparityMetric::RawEuclidean => vec![1.0; grand.objective_count()],
        DisparityMetric::NormalizedEuclidean => {
            let objs = grand.objectives();
            if objs.is_empty() {
                vec![1.0; grand.objective_count()]
            } else {
                let lo = nadir(&objs)?;
                let hi = ideal(&objs)?;
                (0..grand.objective_count())
                    .map(|k| {
                        let range = hi[k] - lo[k];
                        if range > 0.0 {
                            range
                        } else {
                            1.0
                        }
                    })
                    .collect()
            }
        }
    };
    let dist = |a: &ObjectiveVector, b: &ObjectiveVector| -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .zip(&scale)
            .map(|((x, y), s)| ((x - y) / s).powi(2))
            .sum::<f64>()
            .sqrt()
    };

    Ok(grand
        .members()
        .iter()
        .map(|p| {
            runs.fronts()
                .iter()
                .map(|f| {
                    f.members()
                        .iter()
                        .map(|x| dist(&p.objectives, &x.objectives))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Members of the grand front whose disparity is at or below ε: the part
/// of the front every run reliably came close to.
pub fn conservative_front(grand: &Front, disparity: &[f64], epsilon: f64) -> Result<Front> {
    if disparity.len() != grand.len() {
        return Err(Error::InvalidValue(format!(
            "disparity values ({}) must cover the grand front ({} members)",
            disparity.len(),
            grand.len()
        )));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidValue(format!(
            "disparity threshold must be non-negative, got {epsilon}"
        )));
    }
    let kept = grand
        .members()
        .iter()
        .zip(disparity)
        .filter(|(_, &d)| d <= epsilon)
        .map(|(m, _)| m.clone())
        .collect();
    Front::new(grand.objective_count(), kept)
}

/// Everything the run-set disparity procedure produces: the grand front
/// Ψ0, the shared-attainment corners Ψ1, the conservative nadir η̄ used as
/// the hypervolume reference, both clipped hypervolumes, their relative
/// difference (undefined when the Ψ0 hypervolume is zero), and per-member
/// disparities aligned with `psi0.members()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisparityReport {
    pub psi0: Front,
    pub psi1: Vec<ObjectiveVector>,
    pub eta_bar: ObjectiveVector,
    pub hv_psi0: f64,
    pub hv_psi1: f64,
    pub relative_difference: Option<f64>,
    pub per_point: Vec<f64>,
}

pub fn disparity_report(runs: &RunSet, metric: DisparityMetric) -> Result<DisparityReport> {
    if runs.len() < 2 {
        return Err(Error::NotEnoughRuns {
            needed: 2,
            found: runs.len(),
        });
    }
    let grand = psi0(runs)?;
    let corners = psi1(runs)?;
    let eta_bar = reference_points(runs)?.conservative_nadir;
    let hv_psi0 = hypervolume_clipped(&grand.objectives(), &eta_bar)?;
    let hv_psi1 = hypervolume_clipped(&corners, &eta_bar)?;
    let per_point = per_point_disparity(&grand, runs, metric)?;
    Ok(DisparityReport {
        psi0: grand,
        psi1: corners,
        eta_bar,
        hv_psi0,
        hv_psi1,
        relative_difference: relative_difference(hv_psi0, hv_psi1),
        per_point,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum ConvergenceVerdict {
    Converged,
    RerunAdvised { diagnostic: String },
}

impl ConvergenceVerdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, ConvergenceVerdict::Converged)
    }
}

/// Compares the attainment surfaces' hypervolume gap against a relative
/// threshold (default 0.05 in the surrounding tooling): a gap above it
/// means the runs disagree enough that more or longer runs are advisable.
pub fn convergence_check(runs: &RunSet, threshold: f64) -> Result<ConvergenceVerdict> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidValue(format!(
            "convergence threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let report = disparity_report(runs, DisparityMetric::RawEuclidean)?;
    Ok(match report.relative_difference {
        None => ConvergenceVerdict::RerunAdvised {
            diagnostic: "relative difference is undefined: the grand front's hypervolume at the \
                         conservative nadir is zero"
                .into(),
        },
        Some(d) if d > threshold => ConvergenceVerdict::RerunAdvised {
            diagnostic: format!(
                "relative hypervolume difference {:.3}% exceeds threshold {:.3}%",
                d * 100.0,
                threshold * 100.0
            ),
        },
        Some(_) => ConvergenceVerdict::Converged,
    })
}

/// Outcome of comparing two fronts by strict dominance coverage. When
/// neither front covers the other, the witnesses list each side's members
/// that no point of the other side strictly dominates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum ComparisonVerdict {
    FirstDominates,
    SecondDominates,
    Incomparable {
        first_witnesses: Vec<ObjectiveVector>,
        second_witnesses: Vec<ObjectiveVector>,
    },
}

pub fn front_compare(a: &Front, b: &Front) -> Result<ComparisonVerdict> {
    if a.objective_count() != b.objective_count() {
        return Err(Error::ObjectiveCountMismatch {
            expected: a.objective_count(),
            found: b.objective_count(),
        });
    }
    let covers = |x: &Front, y: &Front| {
        y.members().iter().all(|m| {
            x.members()
                .iter()
                .any(|w| dominates(&w.objectives, &m.objectives))
        })
    };
    let first = covers(a, b);
    let second = covers(b, a);
    Ok(match (first, second) {
        // Both hold only when both fronts are empty; nothing distinguishes
        // them, so that degenerate case is incomparable too.
        (true, false) => ComparisonVerdict::FirstDominates,
        (false, true) => ComparisonVerdict::SecondDominates,
        _ => {
            let undominated = |x: &Front, y: &Front| {
                x.members()
                    .iter()
                    .filter(|m| {
                        !y.members()
                            .iter()
                            .any(|w| dominates(&w.objectives, &m.objectives))
                    })
                    .map(|m| m.objectives.clone())
                    .collect()
            };
            ComparisonVerdict::Incomparable {
                first_witnesses: undominated(a, b),
                second_witnesses: undominated(b, a),
            }
        }
    })
}
