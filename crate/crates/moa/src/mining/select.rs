//! Picking representatives from a front: an Lp compromise closest to the
//! front's own ideal point, and tolerance neighborhoods around the best
//! value of one objective.

use serde::{Deserialize, Serialize};

use crate::pareto::{Front, ObjectiveVector, Solution};
use crate::problems::ObjectiveSense;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PNorm {
    L1,
    L2,
    LInf,
}

impl std::str::FromStr for PNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(PNorm::L1),
            "2" => Ok(PNorm::L2),
            "inf" => Ok(PNorm::LInf),
            other => Err(Error::InvalidValue(format!(
                "unknown norm '{other}' (expected 1, 2, or inf)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompromiseChoice {
    pub member: Solution,
    /// Objectives excluded from the distance because every member shares
    /// one value there (zero range), in ascending index order.
    pub dropped_objectives: Vec<usize>,
}

/// Lexicographic order on objective vectors, used only to break exact
/// distance ties deterministically.
fn lex_greater(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    for (x, y) in a.values().iter().zip(b.values()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// The member closest to the front's own ideal point under the chosen
/// norm, after rescaling each objective to [0, 1] by the front's ideal
/// and nadir. Degenerate objectives (zero range across the front) are
/// dropped from the distance and reported. Exact distance ties go to the
/// lexicographically greatest objective vector.
pub fn select_compromise(front: &Front, norm: PNorm) -> Result<CompromiseChoice> {
    if front.is_empty() {
        return Err(Error::EmptyInput("compromise selection needs a non-empty front"));
    }
    let n = front.objective_count();
    let members = front.members();
    let mut ideal = vec![f64::NEG_INFINITY; n];
    let mut nadir = vec![f64::INFINITY; n];
    for m in members {
        for (j, &v) in m.objectives.values().iter().enumerate() {
            ideal[j] = ideal[j].max(v);
            nadir[j] = nadir[j].min(v);
        }
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for j in 0..n {
        if ideal[j] > nadir[j] {
            kept.push(j);
        } else {
            dropped.push(j);
        }
    }

    let distance = |m: &Solution| -> f64 {
        let deficits = kept.iter().map(|&j| {
            let u = (m.objectives[j] - nadir[j]) / (ideal[j] - nadir[j]);
            1.0 - u
        });
        match norm {
            PNorm::L1 => deficits.sum(),
            PNorm::L2 => deficits.map(|d| d * d).sum::<f64>().sqrt(),
            PNorm::LInf => deficits.fold(0.0, f64::max),
        }
    };

    let mut best = &members[0];
    let mut best_d = distance(best);
    for m in &members[1..] {
        let d = distance(m);
        if d < best_d || (d == best_d && lex_greater(&m.objectives, &best.objectives)) {
            best = m;
            best_d = d;
        }
    }
    Ok(CompromiseChoice {
        member: best.clone(),
        dropped_objectives: dropped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    /// Members whose chosen objective lies within the tolerance window of
    /// the front's best value, in the original member order.
    pub front: Front,
    /// True when the best value was exactly zero, making a relative window
    /// empty; the tolerance was then applied as an absolute width.
    pub absolute_fallback: bool,
}

/// Members within `rel_tol` (relative) of the front's best value of one
/// objective, interpreted in its physical orientation: `sense` says
/// whether smaller or larger raw values are better.
pub fn select_neighborhood(
    front: &Front,
    objective: usize,
    rel_tol: f64,
    sense: ObjectiveSense,
) -> Result<Neighborhood> {
    if front.is_empty() {
        return Err(Error::EmptyInput("neighborhood selection needs a non-empty front"));
    }
    if objective >= front.objective_count() {
        return Err(Error::InvalidValue(format!(
            "objective index {objective} out of range for {} objectives",
            front.objective_count()
        )));
    }
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::InvalidConfig(
            "neighborhood tolerance must be a positive finite number".into(),
        ));
    }

    // Internally every objective is maximized; recover the physical scale
    // so the tolerance window reads in the problem's own units.
    let physical = |m: &Solution| -> f64 {
        match sense {
            ObjectiveSense::Maximize => m.objectives[objective],
            ObjectiveSense::Minimize => -m.objectives[objective],
        }
    };
    let values: Vec<f64> = front.members().iter().map(physical).collect();
    let best = match sense {
        ObjectiveSense::Minimize => values.iter().copied().fold(f64::INFINITY, f64::min),
        ObjectiveSense::Maximize => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let absolute_fallback = best == 0.0;
    let width = if absolute_fallback {
        rel_tol
    } else {
        rel_tol * best.abs()
    };
    let keep: Vec<Solution> = front
        .members()
        .iter()
        .zip(&values)
        .filter(|(_, &v)| match sense {
            ObjectiveSense::Minimize => v <= best + width,
            ObjectiveSense::Maximize => v >= best - width,
        })
        .map(|(m, _)| m.clone())
        .collect();
    let front = Front::new(front.objective_count(), keep)
        .expect("a subset of a front stays mutually non-dominated");
    Ok(Neighborhood {
        front,
        absolute_fallback,
    })
}
