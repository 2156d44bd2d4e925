//! Knowledge extraction from aggregated fronts: clustering, decision-tree
//! characterization with class balancing, parameter autocorrelation along
//! the front, compromise selection, and neighborhood extraction.

pub mod cart;
pub mod kmeans;
pub mod select;

pub use cart::{cart_classify, cart_train, CartConfig, DecisionTree, TreeNode};
pub use kmeans::{kmeans, ClusterAssignment};
pub use select::{
    select_compromise, select_neighborhood, CompromiseChoice, Neighborhood, PNorm,
};

use serde::{Deserialize, Serialize};

use crate::pareto::{Front, ParameterVector};
use crate::{Error, Result};

/// One classified parameter vector. The weight is a replication count:
/// a sample of weight w behaves exactly like w identical copies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub features: ParameterVector,
    pub label: String,
    pub weight: u64,
}

impl LabeledSample {
    pub fn new(features: ParameterVector, label: impl Into<String>) -> Self {
        Self {
            features,
            label: label.into(),
            weight: 1,
        }
    }
}

/// Multiplies the weight of every sample in `target_class` by `factor`,
/// leaving other classes untouched. Replication is the class-balancing
/// device used ahead of tree training; the distinct-sample multiset is
/// unchanged.
pub fn balance_by_replication(
    samples: &[LabeledSample],
    factor: u64,
    target_class: &str,
) -> Result<Vec<LabeledSample>> {
    if factor == 0 {
        return Err(Error::InvalidValue(
            "replication factor must be at least 1".into(),
        ));
    }
    Ok(samples
        .iter()
        .map(|s| {
            let mut out = s.clone();
            if out.label == target_class {
                out.weight *= factor;
            }
            out
        })
        .collect())
}

/// Lag-1 autocorrelation of one parameter along the front.
///
/// Members are ordered by the chosen objective, best (largest internal
/// value) first; the parameter sequence a₁…a_L is then reduced to the
/// Pearson correlation of the pairs (a_t, a_{t+1}). A sequence without
/// variance has no defined correlation and yields `None`.
pub fn parameter_autocorrelation(
    front: &Front,
    param_index: usize,
    ordering_objective: usize,
) -> Result<Option<f64>> {
    if front.len() < 3 {
        return Err(Error::NotEnoughMembers {
            needed: 3,
            found: front.len(),
        });
    }
    if ordering_objective >= front.objective_count() {
        return Err(Error::InvalidValue(format!(
            "ordering objective {ordering_objective} out of range (front has {})",
            front.objective_count()
        )));
    }
    let width = front.members()[0].parameters.len();
    if param_index >= width {
        return Err(Error::InvalidValue(format!(
            "parameter {param_index} out of range (solutions have {width})"
        )));
    }

    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&a, &b| {
        front.members()[b].objectives[ordering_objective]
            .total_cmp(&front.members()[a].objectives[ordering_objective])
    });
    let series: Vec<f64> = order
        .iter()
        .map(|&i| front.members()[i].parameters[param_index])
        .collect();

    let x: Vec<f64> = series[..series.len() - 1].to_vec();
    let y: Vec<f64> = series[1..].to_vec();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(&y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some(sxy / (sxx * syy).sqrt()))
}
