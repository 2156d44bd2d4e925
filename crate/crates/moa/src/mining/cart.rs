//! Classification tree (CART-style): greedy binary splits minimizing
//! weighted Gini impurity, with midpoint thresholds and a deterministic
//! "ties route left" rule.

use serde::{Deserialize, Serialize};

use super::LabeledSample;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartConfig {
    pub max_depth: usize,
    /// Minimum weighted sample count per leaf (weights are replication
    /// counts, so this counts replicated samples).
    pub min_samples_leaf: u64,
    /// A split is accepted only when it lowers the node's weighted Gini
    /// impurity by at least this much.
    pub min_impurity_decrease: f64,
}

impl Default for CartConfig {
    fn default() -> Self {
        Self {
            max_depth: 5,
            min_samples_leaf: 5,
            min_impurity_decrease: 1e-4,
        }
    }
}

impl CartConfig {
    fn validate(&self) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(Error::InvalidConfig(
                "min_samples_leaf must be at least 1".into(),
            ));
        }
        if self.min_impurity_decrease.is_nan() || self.min_impurity_decrease < 0.0 {
            return Err(Error::InvalidConfig(
                "min_impurity_decrease must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        /// Values ≤ threshold, including exact ties.
        left: Box<TreeNode>,
        /// Values > threshold.
        right: Box<TreeNode>,
    },
    Leaf {
        label: String,
        /// Weighted class counts of the training samples reaching this
        /// leaf, sorted by label.
        counts: Vec<(String, u64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    root: TreeNode,
    feature_count: usize,
    depth: usize,
    /// Weighted fraction of the training set the finished tree classifies
    /// correctly. This is an in-sample figure, not a generalization
    /// estimate.
    training_accuracy: f64,
}

impl DecisionTree {
    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn training_accuracy(&self) -> f64 {
        self.training_accuracy
    }

    /// Graphviz rendering: one node per line, edges labeled "<= t" / "> t".
    pub fn to_dot(&self, feature_names: &[String]) -> Result<String> {
        self.check_names(feature_names)?;
        let mut lines = vec!["digraph decision_tree {".to_string()];
        let mut next_id = 0usize;
        fn emit(
            node: &TreeNode,
            names: &[String],
            next_id: &mut usize,
            lines: &mut Vec<String>,
        ) -> usize {
            let id = *next_id;
            *next_id += 1;
            match node {
                TreeNode::Leaf { label, counts } => {
                    let total: u64 = counts.iter().map(|(_, w)| w).sum();
                    let hit = counts
                        .iter()
                        .find(|(l, _)| l == label)
                        .map(|(_, w)| *w)
                        .unwrap_or(0);
                    lines.push(format!("  n{id} [label=\"{label} ({hit}/{total})\"];"));
                }
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    lines.push(format!(
                        "  n{id} [label=\"{} <= {threshold}\"];",
                        names[*feature]
                    ));
                    let l = emit(left, names, next_id, lines);
                    lines.push(format!("  n{id} -> n{l} [label=\"<= {threshold}\"];"));
                    let r = emit(right, names, next_id, lines);
                    lines.push(format!("  n{id} -> n{r} [label=\"> {threshold}\"];"));
                }
            }
            id
        }
        emit(&self.root, feature_names, &mut next_id, &mut lines);
        lines.push("}".to_string());
        Ok(lines.join("\n"))
    }

    /// One conjunction rule per leaf, leaves visited left to right.
    /// Bounds on the same feature are merged to the tightest pair and
    /// listed in root-first order of first appearance, e.g.
    /// "0.48 <= p_DI and a_TW <= 8.5 -> P (497/998 weighted)". Thresholds
    /// fall strictly between observed feature values, so printing the
    /// lower bound inclusively does not change how any sample routes.
    pub fn rules(&self, feature_names: &[String]) -> Result<Vec<String>> {
        self.check_names(feature_names)?;
        let mut rules = Vec::new();
        // (feature, lower, upper) in order of first appearance
        let path: Vec<(usize, Option<f64>, Option<f64>)> = Vec::new();
        fn walk(
            node: &TreeNode,
            names: &[String],
            path: &[(usize, Option<f64>, Option<f64>)],
            rules: &mut Vec<String>,
        ) {
            match node {
                TreeNode::Leaf { label, counts } => {
                    let total: u64 = counts.iter().map(|(_, w)| w).sum();
                    let hit = counts
                        .iter()
                        .find(|(l, _)| l == label)
                        .map(|(_, w)| *w)
                        .unwrap_or(0);
                    let conds: Vec<String> = path
                        .iter()
                        .map(|&(f, lo, hi)| match (lo, hi) {
                            (Some(a), None) => format!("{a} <= {}", names[f]),
                            (None, Some(b)) => format!("{} <= {b}", names[f]),
                            (Some(a), Some(b)) => format!("{a} <= {} <= {b}", names[f]),
                            (None, None) => unreachable!("constraint without bounds"),
                        })
                        .collect();
                    let cond = if conds.is_empty() {
                        "always".to_string()
                    } else {
                        conds.join(" and ")
                    };
                    rules.push(format!("{cond} -> {label} ({hit}/{total} weighted)"));
                }
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    for (side, is_left) in [(left, true), (right, false)] {
                        let mut tightened = path.to_vec();
                        match tightened.iter_mut().find(|(f, _, _)| f == feature) {
                            Some((_, lo, hi)) => {
                                if is_left {
                                    *hi = Some(hi.map_or(*threshold, |h: f64| h.min(*threshold)));
                                } else {
                                    *lo = Some(lo.map_or(*threshold, |l: f64| l.max(*threshold)));
                                }
                            }
                            None => tightened.push(if is_left {
                                (*feature, None, Some(*threshold))
                            } else {
                                (*feature, Some(*threshold), None)
                            }),
                        }
                        walk(side, names, &tightened, rules);
                    }
                }
            }
        }
        walk(&self.root, feature_names, &path, &mut rules);
        Ok(rules)
    }

    fn check_names(&self, names: &[String]) -> Result<()> {
        if names.len() != self.feature_count {
            return Err(Error::InvalidValue(format!(
                "expected {} feature names, got {}",
                self.feature_count,
                names.len()
            )));
        }
        Ok(())
    }
}

fn gini(counts: &[u64], total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

/// Greedy top-down training. Candidate thresholds sit midway between
/// consecutive distinct values of a feature; the best (feature, threshold)
/// pair by impurity decrease wins, earliest feature then lowest threshold
/// on ties. Single-class input yields a single leaf with accuracy 1.
pub fn cart_train(samples: &[LabeledSample], config: &CartConfig) -> Result<DecisionTree> {
    config.validate()?;
    let Some(first) = samples.first() else {
        return Err(Error::EmptyInput("tree training needs samples"));
    };
    let width = first.features.len();
    for s in samples {
        if s.features.len() != width {
            return Err(Error::InvalidValue(format!(
                "inconsistent feature widths: {} vs {width}",
                s.features.len()
            )));
        }
        if s.weight == 0 {
            return Err(Error::InvalidValue("sample weights must be positive".into()));
        }
    }

    let mut classes: Vec<String> = samples.iter().map(|s| s.label.clone()).collect();
    classes.sort();
    classes.dedup();
    let class_id = |label: &str| classes.iter().position(|c| c == label).unwrap();
    let labels: Vec<usize> = samples.iter().map(|s| class_id(&s.label)).collect();

    struct Ctx<'a> {
        samples: &'a [LabeledSample],
        labels: &'a [usize],
        classes: &'a [String],
        width: usize,
        config: &'a CartConfig,
    }

    fn build(ctx: &Ctx, indices: &[usize], depth: usize) -> TreeNode {
        let mut counts = vec![0u64; ctx.classes.len()];
        let mut total = 0u64;
        for &i in indices {
            counts[ctx.labels[i]] += ctx.samples[i].weight;
            total += ctx.samples[i].weight;
        }
        let leaf = |counts: &[u64]| {
            let best = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(i, _)| i)
                .unwrap();
            TreeNode::Leaf {
                label: ctx.classes[best].clone(),
                counts: ctx
                    .classes
                    .iter()
                    .zip(counts)
                    .filter(|(_, &w)| w > 0)
                    .map(|(c, &w)| (c.clone(), w))
                    .collect(),
            }
        };
        let parent_gini = gini(&counts, total);
        if depth >= ctx.config.max_depth || counts.iter().filter(|&&c| c > 0).count() < 2 {
            return leaf(&counts);
        }

        let mut best: Option<(f64, usize, f64)> = None; // (decrease, feature, threshold)
        for f in 0..ctx.width {
            let mut order: Vec<usize> = indices.to_vec();
            order.sort_by(|&a, &b| {
                ctx.samples[a].features[f].total_cmp(&ctx.samples[b].features[f])
            });
            let mut left_counts = vec![0u64; ctx.classes.len()];
            let mut left_total = 0u64;
            for w in 0..order.len() - 1 {
                let i = order[w];
                left_counts[ctx.labels[i]] += ctx.samples[i].weight;
                left_total += ctx.samples[i].weight;
                let here = ctx.samples[i].features[f];
                let next = ctx.samples[order[w + 1]].features[f];
                if here == next {
                    continue;
                }
                let right_total = total - left_total;
                if left_total < ctx.config.min_samples_leaf
                    || right_total < ctx.config.min_samples_leaf
                {
                    continue;
                }
                let right_counts: Vec<u64> = counts
                    .iter()
                    .zip(&left_counts)
                    .map(|(&c, &l)| c - l)
                    .collect();
                let weighted = (left_total as f64 * gini(&left_counts, left_total)
                    + right_total as f64 * gini(&right_counts, right_total))
                    / total as f64;
                let decrease = parent_gini - weighted;
                if best.is_none_or(|(d, _, _)| decrease > d) {
                    best = Some((decrease, f, 0.5 * (here + next)));
                }
            }
        }

        match best {
            Some((decrease, feature, threshold))
                if decrease >= ctx.config.min_impurity_decrease =>
            {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .iter()
                    .partition(|&&i| ctx.samples[i].features[feature] <= threshold);
                TreeNode::Split {
                    feature,
                    threshold,
                    left: Box::new(build(ctx, &left_idx, depth + 1)),
                    right: Box::new(build(ctx, &right_idx, depth + 1)),
                }
            }
            _ => leaf(&counts),
        }
    }

    let ctx = Ctx {
        samples,
        labels: &labels,
        classes: &classes,
        width,
        config,
    };
    let root = build(&ctx, &(0..samples.len()).collect::<Vec<_>>(), 0);

    fn node_depth(node: &TreeNode) -> usize {
        match node {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + node_depth(left).max(node_depth(right)),
        }
    }
    let depth = node_depth(&root);

    let mut tree = DecisionTree {
        root,
        feature_count: width,
        depth,
        training_accuracy: 0.0,
    };
    let mut hit = 0u64;
    let mut total = 0u64;
    for s in samples {
        total += s.weight;
        if cart_classify(&tree, s.features.values())? == s.label {
            hit += s.weight;
        }
    }
    tree.training_accuracy = hit as f64 / total as f64;
    Ok(tree)
}

/// Label of the leaf reached by threshold descent; a value equal to a
/// node's threshold takes the "≤" branch.
pub fn cart_classify(tree: &DecisionTree, features: &[f64]) -> Result<String> {
    if features.len() != tree.feature_count {
        return Err(Error::InvalidValue(format!(
            "expected {} features, got {}",
            tree.feature_count,
            features.len()
        )));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(
            "classification needs finite features".into(),
        ));
    }
    let mut node = &tree.root;
    loop {
        match node {
            TreeNode::Leaf { label, .. } => return Ok(label.clone()),
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                node = if features[*feature] <= *threshold {
                    left
                } else {
                    right
                };
            }
        }
    }
}
