//! Winner-take-all selection network: a toy rate model whose channels
//! compete through lateral inhibition. Selection is expressed by *lowering*
//! the selected channel's output below a base level while the other outputs
//! rise above it.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::pareto::SearchSpace;
use crate::{Error, Result};

use super::{ObjectiveSpec, Problem};

/// Integration step for the discrete-time leaky updates.
const STEP: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct WtaSpec {
    pub channels: usize,
    pub input_count: usize,
    pub settle_iters: usize,
    /// Early-exit threshold on the max per-channel change per iteration.
    pub settle_tol: f64,
    /// Default threshold for [`WtaProblem::dual_selection_rate`].
    pub dual_tol: f64,
}

impl Default for WtaSpec {
    fn default() -> Self {
        Self {
            channels: 3,
            input_count: 500,
            settle_iters: 100,
            settle_tol: 1e-6,
            dual_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plausibility {
    pub base_level: f64,
    pub mean_selected: f64,
    pub mean_unselected: f64,
    pub plausible: bool,
}

/// Weights: `[w_self, w_inh, w_in, w_off]`, each in [0.05, 1].
///
/// Drives a_j follow a_j ← clamp01(a_j + λ(w_in·s_j + w_self·a_j −
/// w_inh·Σ_{l≠j} a_l − a_j)); the readout is y_j = clamp01(w_off +
/// mean_{l≠j} a_l − a_j). Under zero input every drive stays 0, so every
/// output equals w_off — that value is the network's base level.
#[derive(Debug)]
pub struct WtaProblem {
    spec: WtaSpec,
    eval_seed: u64,
    redraw_per_individual: bool,
    inputs: Vec<Vec<f64>>,
    space: SearchSpace,
    objectives: [ObjectiveSpec; 2],
    unsettled: AtomicU64,
}

impl WtaProblem {
    pub fn new(spec: WtaSpec, eval_seed: u64, redraw_per_individual: bool) -> Result<Self> {
        if spec.channels < 2 {
            return Err(Error::InvalidConfig(format!(
                "wta needs at least 2 channels, got {}",
                spec.channels
            )));
        }
        if spec.input_count == 0 || spec.settle_iters == 0 {
            return Err(Error::InvalidConfig(
                "wta needs input_count ≥ 1 and settle_iters ≥ 1".into(),
            ));
        }
        let inputs = draw_inputs(eval_seed, spec.input_count, spec.channels);
        Ok(Self {
            space: weight_space(),
            objectives: [ObjectiveSpec::minimize("f1"), ObjectiveSpec::minimize("f2")],
            spec,
            eval_seed,
            redraw_per_individual,
            inputs,
            unsettled: AtomicU64::new(0),
        })
    }

    pub fn spec(&self) -> &WtaSpec {
        &self.spec
    }

    /// The study-fixed input set (drawn once from the evaluation seed).
    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    /// Evaluations that hit the iteration cap without settling.
    pub fn unsettled_evaluations(&self) -> u64 {
        self.unsettled.load(Ordering::Relaxed)
    }

    /// Settled outputs for one input vector (does not touch counters).
    pub fn outputs(&self, params: &[f64], input: &[f64]) -> Vec<f64> {
        self.settle(params, input).0
    }

    fn settle(&self, params: &[f64], input: &[f64]) -> (Vec<f64>, bool) {
        let k = self.spec.channels;
        assert_eq!(input.len(), k, "input length must match channel count");
        let (w_self, w_inh, w_in, w_off) = (params[0], params[1], params[2], params[3]);
        let mut a = vec![0.0f64; k];
        let mut next = vec![0.0f64; k];
        let mut settled = false;
        for _ in 0..self.spec.settle_iters {
            let total: f64 = a.iter().sum();
            let mut max_delta = 0.0f64;
            for j in 0..k {
                let lateral = total - a[j];
                let drive = w_in * input[j] + w_self * a[j] - w_inh * lateral - a[j];
                let v = (a[j] + STEP * drive).clamp(0.0, 1.0);
                max_delta = max_delta.max((v - a[j]).abs());
                next[j] = v;
            }
            a.copy_from_slice(&next);
            if max_delta < self.spec.settle_tol {
                settled = true;
                break;
            }
        }
        let total: f64 = a.iter().sum();
        let y = (0..k)
            .map(|j| (w_off + (total - a[j]) / (k as f64 - 1.0) - a[j]).clamp(0.0, 1.0))
            .collect();
        (y, settled)
    }

    fn check_params(&self, params: &[f64]) {
        assert_eq!(params.len(), 4, "wta takes 4 weights");
        assert!(
            self.space
                .dims()
                .iter()
                .zip(params)
                .all(|(d, &v)| v >= d.lower && v <= d.upper),
            "weights out of bounds: {params:?}"
        );
    }

    /// Base level, selected/unselected output means over the study-fixed
    /// input set, and the plausibility verdict (selected strictly below
    /// base, unselected strictly above).
    pub fn plausibility(&self, params: &[f64]) -> Plausibility {
        self.check_params(params);
        let zero = vec![0.0; self.spec.channels];
        let base_level = self.settle(params, &zero).0[0];
        let mut sel_sum = 0.0;
        let mut unsel_sum = 0.0;
        for s in &self.inputs {
            let (y, _) = self.settle(params, s);
            let sc = selected_channel(s);
            sel_sum += y[sc];
            unsel_sum += unselected_mean(&y, sc);
        }
        let n = self.inputs.len() as f64;
        let mean_selected = sel_sum / n;
        let mean_unselected = unsel_sum / n;
        Plausibility {
            base_level,
            mean_selected,
            mean_unselected,
            plausible: mean_selected < base_level && mean_unselected > base_level,
        }
    }

    /// Fraction of the study-fixed inputs for which the two lowest outputs
    /// differ by less than `tol` (two channels selected at once).
    pub fn dual_selection_rate(&self, params: &[f64], tol: f64) -> f64 {
        self.check_params(params);
        dual_selection_rate_of(&self.inputs, |s| self.settle(params, s).0, tol)
    }
}

fn weight_space() -> SearchSpace {
    SearchSpace::new(
        ["w_self", "w_inh", "w_in", "w_off"]
            .iter()
            .map(|name| crate::pareto::Dimension {
                name: (*name).into(),
                unit: None,
                lower: 0.05,
                upper: 1.0,
            })
            .collect(),
    )
    .unwrap()
}

impl Problem for WtaProblem {
    fn name(&self) -> &str {
        "wta"
    }

    fn search_space(&self) -> &SearchSpace {
        &self.space
    }

    fn objectives(&self) -> &[ObjectiveSpec] {
        &self.objectives
    }

    fn evaluate_raw(&self, params: &[f64]) -> Vec<f64> {
        self.check_params(params);
        let redrawn;
        let inputs: &[Vec<f64>] = if self.redraw_per_individual {
            // Input-set seed derived from the parameters keeps evaluation a
            // pure function of (parameters, evaluation seed).
            redrawn = draw_inputs(
                self.eval_seed ^ param_hash(params),
                self.spec.input_count,
                self.spec.channels,
            );
            &redrawn
        } else {
            &self.inputs
        };
        let mut unsettled = 0u64;
        let (f1, f2) = wta_scores(inputs, |s| {
            let (y, ok) = self.settle(params, s);
            if !ok {
                unsettled += 1;
            }
            y
        });
        if unsettled > 0 {
            self.unsettled.fetch_add(unsettled, Ordering::Relaxed);
        }
        vec![f1, f2]
    }
}

fn draw_inputs(seed: u64, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..k).map(|_| rng.random_range(0.0..=1.0)).collect())
        .collect()
}

fn param_hash(params: &[f64]) -> u64 {
    // FNV-1a over the parameter bit patterns; stable across platforms.
    let mut h = 0xcbf29ce484222325u64;
    for p in params {
        for b in p.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Channel with the largest input; ties go to the lowest index.
pub fn selected_channel(input: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in input.iter().enumerate() {
        if *v > input[best] {
            best = j;
        }
    }
    best
}

fn unselected_mean(outputs: &[f64], selected: usize) -> f64 {
    let k = outputs.len();
    let total: f64 = outputs.iter().sum();
    (total - outputs[selected]) / (k as f64 - 1.0)
}

/// Selection scores over an input set for an arbitrary output model:
/// f1 = mean selected-channel output, f2 = 1 − mean non-selected output.
/// Both are minimized: an ideal selector drives the selected channel to 0
/// and the others to 1.
pub fn wta_scores<F>(inputs: &[Vec<f64>], mut outputs_for: F) -> (f64, f64)
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    assert!(!inputs.is_empty(), "need at least one input vector");
    let mut sel_sum = 0.0;
    let mut unsel_sum = 0.0;
    for s in inputs {
        assert!(s.len() >= 2, "need at least 2 channels");
        let y = outputs_for(s);
        assert_eq!(y.len(), s.len(), "output length must match input length");
        let sc = selected_channel(s);
        sel_sum += y[sc];
        unsel_sum += unselected_mean(&y, sc);
    }
    let n = inputs.len() as f64;
    (sel_sum / n, 1.0 - unsel_sum / n)
}

/// Fraction of inputs whose two lowest outputs differ by less than `tol`.
pub fn dual_selection_rate_of<F>(inputs: &[Vec<f64>], mut outputs_for: F, tol: f64) -> f64
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    assert!(!inputs.is_empty(), "need at least one input vector");
    let mut hits = 0usize;
    for s in inputs {
        let mut y = outputs_for(s);
        y.sort_by(|a, b| a.total_cmp(b));
        if y[1] - y[0] < tol {
            hits += 1;
        }
    }
    hits as f64 / inputs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem() -> WtaProblem {
        WtaProblem::new(
            WtaSpec {
                input_count: 40,
                ..WtaSpec::default()
            },
            7,
            false,
        )
        .unwrap()
    }

    #[test]
    fn score_endpoints_are_exact() {
        let inputs = draw_inputs(1, 10, 3);
        let k = 3;
        assert_eq!(wta_scores(&inputs, |_| vec![1.0; k]), (1.0, 0.0));
        assert_eq!(wta_scores(&inputs, |_| vec![0.0; k]), (0.0, 1.0));
        // Perfect selector: selected channel 0, everything else 1.
        let perfect = |s: &[f64]| {
            let sc = selected_channel(s);
            (0..s.len()).map(|j| if j == sc { 0.0 } else { 1.0 }).collect()
        };
        assert_eq!(wta_scores(&inputs, perfect), (0.0, 0.0));
    }

    #[test]
    fn selection_ties_go_to_lowest_index() {
        assert_eq!(selected_channel(&[0.5, 0.5, 0.1]), 0);
        assert_eq!(selected_channel(&[0.1, 0.5, 0.5]), 1);
    }

    #[test]
    fn zero_input_outputs_equal_w_off_exactly() {
        let p = problem();
        let w = [0.3, 0.7, 0.9, 0.42];
        let y = p.outputs(&w, &[0.0, 0.0, 0.0]);
        assert_eq!(y, vec![0.42, 0.42, 0.42]);
    }

    #[test]
    fn all_zero_inputs_are_never_plausible() {
        let spec = WtaSpec {
            input_count: 5,
            ..WtaSpec::default()
        };
        let mut p = WtaProblem::new(spec, 3, false).unwrap();
        p.inputs = vec![vec![0.0; 3]; 5];
        let pl = p.plausibility(&[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(pl.mean_selected, pl.base_level);
        assert_eq!(pl.mean_unselected, pl.base_level);
        assert!(!pl.plausible);
    }

    #[test]
    fn dual_selection_rate_pins() {
        let inputs = vec![vec![0.9, 0.1, 0.2]; 4];
        assert_eq!(dual_selection_rate_of(&inputs, |_| vec![0.5; 3], 0.01), 1.0);
        let perfect = |s: &[f64]| {
            let sc = selected_channel(s);
            (0..s.len()).map(|j| if j == sc { 0.0 } else { 1.0 }).collect()
        };
        assert_eq!(dual_selection_rate_of(&inputs, perfect, 0.01), 0.0);
        assert_eq!(
            dual_selection_rate_of(&inputs, |_| vec![0.10, 0.105, 0.9], 0.01),
            1.0
        );
    }

    #[test]
    fn same_seed_same_inputs_and_values() {
        let a = problem();
        let b = problem();
        assert_eq!(a.inputs(), b.inputs());
        let w = [0.2, 0.8, 0.9, 0.3];
        assert_eq!(a.evaluate_raw(&w), b.evaluate_raw(&w));

        let c = WtaProblem::new(a.spec.clone(), 8, false).unwrap();
        assert_ne!(a.inputs(), c.inputs());
    }

    #[test]
    fn redraw_mode_is_pure_per_parameter_vector() {
        let p = WtaProblem::new(
            WtaSpec {
                input_count: 20,
                ..WtaSpec::default()
            },
            7,
            true,
        )
        .unwrap();
        let w1 = [0.2, 0.8, 0.9, 0.3];
        let w2 = [0.2, 0.8, 0.9, 0.31];
        assert_eq!(p.evaluate_raw(&w1), p.evaluate_raw(&w1));
        assert_ne!(p.evaluate_raw(&w1), p.evaluate_raw(&w2));
    }

    #[test]
    fn iteration_cap_counts_unsettled_evaluations() {
        let p = WtaProblem::new(
            WtaSpec {
                input_count: 4,
                settle_iters: 1,
                ..WtaSpec::default()
            },
            7,
            false,
        )
        .unwrap();
        // One iteration with nonzero drive cannot reach the 1e-6 tolerance.
        p.evaluate_raw(&[0.5, 0.5, 1.0,  0.5]);
        assert_eq!(p.unsettled_evaluations(), 4);
    }

    #[test]
    fn channel_count_below_two_is_rejected() {
        let err = WtaProblem::new(
            WtaSpec {
                channels: 1,
                ..WtaSpec::default()
            },
            0,
            false,
        );
        assert!(err.is_err());
    }

    proptest! {
        #[test]
        fn outputs_stay_clamped(
            w in prop::collection::vec(0.05f64..=1.0, 4),
            input in prop::collection::vec(0.0f64..=1.0, 3)
        ) {
            let p = problem();
            let y = p.outputs(&w, &input);
            prop_assert!(y.iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn scores_stay_in_unit_square(w in prop::collection::vec(0.05f64..=1.0, 4)) {
            let p = problem();
            let f = p.evaluate_raw(&w);
            prop_assert!((0.0..=1.0).contains(&f[0]));
            prop_assert!((0.0..=1.0).contains(&f[1]));
        }
    }
}
