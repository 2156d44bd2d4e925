//! One-parameter biobjective benchmark with a known attainable region.

use crate::pareto::SearchSpace;

use super::{ObjectiveSpec, Problem};

/// f1(x) = 1 − x², f2(x) = 1 − (1−x)², x ∈ [0, 1], both maximized.
///
/// f1 strictly decreases and f2 strictly increases in x, so every x in the
/// interval is Pareto-optimal and no two distinct x are comparable.
#[derive(Debug)]
pub struct SyntheticBiobjective {
    space: SearchSpace,
    objectives: [ObjectiveSpec; 2],
}

impl SyntheticBiobjective {
    pub fn new() -> Self {
        let mut space = SearchSpace::from_bounds(&[(0.0, 1.0)]).unwrap();
        let dims: Vec<_> = space.dims().to_vec();
        let mut renamed = dims;
        renamed[0].name = "x".into();
        space = SearchSpace::new(renamed).unwrap();
        Self {
            space,
            objectives: [ObjectiveSpec::maximize("f1"), ObjectiveSpec::maximize("f2")],
        }
    }

    /// Hypervolume of the full attainable region against reference (0, 0).
    ///
    /// The region's upper boundary at first-objective level u is
    /// v(u) = 1 − (1 − √(1−u))²; substituting s = √(1−u) gives
    /// ∫₀¹ v du = ∫₀¹ (2s − s²)·2s ds = 4/3 − 1/2 = 5/6.
    pub fn analytic_hypervolume_optimum() -> f64 {
        5.0 / 6.0
    }
}

impl Default for SyntheticBiobjective {
    fn default() -> Self {
        Self::new()
    }
}

impl Problem for SyntheticBiobjective {
    fn name(&self) -> &str {
        "synthetic"
    }

    fn search_space(&self) -> &SearchSpace {
        &self.space
    }

    fn objectives(&self) -> &[ObjectiveSpec] {
        &self.objectives
    }

    fn evaluate_raw(&self, params: &[f64]) -> Vec<f64> {
        assert_eq!(params.len(), 1, "synthetic problem takes one parameter");
        let x = params[0];
        assert!((0.0..=1.0).contains(&x), "x out of bounds: {x}");
        vec![1.0 - x * x, 1.0 - (1.0 - x) * (1.0 - x)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::{dominates, ObjectiveVector};
    use proptest::prelude::*;

    #[test]
    fn endpoint_and_midpoint_values() {
        let p = SyntheticBiobjective::new();
        assert_eq!(p.evaluate_raw(&[0.0]), vec![1.0, 0.0]);
        assert_eq!(p.evaluate_raw(&[1.0]), vec![0.0, 1.0]);
        assert_eq!(p.evaluate_raw(&[0.5]), vec![0.75, 0.75]);
    }

    #[test]
    #[should_panic(expected = "out of bounds")]
    fn rejects_out_of_bounds() {
        SyntheticBiobjective::new().evaluate_raw(&[1.5]);
    }

    proptest! {
        #[test]
        fn distinct_points_are_incomparable(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            prop_assume!(a != b);
            let p = SyntheticBiobjective::new();
            let fa = ObjectiveVector::new(p.evaluate_raw(&[a])).unwrap();
            let fb = ObjectiveVector::new(p.evaluate_raw(&[b])).unwrap();
            prop_assert!(!dominates(&fa, &fb));
            prop_assert!(!dominates(&fb, &fa));
        }
    }
}
