//! Objective-space types and Pareto dominance.
//!
//! Everything downstream (ranking, attainment surfaces, hypervolumes) builds
//! on the two relations defined here. All objectives are maximized at this
//! layer; orientation handling lives in [`crate::problems`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in objective space. Components are finite, length ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidValue(format!(
                "objective vector needs at least 2 components, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!(
                "objective component {i} is not finite"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)] // length is always ≥ 2
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ObjectiveVector> for Vec<f64> {
    fn from(v: ObjectiveVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for ObjectiveVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A point in parameter (decision) space. Components are finite, length ≥ 1.
/// Bounds are the concern of [`SearchSpace`], not of the vector itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidValue(
                "parameter vector needs at least 1 component".into(),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(format!(
                "parameter component {i} is not finite"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)] // length is always ≥ 1
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for ParameterVector {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ParameterVector> for Vec<f64> {
    fn from(v: ParameterVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for ParameterVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// One dimension of a search space: finite bounds with `lower < upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub lower: f64,
    pub upper: f64,
}

/// Box-bounded continuous search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Dimension>", into = "Vec<Dimension>")]
pub struct SearchSpace {
    dims: Vec<Dimension>,
}

impl SearchSpace {
    pub fn new(dims: Vec<Dimension>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyInput("search space has no dimensions"));
        }
        for d in &dims {
            if !d.lower.is_finite() || !d.upper.is_finite() || d.lower >= d.upper {
                return Err(Error::InvalidConfig(format!(
                    "dimension '{}' needs finite bounds with lower < upper, got [{}, {}]",
                    d.name, d.lower, d.upper
                )));
            }
        }
        Ok(Self { dims })
    }

    /// Anonymous dimensions named `x0`, `x1`, …
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            bounds
                .iter()
                .enumerate()
                .map(|(i, &(lower, upper))| Dimension {
                    name: format!("x{i}"),
                    unit: None,
                    lower,
                    upper,
                })
                .collect(),
        )
    }

    pub fn dims(&self) -> &[Dimension] {
        &self.dims
    }

    #[allow(clippy::len_without_is_empty)] // length is always ≥ 1
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn contains(&self, p: &ParameterVector) -> bool {
        p.len() == self.len()
            && p.values()
                .iter()
                .zip(&self.dims)
                .all(|(v, d)| *v >= d.lower && *v <= d.upper)
    }

    /// True when every dimension of `self` lies within the matching
    /// dimension of `outer`.
    pub fn within(&self, outer: &SearchSpace) -> bool {
        self.len() == outer.len()
            && self
                .dims
                .iter()
                .zip(&outer.dims)
                .all(|(d, o)| d.lower >= o.lower && d.upper <= o.upper)
    }

    pub fn clip(&self, values: &mut [f64]) {
        assert_eq!(values.len(), self.len(), "value count must match dimensions");
        for (v, d) in values.iter_mut().zip(&self.dims) {
            *v = v.clamp(d.lower, d.upper);
        }
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ParameterVector {
        ParameterVector::new(
            self.dims
                .iter()
                .map(|d| rng.random_range(d.lower..=d.upper))
                .collect(),
        )
        .expect("bounds are finite")
    }
}

impl TryFrom<Vec<Dimension>> for SearchSpace {
    type Error = Error;
    fn try_from(dims: Vec<Dimension>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<SearchSpace> for Vec<Dimension> {
    fn from(s: SearchSpace) -> Self {
        s.dims
    }
}

/// Where a solution came from: run id, generation index, evaluation counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub run: u64,
    pub generation: u64,
    pub evaluation: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub parameters: ParameterVector,
    pub objectives: ObjectiveVector,
    pub provenance: Provenance,
}

/// `a` dominates `b`: at least as good in every objective, strictly better
/// in at least one.
///
/// Panics when the vectors have different lengths — that is a usage error,
/// not a data condition.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(
        a.len(),
        b.len(),
        "dominance needs objective vectors of equal length"
    );
    let mut strict = false;
    for (x, y) in a.values().iter().zip(b.values()) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

/// `a` weakly dominates `b`: at least as good in every objective.
pub fn weakly_dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(
        a.len(),
        b.len(),
        "dominance needs objective vectors of equal length"
    );
    a.values().iter().zip(b.values()).all(|(x, y)| x >= y)
}

/// A set of mutually non-dominated solutions. Duplicate objective vectors
/// are legal members; invariants are checked at construction (including on
/// deserialization).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrontRepr", into = "FrontRepr")]
pub struct Front {
    objective_count: usize,
    members: Vec<Solution>,
}

#[derive(Serialize, Deserialize)]
struct FrontRepr {
    objective_count: usize,
    members: Vec<Solution>,
}

impl Front {
    /// Strict constructor: every member must carry `objective_count`
    /// objectives and no member may dominate another.
    pub fn new(objective_count: usize, members: Vec<Solution>) -> Result<Self> {
        if objective_count < 2 {
            return Err(Error::InvalidValue(format!(
                "a front needs at least 2 objectives, got {objective_count}"
            )));
        }
        for m in &members {
            if m.objectives.len() != objective_count {
                return Err(Error::ObjectiveCountMismatch {
                    expected: objective_count,
                    found: m.objectives.len(),
                });
            }
        }
        for i in 0..members.len() {
            for j in 0..members.len() {
                if i != j && dominates(&members[i].objectives, &members[j].objectives) {
                    return Err(Error::InvalidValue(format!(
                        "front members are not mutually non-dominated (member {i} dominates member {j})"
                    )));
                }
            }
        }
        Ok(Self {
            objective_count,
            members,
        })
    }

    pub fn objective_count(&self) -> usize {
        self.objective_count
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }

    /// The front attains `z` when some member weakly dominates it.
    pub fn attains(&self, z: &ObjectiveVector) -> bool {
        assert_eq!(
            z.len(),
            self.objective_count,
            "attainment needs a point with the front's objective count"
        );
        self.members
            .iter()
            .any(|m| weakly_dominates(&m.objectives, z))
    }
}

impl TryFrom<FrontRepr> for Front {
    type Error = Error;
    fn try_from(r: FrontRepr) -> Result<Self> {
        Front::new(r.objective_count, r.members)
    }
}

impl From<Front> for FrontRepr {
    fn from(f: Front) -> Self {
        FrontRepr {
            objective_count: f.objective_count,
            members: f.members,
        }
    }
}

/// Keep exactly the candidates no other candidate strictly dominates.
/// Duplicates survive (neither strictly dominates the other).
pub fn nondominated_filter(objective_count: usize, candidates: Vec<Solution>) -> Result<Front> {
    for m in &candidates {
        if m.objectives.len() != objective_count {
            return Err(Error::ObjectiveCountMismatch {
                expected: objective_count,
                found: m.objectives.len(),
            });
        }
    }
    let keep: Vec<Solution> = candidates
        .iter()
        .enumerate()
        .filter(|(i, s)| {
            !candidates
                .iter()
                .enumerate()
                .any(|(j, t)| *i != j && dominates(&t.objectives, &s.objectives))
        })
        .map(|(_, s)| s.clone())
        .collect();
    Front::new(objective_count, keep)
}
