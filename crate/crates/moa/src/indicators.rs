//! Quality indicators over fronts and run sets: empirical attainment, the
//! Ψ0/Ψ1 attainment surfaces, hypervolume, and nadir/ideal reference points.
//!
//! Everything here assumes the internal maximization convention. Reference
//! points are plain objective vectors; their validity (being weakly
//! dominated by the points they anchor) is checked at call time because it
//! depends on the point set, not the point alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::pareto::{nondominated_filter, Front, ObjectiveVector, Solution};
use crate::{Error, Result};

/// A set of independent optimization runs over the same problem, each
/// reduced to its final front. All fronts share one objective count.
#[derive(Debug, Clone)]
pub struct RunSet {
    fronts: Vec<Front>,
    objective_count: usize,
}

impl RunSet {
    pub fn new(fronts: Vec<Front>) -> Result<Self> {
        let Some(first) = fronts.first() else {
            return Err(Error::NotEnoughRuns { needed: 1, found: 0 });
        };
        let objective_count = first.objective_count();
        for f in &fronts {
            if f.objective_count() != objective_count {
                return Err(Error::ObjectiveCountMismatch {
                    expected: objective_count,
                    found: f.objective_count(),
                });
            }
        }
        Ok(Self {
            fronts,
            objective_count,
        })
    }

    pub fn fronts(&self) -> &[Front] {
        &self.fronts
    }

    pub fn objective_count(&self) -> usize {
        self.objective_count
    }

    /// Number of runs r.
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }
}

/// Fraction of runs containing at least one member that weakly dominates
/// `z`. Takes values in {0, 1/r, 2/r, …, 1}.
pub fn empirical_attainment(z: &ObjectiveVector, runs: &RunSet) -> f64 {
    assert_eq!(
        z.len(),
        runs.objective_count(),
        "attainment query must match the run set's objective count"
    );
    let hits = runs.fronts().iter().filter(|f| f.attains(z)).count();
    hits as f64 / runs.len() as f64
}

/// Grand front: the non-dominated filter of the union of all runs' members.
/// Every member is attained by at least its own run, so its empirical
/// attainment is ≥ 1/r.
pub fn psi0(runs: &RunSet) -> Result<Front> {
    let union: Vec<Solution> = runs
        .fronts()
        .iter()
        .flat_map(|f| f.members().iter().cloned())
        .collect();
    nondominated_filter(runs.objective_count(), union)
}

/// Shared-attainment front (two objectives, exact): the corner set of the
/// boundary of {z : every run attains z}.
///
/// The attained region of run i at first-objective level ≥ t reaches up to
/// h_i(t) = max{x₂ : x ∈ χ_i, x₁ ≥ t}; the shared region reaches
/// g(t) = min_i h_i(t). Corners sit at candidate levels (member first
/// coordinates) where g strictly drops. Returned corners are virtual points
/// (no parameters or provenance), sorted by ascending first objective, and
/// mutually non-dominated.
///
/// Beyond two objectives there is no exact algorithm here; use
/// [`attainment_grid`] over a bounding box instead.
pub fn psi1(runs: &RunSet) -> Result<Vec<ObjectiveVector>> {
    if runs.objective_count() != 2 {
        return Err(Error::UnsupportedObjectiveCount {
            op: "exact shared-attainment front",
            n: runs.objective_count(),
            max: 2,
            hint: "use attainment_grid over a bounding box",
        });
    }
    let mut ts: Vec<f64> = runs
        .fronts()
        .iter()
        .flat_map(|f| f.members().iter().map(|m| m.objectives[0]))
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let g = |t: f64| -> f64 {
        runs.fronts()
            .iter()
            .map(|f| {
                f.members()
                    .iter()
                    .filter(|m| m.objectives[0] >= t)
                    .map(|m| m.objectives[1])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    };

    let gs: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let mut corners = Vec::new();
    for j in 0..ts.len() {
        if !gs[j].is_finite() {
            continue;
        }
        let next = if j + 1 < ts.len() {
            gs[j + 1]
        } else {
            f64::NEG_INFINITY
        };
        if next < gs[j] {
            corners.push(ObjectiveVector::new(vec![ts[j], gs[j]])?);
        }
    }
    Ok(corners)
}

/// Grid-estimated attainment over a user-supplied bounding box, for any
/// objective count: evaluates [`empirical_attainment`] at every cell center
/// of a `per_axis`-resolution lattice on [lower, upper].
pub fn attainment_grid(
    runs: &RunSet,
    lower: &ObjectiveVector,
    upper: &ObjectiveVector,
    per_axis: usize,
) -> Result<Vec<(ObjectiveVector, f64)>> {
    let n = runs.objective_count();
    if lower.len() != n || upper.len() != n {
        return Err(Error::ObjectiveCountMismatch {
            expected: n,
            found: if lower.len() != n { lower.len() } else { upper.len() },
        });
    }
    if per_axis == 0 {
        return Err(Error::InvalidValue("grid resolution must be positive".into()));
    }
    for k in 0..n {
        if lower[k] >= upper[k] {
            return Err(Error::InvalidValue(format!(
                "bounding box is empty on objective {k}: {} >= {}",
                lower[k], upper[k]
            )));
        }
    }
    let cells = (per_axis as u128).pow(n as u32);
    if cells > 5_000_000 {
        return Err(Error::InvalidValue(format!(
            "grid of {cells} cells is too large; lower the resolution"
        )));
    }

    let mut out = Vec::with_capacity(cells as usize);
    let mut idx = vec![0usize; n];
    loop {
        let center: Vec<f64> = (0..n)
            .map(|k| lower[k] + (idx[k] as f64 + 0.5) * (upper[k] - lower[k]) / per_axis as f64)
            .collect();
        let z = ObjectiveVector::new(center)?;
        let a = empirical_attainment(&z, runs);
        out.push((z, a));
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == n {
                return Ok(out);
            }
        }
    }
}

fn check_lengths(points: &[ObjectiveVector], p: &ObjectiveVector) -> Result<()> {
    for x in points {
        if x.len() != p.len() {
            return Err(Error::ObjectiveCountMismatch {
                expected: p.len(),
                found: x.len(),
            });
        }
    }
    Ok(())
}

/// Hypervolume of the union of boxes [p, x] over front members x: the
/// measure of the region the front attains above the reference point.
///
/// Exact for 2 objectives (linear sweep) and for 3–4 objectives (recursive
/// objective slicing, whose cost grows steeply with dimension). Every
/// member must lie on or above `p` in every coordinate; use
/// [`hypervolume_clipped`] to clip offending boxes instead, or
/// [`hypervolume_monte_carlo`] beyond four objectives.
pub fn hypervolume(points: &[ObjectiveVector], p: &ObjectiveVector) -> Result<f64> {
    check_lengths(points, p)?;
    for (index, x) in points.iter().enumerate() {
        for objective in 0..p.len() {
            if x[objective] < p[objective] {
                return Err(Error::ReferencePointViolation { index, objective });
            }
        }
    }
    hv_dispatch(points.iter().map(|x| x.values().to_vec()).collect(), p)
}

/// Hypervolume with boxes clipped at the reference point: coordinates below
/// `p` are raised to it, so out-of-range members contribute a degenerate
/// (zero-measure) slab instead of erroring.
pub fn hypervolume_clipped(points: &[ObjectiveVector], p: &ObjectiveVector) -> Result<f64> {
    check_lengths(points, p)?;
    let clipped: Vec<Vec<f64>> = points
        .iter()
        .map(|x| {
            x.values()
                .iter()
                .zip(p.values())
                .map(|(&v, &r)| v.max(r))
                .collect()
        })
        .collect();
    hv_dispatch(clipped, p)
}

fn hv_dispatch(points: Vec<Vec<f64>>, p: &ObjectiveVector) -> Result<f64> {
    let n = p.len();
    if n > 4 {
        return Err(Error::UnsupportedObjectiveCount {
            op: "exact hypervolume",
            n,
            max: 4,
            hint: "use hypervolume_monte_carlo",
        });
    }
    Ok(hv_exact(points, p.values()))
}

/// Recursive slicing on the last objective; two objectives are the closed
/// form. Points are re-sorted at every level with a full lexicographic
/// order so the result is bit-identical under input permutation.
fn hv_exact(mut points: Vec<Vec<f64>>, p: &[f64]) -> f64 {
    let n = p.len();
    if n == 2 {
        points.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
        let mut hv = 0.0;
        let mut prev = p[1];
        for x in &points {
            if x[1] > prev {
                hv += (x[0] - p[0]) * (x[1] - prev);
                prev = x[1];
            }
        }
        return hv;
    }
    points.sort_by(|a, b| {
        for k in (0..n).rev() {
            let c = b[k].total_cmp(&a[k]);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    });
    let mut hv = 0.0;
    let mut active: Vec<Vec<f64>> = Vec::new();
    let mut i = 0;
    while i < points.len() {
        let z = points[i][n - 1];
        if z <= p[n - 1] {
            break;
        }
        while i < points.len() && points[i][n - 1] == z {
            active.push(points[i][..n - 1].to_vec());
            i += 1;
        }
        let z_next = if i < points.len() {
            points[i][n - 1].max(p[n - 1])
        } else {
            p[n - 1]
        };
        hv += hv_exact(active.clone(), &p[..n - 1]) * (z - z_next);
    }
    hv
}

/// Monte-Carlo hypervolume estimate for any objective count: uniform
/// sampling of the box [p, ideal] with a fixed seed. Intended for more
/// than four objectives, where the exact algorithms are unavailable.
pub fn hypervolume_monte_carlo(
    points: &[ObjectiveVector],
    p: &ObjectiveVector,
    samples: u64,
    seed: u64,
) -> Result<f64> {
    check_lengths(points, p)?;
    for (index, x) in points.iter().enumerate() {
        for objective in 0..p.len() {
            if x[objective] < p[objective] {
                return Err(Error::ReferencePointViolation { index, objective });
            }
        }
    }
    if samples == 0 {
        return Err(Error::InvalidValue("sample count must be positive".into()));
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    let n = p.len();
    let top = ideal(points)?;
    let mut volume = 1.0;
    for k in 0..n {
        volume *= top[k] - p[k];
    }
    if volume <= 0.0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut z = vec![0.0f64; n];
    for _ in 0..samples {
        for (k, zk) in z.iter_mut().enumerate() {
            *zk = rng.random_range(p[k]..top[k]);
        }
        if points
            .iter()
            .any(|x| x.values().iter().zip(&z).all(|(&a, &b)| a >= b))
        {
            hits += 1;
        }
    }
    Ok(volume * hits as f64 / samples as f64)
}

/// Componentwise minimum over a set of points (the worst value realized on
/// each objective).
pub fn nadir(points: &[ObjectiveVector]) -> Result<ObjectiveVector> {
    componentwise(points, f64::min)
}

/// Componentwise maximum over a set of points (the best value realized on
/// each objective).
pub fn ideal(points: &[ObjectiveVector]) -> Result<ObjectiveVector> {
    componentwise(points, f64::max)
}

fn componentwise(points: &[ObjectiveVector], pick: fn(f64, f64) -> f64) -> Result<ObjectiveVector> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput("reference points need a non-empty front"));
    };
    let mut acc = first.values().to_vec();
    for x in &points[1..] {
        for (a, &v) in acc.iter_mut().zip(x.values()) {
            *a = pick(*a, v);
        }
    }
    ObjectiveVector::new(acc)
}

/// Per-run nadir and ideal points plus the conservative nadir η̄: the
/// componentwise max over per-run nadirs. Using η̄ as the hypervolume
/// reference discards regions only an outlier run reached.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSummary {
    pub per_run_nadir: Vec<ObjectiveVector>,
    pub per_run_ideal: Vec<ObjectiveVector>,
    pub conservative_nadir: ObjectiveVector,
}

pub fn reference_points(runs: &RunSet) -> Result<ReferenceSummary> {
    let mut per_run_nadir = Vec::with_capacity(runs.len());
    let mut per_run_ideal = Vec::with_capacity(runs.len());
    for f in runs.fronts() {
        let objs = f.objectives();
        per_run_nadir.push(nadir(&objs)?);
        per_run_ideal.push(ideal(&objs)?);
    }
    let conservative_nadir = ideal(&per_run_nadir)?;
    Ok(ReferenceSummary {
        per_run_nadir,
        per_run_ideal,
        conservative_nadir,
    })
}

/// Relative hypervolume difference (hv0 − hv1)/hv0, or `None` when hv0 is
/// zero and the ratio is undefined.
pub fn relative_difference(hv0: f64, hv1: f64) -> Option<f64> {
    if hv0 == 0.0 {
        None
    } else {
        Some((hv0 - hv1) / hv0)
    }
}
