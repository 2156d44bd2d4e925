//! Elitist non-dominated sorting genetic algorithm (μ+λ) with binary
//! tournament selection, simulated-binary crossover, and bounded polynomial
//! mutation.
//!
//! Determinism contract: a run is a pure function of (problem, space,
//! config). One counter-based generator is seeded per run and split into
//! substreams — 0 initialization, 1 variation, 2 reserved for problems with
//! stochastic evaluation (the built-in problems own their evaluation seed
//! instead).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::pareto::{
    dominates, nondominated_filter, Front, ObjectiveVector, ParameterVector, Provenance,
    SearchSpace, Solution,
};
use crate::problems::{internalize, Problem};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    /// Even and at least 4.
    pub population_size: usize,
    pub generations: u64,
    /// Probability that a mated pair undergoes crossover (whole-arm gate;
    /// every variable crosses once the gate fires).
    pub crossover_probability: f64,
    /// Per-variable mutation probability; `None` means 1/m.
    pub mutation_probability: Option<f64>,
    pub eta_c: f64,
    pub eta_m: f64,
    pub seed: u64,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 100,
            crossover_probability: 0.9,
            mutation_probability: None,
            eta_c: 15.0,
            eta_m: 20.0,
            seed: 0,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "population_size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(Error::InvalidConfig(format!(
                "crossover_probability must be in [0, 1], got {}",
                self.crossover_probability
            )));
        }
        if let Some(pm) = self.mutation_probability {
            if !(0.0..=1.0).contains(&pm) {
                return Err(Error::InvalidConfig(format!(
                    "mutation_probability must be in [0, 1], got {pm}"
                )));
            }
        }
        let positive = |v: f64| v > 0.0;
        if !positive(self.eta_c) || !positive(self.eta_m) {
            return Err(Error::InvalidConfig(
                "eta_c and eta_m must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of non-dominated sorting: `ranks[i]` is the front index of member
/// i, `fronts[r]` lists the member indices of front r in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub ranks: Vec<usize>,
    pub fronts: Vec<Vec<usize>>,
}

/// Deb's fast non-dominated sort: O(M·N²) via domination counts and
/// dominated-sets.
pub fn fast_nondominated_sort(objectives: &[ObjectiveVector]) -> Ranking {
    let n = objectives.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objectives[i], &objectives[j]) {
                dominated[i].push(j);
                count[j] += 1;
            } else if dominates(&objectives[j], &objectives[i]) {
                dominated[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut ranks = vec![0usize; n];
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    let mut r = 0;
    while !current.is_empty() {
        for &i in &current {
            ranks[i] = r;
        }
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
        r += 1;
    }
    Ranking { ranks, fronts }
}

/// Crowding distance within one front. Fewer than 3 members: all +∞.
/// Otherwise, per objective the boundary members get +∞ and interior
/// members accumulate the neighbor gap normalized by the objective's range;
/// an objective with zero range contributes nothing.
pub fn crowding_distance(objectives: &[&ObjectiveVector]) -> Vec<f64> {
    let l = objectives.len();
    if l == 0 {
        return Vec::new();
    }
    if l < 3 {
        return vec![f64::INFINITY; l];
    }
    let n = objectives[0].len();
    let mut d = vec![0.0f64; l];
    let mut order: Vec<usize> = (0..l).collect();
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        order.sort_by(|&a, &b| objectives[a][k].total_cmp(&objectives[b][k]));
        let lo = objectives[order[0]][k];
        let hi = objectives[order[l - 1]][k];
        let range = hi - lo;
        if range == 0.0 {
            continue;
        }
        d[order[0]] = f64::INFINITY;
        d[order[l - 1]] = f64::INFINITY;
        for w in 1..l - 1 {
            let prev = objectives[order[w - 1]][k];
            let next = objectives[order[w + 1]][k];
            d[order[w]] += (next - prev) / range;
        }
    }
    d
}

/// Spread factor β(u, η) of simulated-binary crossover, u ∈ [0, 1).
pub fn sbx_spread(u: f64, eta: f64) -> f64 {
    assert!((0.0..1.0).contains(&u), "u must be in [0, 1), got {u}");
    let exp = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exp)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exp)
    }
}

/// Whole-arm SBX: one spread draw per variable (`us[j]`), children clipped
/// to the space. Child 1 stays on parent 1's side of the mean, so u = 0.5
/// (β = 1) reproduces the parents exactly.
pub fn sbx_crossover(
    p1: &ParameterVector,
    p2: &ParameterVector,
    eta_c: f64,
    us: &[f64],
    space: &SearchSpace,
) -> (ParameterVector, ParameterVector) {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    assert_eq!(us.len(), p1.len(), "one u per variable");
    let mut c1 = Vec::with_capacity(p1.len());
    let mut c2 = Vec::with_capacity(p1.len());
    for j in 0..p1.len() {
        let (a, b) = (p1[j], p2[j]);
        if (b - a).abs() < 1e-14 {
            c1.push(a);
            c2.push(b);
            continue;
        }
        let beta = sbx_spread(us[j], eta_c);
        let mean = 0.5 * (a + b);
        let half = 0.5 * beta * (b - a).abs();
        let (low, high) = (mean - half, mean + half);
        if a <= b {
            c1.push(low);
            c2.push(high);
        } else {
            c1.push(high);
            c2.push(low);
        }
    }
    space.clip(&mut c1);
    space.clip(&mut c2);
    (
        ParameterVector::new(c1).expect("finite children"),
        ParameterVector::new(c2).expect("finite children"),
    )
}

/// Bounded polynomial mutation of one variable, u ∈ [0, 1]. u = 0.5 leaves
/// x unchanged; u → 0/1 pushes toward the respective bound, scaled by the
/// distance to it.
pub fn polynomial_mutation_value(x: f64, lo: f64, hi: f64, eta_m: f64, u: f64) -> f64 {
    assert!((0.0..=1.0).contains(&u), "u must be in [0, 1], got {u}");
    assert!(lo < hi && (lo..=hi).contains(&x), "x must lie within [lo, hi]");
    let range = hi - lo;
    let d1 = (x - lo) / range;
    let d2 = (hi - x) / range;
    let exp = 1.0 / (eta_m + 1.0);
    let dq = if u < 0.5 {
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta_m + 1.0)).powf(exp) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta_m + 1.0)).powf(exp)
    };
    (x + dq * range).clamp(lo, hi)
}

/// Mutate every variable of `p` with its supplied draw.
pub fn polynomial_mutation(
    p: &ParameterVector,
    eta_m: f64,
    us: &[f64],
    space: &SearchSpace,
) -> ParameterVector {
    assert_eq!(us.len(), p.len(), "one u per variable");
    let values = p
        .values()
        .iter()
        .zip(space.dims())
        .zip(us)
        .map(|((&x, d), &u)| polynomial_mutation_value(x, d.lower, d.upper, eta_m, u))
        .collect();
    ParameterVector::new(values).expect("finite mutants")
}

/// Per-generation view handed to the observer: the surviving members of the
/// combined population's first front, and whether that front was truncated
/// to fit. When `rank0_truncated` is false this is exactly the new
/// population's non-dominated set.
#[derive(Debug, Clone)]
pub struct GenerationSnapshot {
    pub generation: u64,
    pub rank0: Vec<ObjectiveVector>,
    pub rank0_truncated: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub front: Front,
    pub evaluations: u64,
    pub nonfinite_evaluations: u64,
}

struct Indiv {
    params: ParameterVector,
    objectives: Option<ObjectiveVector>,
    generation: u64,
    evaluation: u64,
}

pub fn run(
    problem: &dyn Problem,
    space: &SearchSpace,
    config: &AlgorithmConfig,
    run_id: u64,
) -> Result<RunOutput> {
    run_with_observer(problem, space, config, run_id, |_| {})
}

pub fn run_with_observer(
    problem: &dyn Problem,
    space: &SearchSpace,
    config: &AlgorithmConfig,
    run_id: u64,
    mut observer: impl FnMut(&GenerationSnapshot),
) -> Result<RunOutput> {
    config.validate()?;
    if !space.within(problem.search_space()) {
        return Err(Error::InvalidConfig(format!(
            "search space override must lie within the problem's declared space {:?}",
            problem.search_space().dims()
        )));
    }
    let n_obj = problem.objectives().len();
    let pop_size = config.population_size;
    let m = space.len();
    let pm = config.mutation_probability.unwrap_or(1.0 / m as f64);

    let mut init_rng = substream(config.seed, 0);
    let mut var_rng = substream(config.seed, 1);

    let mut evaluations = 0u64;
    let mut nonfinite = 0u64;
    let mut evaluate = |params: ParameterVector, generation: u64| -> Indiv {
        let raw = problem.evaluate_raw(params.values());
        assert_eq!(raw.len(), n_obj, "problem returned wrong objective count");
        evaluations += 1;
        let objectives = internalize(problem.objectives(), &raw);
        if objectives.is_none() {
            nonfinite += 1;
        }
        Indiv {
            params,
            objectives,
            generation,
            evaluation: evaluations,
        }
    };

    let mut pop: Vec<Indiv> = (0..pop_size)
        .map(|_| evaluate(space.sample(&mut init_rng), 0))
        .collect();

    {
        let valid: Vec<&ObjectiveVector> = pop.iter().filter_map(|i| i.objectives.as_ref()).collect();
        let objs: Vec<ObjectiveVector> = valid.iter().map(|o| (*o).clone()).collect();
        let ranking = fast_nondominated_sort(&objs);
        let rank0 = ranking
            .fronts
            .first()
            .map(|f| f.iter().map(|&i| objs[i].clone()).collect())
            .unwrap_or_default();
        observer(&GenerationSnapshot {
            generation: 0,
            rank0,
            rank0_truncated: false,
        });
    }

    for gen in 1..=config.generations {
        let (ranks, crowding) = rank_population(&pop);

        let mut offspring = Vec::with_capacity(pop_size);
        for _ in 0..pop_size / 2 {
            let a = tournament(&ranks, &crowding, pop_size, &mut var_rng);
            let b = tournament(&ranks, &crowding, pop_size, &mut var_rng);
            let (mut c1, mut c2) = if var_rng.random::<f64>() <= config.crossover_probability {
                let us: Vec<f64> = (0..m).map(|_| var_rng.random::<f64>()).collect();
                sbx_crossover(&pop[a].params, &pop[b].params, config.eta_c, &us, space)
            } else {
                (pop[a].params.clone(), pop[b].params.clone())
            };
            for child in [&mut c1, &mut c2] {
                let mut values: Vec<f64> = child.values().to_vec();
                for (j, dim) in space.dims().iter().enumerate() {
                    if var_rng.random::<f64>() <= pm {
                        values[j] = polynomial_mutation_value(
                            values[j],
                            dim.lower,
                            dim.upper,
                            config.eta_m,
                            var_rng.random::<f64>(),
                        );
                    }
                }
                *child = ParameterVector::new(values).expect("finite child");
            }
            offspring.push(evaluate(c1, gen));
            offspring.push(evaluate(c2, gen));
        }

        let mut combined = pop;
        combined.extend(offspring);
        let (next, snapshot) = environmental_selection(combined, pop_size, gen);
        pop = next;
        observer(&snapshot);
    }

    let solutions: Vec<Solution> = pop
        .iter()
        .filter_map(|i| {
            i.objectives.as_ref().map(|o| Solution {
                parameters: i.params.clone(),
                objectives: o.clone(),
                provenance: Provenance {
                    run: run_id,
                    generation: i.generation,
                    evaluation: i.evaluation,
                },
            })
        })
        .collect();
    let front = nondominated_filter(n_obj, solutions)?;
    Ok(RunOutput {
        front,
        evaluations,
        nonfinite_evaluations: nonfinite,
    })
}

fn substream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ranks and crowding for tournament selection over the current population.
/// Individuals with non-finite evaluations get the worst possible rank.
fn rank_population(pop: &[Indiv]) -> (Vec<usize>, Vec<f64>) {
    let valid_idx: Vec<usize> = (0..pop.len())
        .filter(|&i| pop[i].objectives.is_some())
        .collect();
    let objs: Vec<ObjectiveVector> = valid_idx
        .iter()
        .map(|&i| pop[i].objectives.clone().unwrap())
        .collect();
    let ranking = fast_nondominated_sort(&objs);

    let mut ranks = vec![usize::MAX; pop.len()];
    let mut crowding = vec![0.0f64; pop.len()];
    for front in &ranking.fronts {
        let members: Vec<&ObjectiveVector> = front.iter().map(|&i| &objs[i]).collect();
        let cd = crowding_distance(&members);
        for (w, &i) in front.iter().enumerate() {
            ranks[valid_idx[i]] = ranking.ranks[i];
            crowding[valid_idx[i]] = cd[w];
        }
    }
    (ranks, crowding)
}

fn tournament(
    ranks: &[usize],
    crowding: &[f64],
    pop_size: usize,
    rng: &mut ChaCha12Rng,
) -> usize {
    let a = rng.random_range(0..pop_size);
    let b = rng.random_range(0..pop_size);
    // Lower rank wins; equal rank prefers larger crowding; full tie keeps
    // the first draw.
    if ranks[b] < ranks[a] || (ranks[b] == ranks[a] && crowding[b] > crowding[a]) {
        b
    } else {
        a
    }
}

fn environmental_selection(
    combined: Vec<Indiv>,
    pop_size: usize,
    generation: u64,
) -> (Vec<Indiv>, GenerationSnapshot) {
    let valid_idx: Vec<usize> = (0..combined.len())
        .filter(|&i| combined[i].objectives.is_some())
        .collect();
    let objs: Vec<ObjectiveVector> = valid_idx
        .iter()
        .map(|&i| combined[i].objectives.clone().unwrap())
        .collect();
    let ranking = fast_nondominated_sort(&objs);

    let mut selected: Vec<usize> = Vec::with_capacity(pop_size);
    let mut rank0_selected: Vec<ObjectiveVector> = Vec::new();
    let mut rank0_truncated = false;
    for (r, front) in ranking.fronts.iter().enumerate() {
        let room = pop_size - selected.len();
        let take: Vec<usize> = if front.len() <= room {
            front.clone()
        } else {
            if r == 0 {
                rank0_truncated = true;
            }
            let members: Vec<&ObjectiveVector> = front.iter().map(|&i| &objs[i]).collect();
            let cd = crowding_distance(&members);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&x, &y| cd[y].total_cmp(&cd[x]).then(front[x].cmp(&front[y])));
            let mut take: Vec<usize> = order[..room].iter().map(|&w| front[w]).collect();
            take.sort_unstable();
            take
        };
        if r == 0 {
            rank0_selected = take.iter().map(|&i| objs[i].clone()).collect();
        }
        selected.extend(take);
        if selected.len() == pop_size {
            break;
        }
    }

    // Worst-rank demotion: individuals whose evaluation came back non-finite
    // fill any leftover slots last, in encounter order.
    let mut chosen = vec![false; combined.len()];
    for &i in &selected {
        chosen[valid_idx[i]] = true;
    }
    let mut next: Vec<Indiv> = Vec::with_capacity(pop_size);
    let mut invalid: Vec<Indiv> = Vec::new();
    for (i, indiv) in combined.into_iter().enumerate() {
        if chosen[i] {
            next.push(indiv);
        } else if indiv.objectives.is_none() {
            invalid.push(indiv);
        }
    }
    for extra in invalid {
        if next.len() < pop_size {
            next.push(extra);
        }
    }
    assert_eq!(next.len(), pop_size, "selection must fill the population");
    let snapshot = GenerationSnapshot {
        generation,
        rank0: rank0_selected,
        rank0_truncated,
    };
    (next, snapshot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::testutil::ov;
    use crate::problems::{ObjectiveSpec, SyntheticBiobjective};
    use proptest::prelude::*;

    fn approx(a: f64, b: f64) {
        assert!(
            (a - b).abs() <= 1e-12 * b.abs().max(1.0),
            "{a} !~ {b}"
        );
    }

    // ---- sorting ----

    #[test]
    fn sort_splits_dominated_point_into_second_front() {
        let objs = vec![ov(&[2.0, 2.0]), ov(&[1.0, 1.0]), ov(&[3.0, 1.0]), ov(&[1.0, 3.0])];
        let r = fast_nondominated_sort(&objs);
        assert_eq!(r.fronts, vec![vec![0, 2, 3], vec![1]]);
        assert_eq!(r.ranks, vec![0, 1, 0, 0]);
    }

    #[test]
    fn sort_handles_duplicates_and_chains() {
        // Duplicates never dominate each other: both stay rank 0.
        let objs = vec![ov(&[1.0, 1.0]), ov(&[1.0, 1.0])];
        assert_eq!(fast_nondominated_sort(&objs).ranks, vec![0, 0]);
        // A strict chain peels one layer per element.
        let objs: Vec<_> = (0..5).map(|i| ov(&[i as f64, i as f64])).collect();
        assert_eq!(fast_nondominated_sort(&objs).ranks, vec![4, 3, 2, 1, 0]);
    }

    /// Reference oracle: repeatedly remove the non-dominated layer (O(N^3)).
    fn peel_ranks(objs: &[ObjectiveVector]) -> Vec<usize> {
        let n = objs.len();
        let mut rank = vec![usize::MAX; n];
        let mut r = 0;
        loop {
            let remaining: Vec<usize> = (0..n).filter(|&i| rank[i] == usize::MAX).collect();
            if remaining.is_empty() {
                return rank;
            }
            for &i in &remaining {
                if !remaining.iter().any(|&j| dominates(&objs[j], &objs[i])) {
                    rank[i] = r;
                }
            }
            r += 1;
        }
    }

    proptest! {
        #[test]
        fn sort_matches_peeling_oracle(
            raw in prop::collection::vec(prop::collection::vec(0..6i32, 2..4), 1..40)
        ) {
            let dims = raw[0].len();
            let objs: Vec<ObjectiveVector> = raw
                .iter()
                .map(|v| ov(&v.iter().take(dims).map(|&x| x as f64).chain(std::iter::repeat(0.0)).take(dims).collect::<Vec<_>>()))
                .collect();
            let fast = fast_nondominated_sort(&objs);
            prop_assert_eq!(&fast.ranks, &peel_ranks(&objs));
            // fronts and ranks agree
            for (r, front) in fast.fronts.iter().enumerate() {
                for &i in front {
                    prop_assert_eq!(fast.ranks[i], r);
                }
            }
            let total: usize = fast.fronts.iter().map(|f| f.len()).sum();
            prop_assert_eq!(total, objs.len());
        }
    }

    // ---- crowding ----

    #[test]
    fn crowding_matches_worked_example() {
        let objs = [ov(&[1.0, 3.0]), ov(&[2.0, 2.0]), ov(&[3.0, 1.0])];
        let refs: Vec<&ObjectiveVector> = objs.iter().collect();
        let d = crowding_distance(&refs);
        assert_eq!(d[0], f64::INFINITY);
        approx(d[1], 2.0);
        assert_eq!(d[2], f64::INFINITY);
    }

    #[test]
    fn crowding_ignores_flat_objective() {
        let objs = [ov(&[0.0, 1.0]), ov(&[0.0, 2.0]), ov(&[0.0, 3.0])];
        let refs: Vec<&ObjectiveVector> = objs.iter().collect();
        let d = crowding_distance(&refs);
        assert_eq!(d[0], f64::INFINITY);
        approx(d[1], 1.0);
        assert_eq!(d[2], f64::INFINITY);
        // All objectives flat: every distance is zero, no spurious infinities.
        let objs = [ov(&[1.0, 1.0]), ov(&[1.0, 1.0]), ov(&[1.0, 1.0])];
        let refs: Vec<&ObjectiveVector> = objs.iter().collect();
        assert_eq!(crowding_distance(&refs), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn crowding_small_fronts_are_all_infinite() {
        let objs = [ov(&[1.0, 2.0]), ov(&[2.0, 1.0])];
        let refs: Vec<&ObjectiveVector> = objs.iter().collect();
        assert_eq!(crowding_distance(&refs), vec![f64::INFINITY; 2]);
        assert!(crowding_distance(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn crowding_interior_values_are_finite_nonnegative(
            raw in prop::collection::vec((0..100i32, 0..100i32), 3..20)
        ) {
            let objs: Vec<ObjectiveVector> =
                raw.iter().map(|&(a, b)| ov(&[a as f64, b as f64])).collect();
            let refs: Vec<&ObjectiveVector> = objs.iter().collect();
            for d in crowding_distance(&refs) {
                prop_assert!(d >= 0.0);
            }
        }
    }

    // ---- variation operators ----

    #[test]
    fn sbx_median_draw_reproduces_parents() {
        let space = SearchSpace::from_bounds(&[(0.0, 10.0), (0.0, 10.0)]).unwrap();
        let p1 = ParameterVector::new(vec![1.0, 4.0]).unwrap();
        let p2 = ParameterVector::new(vec![3.0, 2.0]).unwrap();
        let (c1, c2) = sbx_crossover(&p1, &p2, 15.0, &[0.5, 0.5], &space);
        assert_eq!(c1.values(), p1.values());
        assert_eq!(c2.values(), p2.values());
    }

    #[test]
    fn sbx_matches_frozen_values() {
        let space = SearchSpace::from_bounds(&[(0.0, 10.0)]).unwrap();
        let p1 = ParameterVector::new(vec![1.0]).unwrap();
        let p2 = ParameterVector::new(vec![3.0]).unwrap();

        approx(sbx_spread(0.25, 15.0), 0.9576032806985737);
        approx(sbx_spread(0.75, 15.0), 1.0442737824274138);

        let (c1, c2) = sbx_crossover(&p1, &p2, 15.0, &[0.25], &space);
        approx(c1[0], 1.0423967193014263);
        approx(c2[0], 2.9576032806985735);

        let (c1, c2) = sbx_crossover(&p1, &p2, 15.0, &[0.75], &space);
        approx(c1[0], 0.9557262175725861);
        approx(c2[0], 3.044273782427414);
    }

    #[test]
    fn sbx_keeps_parent_correspondence_when_swapped() {
        let space = SearchSpace::from_bounds(&[(0.0, 10.0)]).unwrap();
        let p1 = ParameterVector::new(vec![3.0]).unwrap();
        let p2 = ParameterVector::new(vec![1.0]).unwrap();
        let (c1, c2) = sbx_crossover(&p1, &p2, 15.0, &[0.25], &space);
        // Child 1 stays on the high side with its parent.
        approx(c1[0], 2.9576032806985735);
        approx(c2[0], 1.0423967193014263);
    }

    #[test]
    fn sbx_clips_children_to_the_space() {
        let space = SearchSpace::from_bounds(&[(0.0, 2.5)]).unwrap();
        let p1 = ParameterVector::new(vec![1.0]).unwrap();
        let p2 = ParameterVector::new(vec![2.4]).unwrap();
        // A spreading draw pushes child 2 past the upper bound.
        let (_, c2) = sbx_crossover(&p1, &p2, 15.0, &[0.99], &space);
        assert_eq!(c2[0], 2.5);
    }

    #[test]
    #[should_panic(expected = "u must be in [0, 1)")]
    fn sbx_spread_rejects_unit_draw() {
        sbx_spread(1.0, 15.0);
    }

    #[test]
    fn mutation_matches_frozen_values() {
        approx(polynomial_mutation_value(0.3, 0.0, 1.0, 20.0, 0.25), 0.2675575055329454);
        approx(polynomial_mutation_value(0.3, 0.0, 1.0, 20.0, 0.9), 0.3737766739655868);
        approx(polynomial_mutation_value(0.25, -1.0, 3.0, 20.0, 0.75), 0.3798728858998903);
    }

    #[test]
    fn mutation_edge_draws() {
        // The median draw is a fixed point.
        assert_eq!(polynomial_mutation_value(0.3, 0.0, 1.0, 20.0, 0.5), 0.3);
        // Sitting on the lower bound, a downward draw cannot move it.
        assert_eq!(polynomial_mutation_value(0.0, 0.0, 1.0, 20.0, 0.25), 0.0);
        // Extreme draws land exactly on the bounds.
        assert_eq!(polynomial_mutation_value(0.3, 0.0, 1.0, 20.0, 1.0), 1.0);
        assert_eq!(polynomial_mutation_value(0.3, 0.0, 1.0, 20.0, 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn mutation_stays_in_bounds(x in 0.0..=1.0f64, u in 0.0..=1.0f64, eta in 1.0..50.0f64) {
            let y = polynomial_mutation_value(x, 0.0, 1.0, eta, u);
            prop_assert!((0.0..=1.0).contains(&y));
        }

        #[test]
        fn sbx_children_stay_in_bounds(
            a in 0.0..=1.0f64, b in 0.0..=1.0f64, u in 0.0..1.0f64
        ) {
            let space = SearchSpace::from_bounds(&[(0.0, 1.0)]).unwrap();
            let p1 = ParameterVector::new(vec![a]).unwrap();
            let p2 = ParameterVector::new(vec![b]).unwrap();
            let (c1, c2) = sbx_crossover(&p1, &p2, 15.0, &[u], &space);
            prop_assert!((0.0..=1.0).contains(&c1[0]));
            prop_assert!((0.0..=1.0).contains(&c2[0]));
            // The operator is mean-preserving before clipping; with u = 0.5
            // it must reproduce the parents bit for bit.
            if u == 0.5 {
                prop_assert_eq!(c1[0], a);
                prop_assert_eq!(c2[0], b);
            }
        }
    }

    // ---- selection ----

    #[test]
    fn tournament_full_tie_keeps_first_draw() {
        let mut probe = substream(42, 1);
        let a = probe.random_range(0..2usize);
        let _ = probe.random_range(0..2usize);
        let mut rng = substream(42, 1);
        assert_eq!(tournament(&[0, 0], &[1.0, 1.0], 2, &mut rng), a);
    }

    #[test]
    fn config_validation_rejects_bad_populations() {
        let mut c = AlgorithmConfig {
            population_size: 7,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        c.population_size = 2;
        assert!(c.validate().is_err());
        c.population_size = 4;
        assert!(c.validate().is_ok());
        c.crossover_probability = 1.5;
        assert!(c.validate().is_err());
    }

    // ---- full runs ----

    fn small_config(seed: u64) -> AlgorithmConfig {
        AlgorithmConfig {
            population_size: 8,
            generations: 3,
            seed,
            ..AlgorithmConfig::default()
        }
    }

    #[test]
    fn run_counts_evaluations() {
        let p = SyntheticBiobjective::new();
        let out = run(&p, &p.search_space().clone(), &small_config(11), 0).unwrap();
        assert_eq!(out.evaluations, 8 * 4);
        assert_eq!(out.nonfinite_evaluations, 0);

        let mut c = small_config(11);
        c.generations = 0;
        let out = run(&p, &p.search_space().clone(), &c, 0).unwrap();
        assert_eq!(out.evaluations, 8);
    }

    #[test]
    fn run_is_deterministic_per_seed() {
        let p = SyntheticBiobjective::new();
        let space = p.search_space().clone();
        let a = run(&p, &space, &small_config(5), 3).unwrap();
        let b = run(&p, &space, &small_config(5), 3).unwrap();
        let dump = |o: &RunOutput| {
            o.front
                .members()
                .iter()
                .map(|s| (s.parameters.values().to_vec(), s.objectives.values().to_vec()))
                .collect::<Vec<_>>()
        };
        assert_eq!(dump(&a), dump(&b));
        let c = run(&p, &space, &small_config(6), 3).unwrap();
        assert_ne!(dump(&a), dump(&c));
    }

    #[test]
    fn run_stamps_provenance_and_respects_bounds() {
        let p = SyntheticBiobjective::new();
        let space = SearchSpace::from_bounds(&[(0.2, 0.4)]).unwrap();
        let out = run(&p, &space, &small_config(9), 42).unwrap();
        assert!(!out.front.is_empty());
        for s in out.front.members() {
            assert_eq!(s.provenance.run, 42);
            assert!(s.provenance.evaluation >= 1 && s.provenance.evaluation <= out.evaluations);
            assert!(space.contains(&s.parameters));
        }
    }

    #[test]
    fn run_rejects_space_outside_problem() {
        let p = SyntheticBiobjective::new();
        let space = SearchSpace::from_bounds(&[(0.0, 2.0)]).unwrap();
        assert!(matches!(
            run(&p, &space, &small_config(1), 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    // Single-variable problem with identical objectives: the first front is
    // tiny, so elitism is observable without truncation.
    #[derive(Debug)]
    struct Hill {
        space: SearchSpace,
        objectives: Vec<ObjectiveSpec>,
    }

    impl Hill {
        fn new() -> Self {
            Self {
                space: SearchSpace::from_bounds(&[(0.0, 1.0)]).unwrap(),
                objectives: vec![ObjectiveSpec::maximize("f1"), ObjectiveSpec::maximize("f2")],
            }
        }
    }

    impl Problem for Hill {
        fn name(&self) -> &str {
            "hill"
        }
        fn search_space(&self) -> &SearchSpace {
            &self.space
        }
        fn objectives(&self) -> &[ObjectiveSpec] {
            &self.objectives
        }
        fn evaluate_raw(&self, params: &[f64]) -> Vec<f64> {
            let f = -(params[0] - 0.3).powi(2);
            vec![f, f]
        }
    }

    #[test]
    fn elitism_never_loses_the_best_point() {
        let p = Hill::new();
        let mut best_so_far = f64::NEG_INFINITY;
        let mut snapshots = 0;
        let config = AlgorithmConfig {
            population_size: 10,
            generations: 15,
            seed: 2,
            ..AlgorithmConfig::default()
        };
        run_with_observer(&p, &p.search_space().clone(), &config, 0, |snap| {
            let gen_best = snap
                .rank0
                .iter()
                .map(|o| o[0])
                .fold(f64::NEG_INFINITY, f64::max);
            if !snap.rank0_truncated {
                assert!(
                    gen_best >= best_so_far,
                    "generation {} lost ground: {} < {}",
                    snap.generation,
                    gen_best,
                    best_so_far
                );
            }
            best_so_far = best_so_far.max(gen_best);
            snapshots += 1;
        })
        .unwrap();
        assert_eq!(snapshots, 16);
    }

    // Problem with a non-finite region: evaluations there must be demoted,
    // counted, and kept out of the final front.
    #[derive(Debug)]
    struct NanPatch {
        space: SearchSpace,
        objectives: Vec<ObjectiveSpec>,
    }

    impl NanPatch {
        fn new() -> Self {
            Self {
                space: SearchSpace::from_bounds(&[(0.0, 1.0)]).unwrap(),
                objectives: vec![ObjectiveSpec::maximize("f1"), ObjectiveSpec::maximize("f2")],
            }
        }
    }

    impl Problem for NanPatch {
        fn name(&self) -> &str {
            "nan-patch"
        }
        fn search_space(&self) -> &SearchSpace {
            &self.space
        }
        fn objectives(&self) -> &[ObjectiveSpec] {
            &self.objectives
        }
        fn evaluate_raw(&self, params: &[f64]) -> Vec<f64> {
            let x = params[0];
            if x > 0.4 {
                vec![f64::NAN, 0.0]
            } else {
                vec![x, 1.0 - x]
            }
        }
    }

    #[test]
    fn nonfinite_evaluations_are_demoted_not_fatal() {
        let p = NanPatch::new();
        let config = AlgorithmConfig {
            population_size: 8,
            generations: 6,
            seed: 3,
            ..AlgorithmConfig::default()
        };
        let out = run(&p, &p.search_space().clone(), &config, 0).unwrap();
        assert!(out.nonfinite_evaluations > 0);
        assert!(!out.front.is_empty());
        for s in out.front.members() {
            assert!(s.parameters[0] <= 0.4);
        }
    }

    /// Test-local hypervolume sweep for the convergence smoke check.
    fn hv2d(points: &[ObjectiveVector], r: (f64, f64)) -> f64 {
        let mut pts: Vec<(f64, f64)> = points
            .iter()
            .map(|p| (p[0], p[1]))
            .filter(|&(a, b)| a > r.0 && b > r.1)
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut hv = 0.0;
        let mut prev = r.1;
        for (x, y) in pts {
            if y > prev {
                hv += (x - r.0) * (y - prev);
                prev = y;
            }
        }
        hv
    }

    #[test]
    fn run_converges_on_the_synthetic_problem() {
        let p = SyntheticBiobjective::new();
        let config = AlgorithmConfig {
            population_size: 40,
            generations: 40,
            seed: 7,
            ..AlgorithmConfig::default()
        };
        let out = run(&p, &p.search_space().clone(), &config, 0).unwrap();
        let hv = hv2d(&out.front.objectives(), (0.0, 0.0));
        let target = SyntheticBiobjective::analytic_hypervolume_optimum();
        assert!(
            hv >= 0.95 * target,
            "hypervolume {hv} below 95% of optimum {target}"
        );
    }
}
