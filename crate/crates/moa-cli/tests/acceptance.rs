//! Acceptance gate: one test per shipped guarantee, each checked against an
//! oracle computed independently in this file (grid counting, brute-force
//! peeling, closed forms) rather than against the code under test. Every
//! test prints an `[acceptance] … PASS` line once its assertions hold; run
//! with `--nocapture` to see them.

use std::fs;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use moa::aggregate::{disparity_report, DisparityMetric};
use moa::indicators::{
    empirical_attainment, hypervolume, psi0, psi1, relative_difference, RunSet,
};
use moa::mining::{balance_by_replication, cart_train, CartConfig, LabeledSample, TreeNode};
use moa::nsga2::{fast_nondominated_sort, run, AlgorithmConfig};
use moa::pareto::{
    dominates, nondominated_filter, ObjectiveVector, ParameterVector, Provenance, Solution,
};
use moa::problems::{
    aero_features, externalize, wta_scores, AeroConstants, KinematicRecord, Problem,
    SyntheticBiobjective,
};

use moa_cli::archive::{load_json, RunArchive};
use moa_cli::commands::{
    cmd_aggregate, cmd_analyze, cmd_optimize, AggregateArgs, AnalyzeArgs, OptimizeArgs,
};

fn ov(values: &[f64]) -> ObjectiveVector {
    ObjectiveVector::new(values.to_vec()).unwrap()
}

fn sol(values: &[f64]) -> Solution {
    Solution {
        parameters: ParameterVector::new(vec![0.0]).unwrap(),
        objectives: ov(values),
        provenance: Provenance::default(),
    }
}

// ------------------------------------------------------------------- C1

#[test]
fn c01_disparity_arithmetic() {
    // Hypervolume pairs with known relative differences, to ±0.05
    // percentage points. A third reference pair (0.593, 0.588) is excluded:
    // its values are quoted too coarsely to reproduce the stated percentage.
    let d = relative_difference(414.9, 393.4).unwrap() * 100.0;
    assert!((d - 5.2).abs() <= 0.05, "expected 5.2%, got {d}%");

    let d = relative_difference(6267.4, 6117.3).unwrap() * 100.0;
    assert!((d - 2.4).abs() <= 0.05, "expected 2.4%, got {d}%");

    println!("[acceptance] C1 disparity arithmetic: PASS");
}

// ------------------------------------------------------------------- C2

#[test]
fn c02_reynolds_reproduction() {
    let constants = AeroConstants::default();
    assert_eq!(constants.mean_chord, 0.2);
    assert_eq!(constants.kinematic_viscosity, 1.5e-5);

    let record = |u: f64| KinematicRecord {
        a_di: 20.0,
        p_di: 0.5,
        r_twi: 0.0,
        a_twi: 10.0,
        p_twi: 0.0,
        r_twe: 0.0,
        a_twe: 10.0,
        p_twe: 0.0,
        cruise_speed: u,
    };

    for (u, expected) in [(7.5, 1.00e5), (37.3, 4.97e5)] {
        let re = aero_features(&record(u), &constants).unwrap().reynolds;
        let rel = (re - expected).abs() / expected;
        assert!(rel <= 0.005, "U={u}: Re={re}, expected {expected} ±0.5%");
    }

    println!("[acceptance] C2 Reynolds reproduction: PASS");
}

// ------------------------------------------------------------------- C3

#[test]
fn c03_replication_balancing() {
    let mut samples = Vec::new();
    for i in 0..71 {
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![i as f64]).unwrap(),
            "plausible",
        ));
    }
    for i in 0..501 {
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![-(i as f64)]).unwrap(),
            "implausible",
        ));
    }

    let balanced = balance_by_replication(&samples, 7, "plausible").unwrap();
    let weight_of = |label: &str| -> u64 {
        balanced
            .iter()
            .filter(|s| s.label == label)
            .map(|s| s.weight)
            .sum()
    };
    assert_eq!(weight_of("plausible"), 497);
    assert_eq!(weight_of("implausible"), 501);

    println!("[acceptance] C3 replication balancing (71×7 = 497 vs 501): PASS");
}

// ------------------------------------------------------------------- C4

#[test]
fn c04_optimizer_convergence() {
    let started = Instant::now();
    let problem = SyntheticBiobjective::new();
    let optimum = SyntheticBiobjective::analytic_hypervolume_optimum();
    let reference = ov(&[0.0, 0.0]);

    for seed in 0..5u64 {
        let config = AlgorithmConfig {
            population_size: 100,
            generations: 100,
            seed,
            ..Default::default()
        };
        let out = run(&problem, problem.search_space(), &config, seed).unwrap();
        let hv = hypervolume(&out.front.objectives(), &reference).unwrap();
        let ratio = hv / optimum;
        assert!(
            ratio >= 0.98,
            "seed {seed}: hypervolume {hv} is only {:.2}% of the optimum {optimum}",
            ratio * 100.0
        );
    }

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.1} s, budget is 60 s");
    println!(
        "[acceptance] C4 optimizer convergence (5 seeds ≥ 98% of 5/6, {elapsed:.1} s): PASS"
    );
}

// ------------------------------------------------------------------- C5

/// Grid oracle: hypervolume vs (0, 0) as 10⁻⁴ times the number of cell
/// centers of a 1000×1000 lattice on [0,10]² that some point dominates.
/// A center (u, v) is dominated iff v clears the tallest point at first
/// coordinate ≥ u; rows are still counted one by one.
fn grid_hypervolume(points: &[ObjectiveVector]) -> f64 {
    const RES: usize = 1000;
    let cell = 10.0 / RES as f64;
    let mut hits: u64 = 0;
    for i in 0..RES {
        let u = (i as f64 + 0.5) * cell;
        let mut tallest = f64::NEG_INFINITY;
        for p in points {
            if p[0] >= u && p[1] > tallest {
                tallest = p[1];
            }
        }
        if tallest == f64::NEG_INFINITY {
            continue;
        }
        for j in 0..RES {
            let v = (j as f64 + 0.5) * cell;
            if v <= tallest {
                hits += 1;
            }
        }
    }
    hits as f64 * cell * cell
}

#[test]
fn c05_hypervolume_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(505);
    let reference = ov(&[0.0, 0.0]);

    for case in 0..100 {
        let count = rng.random_range(1..=20);
        let raw: Vec<Solution> = (0..count)
            .map(|_| {
                // Coordinates on the grid pitch keep the cell-counting
                // estimate an exact area, so the two computations must agree
                // to rounding error — far inside the 0.5% budget.
                let x = rng.random_range(0..=1000) as f64 / 100.0;
                let y = rng.random_range(0..=1000) as f64 / 100.0;
                sol(&[x, y])
            })
            .collect();
        let front = nondominated_filter(2, raw).unwrap();
        let points = front.objectives();

        let exact = hypervolume(&points, &reference).unwrap();
        let grid = grid_hypervolume(&points);
        let scale = exact.max(grid);
        assert!(
            (exact - grid).abs() <= 0.005 * scale,
            "case {case}: exact {exact} vs grid {grid}"
        );
    }

    let elapsed = started.elapsed().as_secs_f64();
    println!("[acceptance] C5 hypervolume oracle equivalence (100 fronts, {elapsed:.1} s): PASS");
}

// ------------------------------------------------------------------- C6

/// Brute-force oracle: objective pairs of union members no other member
/// strictly dominates, sorted. Duplicates survive, as in the filter.
fn brute_union_keep(union: &[ObjectiveVector]) -> Vec<(f64, f64)> {
    let mut keep: Vec<(f64, f64)> = union
        .iter()
        .enumerate()
        .filter(|(i, z)| {
            !union
                .iter()
                .enumerate()
                .any(|(j, w)| j != *i && dominates(w, z))
        })
        .map(|(_, z)| (z[0], z[1]))
        .collect();
    keep.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keep
}

#[test]
fn c06_attainment_surface_properties() {
    let mut rng = ChaCha12Rng::seed_from_u64(606);

    for case in 0..200 {
        let mut fronts = Vec::new();
        for _ in 0..2 {
            let count = rng.random_range(1..=8);
            let raw: Vec<Solution> = (0..count)
                .map(|_| {
                    let a = rng.random_range(0..=20) as f64;
                    let b = rng.random_range(0..=20) as f64;
                    sol(&[a, b])
                })
                .collect();
            fronts.push(nondominated_filter(2, raw).unwrap());
        }
        let union: Vec<ObjectiveVector> = fronts
            .iter()
            .flat_map(|f| f.objectives())
            .collect();
        let runs = RunSet::new(fronts).unwrap();

        // Grand front == brute-force union filter.
        let mut grand: Vec<(f64, f64)> = psi0(&runs)
            .unwrap()
            .objectives()
            .iter()
            .map(|z| (z[0], z[1]))
            .collect();
        grand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        assert_eq!(grand, brute_union_keep(&union), "case {case}");

        // Every shared-attainment corner is attained by all runs, and an
        // upward nudge by 1e-6 in both coordinates no longer is.
        for z in psi1(&runs).unwrap() {
            assert_eq!(empirical_attainment(&z, &runs), 1.0, "case {case}: {z:?}");
            let nudged = ov(&[z[0] + 1e-6, z[1] + 1e-6]);
            assert!(
                empirical_attainment(&nudged, &runs) < 1.0,
                "case {case}: nudge of {z:?} still attained"
            );
        }
    }

    println!("[acceptance] C6 attainment surfaces (200 randomized 2-run sets): PASS");
}

// ------------------------------------------------------------------- C7

/// O(N³) oracle: peel non-dominated layers off the population one rank at
/// a time, re-testing dominance inside the remainder at every level.
fn peel_ranks(objectives: &[ObjectiveVector]) -> Vec<usize> {
    let n = objectives.len();
    let mut ranks = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while !remaining.is_empty() {
        let level: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| j != i && dominates(&objectives[j], &objectives[i]))
            })
            .collect();
        for &i in &level {
            ranks[i] = rank;
        }
        remaining.retain(|i| !level.contains(i));
        rank += 1;
    }
    ranks
}

#[test]
fn c07_nondominated_sorting_equivalence() {
    let mut rng = ChaCha12Rng::seed_from_u64(707);

    for case in 0..100 {
        let size = rng.random_range(1..=50);
        let objective_count = rng.random_range(2..=3);
        let population: Vec<ObjectiveVector> = (0..size)
            .map(|_| {
                let values: Vec<f64> = (0..objective_count)
                    .map(|_| rng.random_range(0..10) as f64)
                    .collect();
                ov(&values)
            })
            .collect();

        let fast = fast_nondominated_sort(&population);
        assert_eq!(fast.ranks, peel_ranks(&population), "case {case}");
    }

    println!("[acceptance] C7 non-dominated sorting equivalence (100 populations): PASS");
}

// ------------------------------------------------------------------- C8

fn normal_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}

#[test]
fn c08_cart_recovery() {
    let mut rng = ChaCha12Rng::seed_from_u64(808);

    // Single feature, boundary at 0.5, gap of at least 0.02 around it.
    let mut samples = Vec::new();
    let mut max_low = f64::NEG_INFINITY;
    let mut min_high = f64::INFINITY;
    for _ in 0..100 {
        let x = rng.random_range(0.0..=0.49);
        max_low = max_low.max(x);
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![x]).unwrap(),
            "low",
        ));
    }
    for _ in 0..100 {
        let x = rng.random_range(0.51..=1.0);
        min_high = min_high.min(x);
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![x]).unwrap(),
            "high",
        ));
    }
    let tree = cart_train(&samples, &CartConfig::default()).unwrap();
    let TreeNode::Split { feature, threshold, .. } = tree.root() else {
        panic!("separable data must split at the root");
    };
    assert_eq!(*feature, 0);
    assert!(
        max_low < *threshold && *threshold < min_high,
        "root threshold {threshold} outside the class gap ({max_low}, {min_high})"
    );
    assert!(
        (0.45..=0.55).contains(threshold),
        "root threshold {threshold} strayed from the boundary 0.5"
    );
    assert_eq!(tree.training_accuracy(), 1.0);

    // Two Gaussian clusters with means 4σ apart.
    let mut samples = Vec::new();
    for _ in 0..100 {
        let (x, y) = normal_pair(&mut rng);
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![x, y]).unwrap(),
            "core",
        ));
    }
    for _ in 0..100 {
        let (x, y) = normal_pair(&mut rng);
        samples.push(LabeledSample::new(
            ParameterVector::new(vec![x + 4.0, y]).unwrap(),
            "shifted",
        ));
    }
    let tree = cart_train(&samples, &CartConfig::default()).unwrap();
    assert!(
        tree.training_accuracy() >= 0.95,
        "got {}",
        tree.training_accuracy()
    );

    println!("[acceptance] C8 CART recovery (threshold exact, Gaussians ≥ 0.95): PASS");
}

// ------------------------------------------------------------------- C9

#[test]
fn c09_wta_endpoints_and_pipeline() {
    let started = Instant::now();

    // Endpoint sanity on the scoring rule itself: a model that drives every
    // channel to 1 never expresses a selection (f1 = 1, f2 = 0); a model
    // that drives every channel to 0 selects everything at once (f1 = 0,
    // f2 = 1). Both are exact.
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    let inputs: Vec<Vec<f64>> = (0..50)
        .map(|_| (0..3).map(|_| rng.random_range(0.0..=1.0)).collect())
        .collect();
    assert_eq!(wta_scores(&inputs, |s| vec![1.0; s.len()]), (1.0, 0.0));
    assert_eq!(wta_scores(&inputs, |s| vec![0.0; s.len()]), (0.0, 1.0));

    // End-to-end: optimize (3 runs), aggregate, analyze.
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("study.toml");
    fs::write(
        &config,
        "problem.name = wta\n\
         problem.channels = 3\n\
         problem.input_count = 60\n\
         problem.settle_iters = 40\n\
         algorithm.population_size = 24\n\
         algorithm.generations = 10\n\
         study.runs = 3\n\
         study.master_seed = 9\n\
         analysis.k = 2\n",
    )
    .unwrap();

    let optimized = cmd_optimize(&OptimizeArgs {
        config,
        jobs: Some(3),
        out: Some(tmp.path().join("study")),
    })
    .unwrap();
    assert_eq!(optimized.archive_paths.len(), 3);

    // Every front lies inside [0, 1]² on the raw (minimized) scale.
    for path in &optimized.archive_paths {
        let archive: RunArchive = load_json(path).unwrap();
        for member in archive.front.members() {
            let raw = externalize(&archive.objectives, &member.objectives);
            for (k, v) in raw.iter().enumerate() {
                assert!(
                    (0.0..=1.0).contains(v),
                    "{}: objective {k} = {v} outside [0, 1]",
                    path.display()
                );
            }
        }
    }

    let aggregated = cmd_aggregate(&AggregateArgs {
        manifest: optimized.manifest_path.clone(),
        epsilon: None,
        threshold: None,
        out: None,
    })
    .unwrap();
    let verdict = aggregated.verdict.expect("three runs yield a verdict");

    let analyzed = cmd_analyze(&AnalyzeArgs {
        manifest: Some(optimized.manifest_path),
        front_csv: None,
        label_column: None,
        out: Some(tmp.path().join("analysis")),
        k: None,
        autocorrelation: false,
        p_norm: None,
        cart: false,
        balance_factor: None,
        neighborhood_objective: None,
        neighborhood_tolerance: None,
        kinematics: None,
        eval_seed: None,
    })
    .unwrap();
    assert!(analyzed.compromise.is_some());

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "took {elapsed:.1} s, budget is 120 s");
    println!(
        "[acceptance] C9 selection-network endpoints + pipeline ({verdict:?}, {elapsed:.1} s): PASS"
    );
}

// ------------------------------------------------------------------ C10

#[test]
fn c10_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("study.toml");
    fs::write(
        &config,
        "problem.name = synthetic\n\
         algorithm.population_size = 12\n\
         algorithm.generations = 6\n\
         study.runs = 2\n\
         study.master_seed = 10\n",
    )
    .unwrap();
    let args = OptimizeArgs {
        config,
        jobs: Some(2),
        out: Some(tmp.path().join("study")),
    };

    let first = cmd_optimize(&args).unwrap();
    let snapshot: Vec<Vec<u8>> = first
        .archive_paths
        .iter()
        .map(|p| fs::read(p).unwrap())
        .collect();

    let second = cmd_optimize(&args).unwrap();
    for (path, before) in second.archive_paths.iter().zip(&snapshot) {
        assert_eq!(
            &fs::read(path).unwrap(),
            before,
            "{} not byte-identical across reruns",
            path.display()
        );
    }

    // A run set made of one front twice has zero disparity everywhere.
    let archive: RunArchive = load_json(&first.archive_paths[0]).unwrap();
    let runs = RunSet::new(vec![archive.front.clone(), archive.front]).unwrap();
    let report = disparity_report(&runs, DisparityMetric::RawEuclidean).unwrap();
    assert!(!report.per_point.is_empty());
    assert!(
        report.per_point.iter().all(|&d| d == 0.0),
        "nonzero disparity on duplicated runs: {:?}",
        report.per_point
    );
    assert_eq!(report.relative_difference, Some(0.0));

    println!("[acceptance] C10 determinism (byte-identical reruns, zero self-disparity): PASS");
}
