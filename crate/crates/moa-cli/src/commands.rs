//! The four subcommands, written as library functions so tests can drive
//! them without spawning processes. Each prints its human-readable summary
//! to stdout (deterministic for identical inputs), timing to stderr, and
//! returns the structured result.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use moa::aggregate::{
    conservative_front, convergence_check, disparity_report, front_compare, ComparisonVerdict,
    ConvergenceVerdict, DisparityMetric, DisparityReport,
};
use moa::indicators::{psi0, RunSet};
use moa::mining::{
    balance_by_replication, cart_train, kmeans, parameter_autocorrelation, select_compromise,
    select_neighborhood, CompromiseChoice, LabeledSample, PNorm,
};
use moa::pareto::{Front, SearchSpace, Solution};
use moa::problems::{build_problem, externalize, internalize, ObjectiveSpec, Problem};

use crate::archive::{
    archive_file_name, load_archives, load_manifest, manifest_path, save_json, RunArchive,
    StudyManifest, FORMAT_VERSION,
};
use crate::config::{parse_study_config, AnalysisConfig, StudyConfig};
use crate::csv_io::{
    objective_header, read_front_csv, read_kinematics_csv, write_corners_csv, write_csv,
    write_front_csv,
};
use crate::{config_err, data_err, CliError, CliResult};

fn fmt_point(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("({})", parts.join(", "))
}

// ---------------------------------------------------------------- optimize

#[derive(Debug, Clone)]
pub struct OptimizeArgs {
    pub config: PathBuf,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct OptimizeOutput {
    pub archive_paths: Vec<PathBuf>,
    pub manifest_path: PathBuf,
}

/// Resolve the search space a study optimizes over: the problem's declared
/// space with any per-dimension overrides applied.
fn resolve_space(cfg: &StudyConfig, problem: &dyn Problem) -> CliResult<SearchSpace> {
    let mut dims = problem.search_space().dims().to_vec();
    for &(index, lo, hi) in &cfg.space_overrides {
        let Some(dim) = dims.get_mut(index) else {
            return Err(config_err(format!(
                "space.dim{index}: the problem has only {} dimensions",
                problem.search_space().len()
            )));
        };
        dim.lower = lo;
        dim.upper = hi;
    }
    let space = SearchSpace::new(dims).map_err(config_err)?;
    if !space.within(problem.search_space()) {
        return Err(config_err(format!(
            "space overrides must stay within the problem's declared space {:?}",
            problem.search_space().dims()
        )));
    }
    Ok(space)
}

pub fn cmd_optimize(args: &OptimizeArgs) -> CliResult<OptimizeOutput> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| config_err(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_study_config(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if args.jobs == Some(0) {
        return Err(config_err("--jobs must be at least 1"));
    }

    let problem = build_problem(&cfg.problem)
        .map_err(|e| config_err(format!("problem.name: {e}")))?;
    let space = resolve_space(&cfg, &problem)?;
    cfg.algorithm.validate().map_err(config_err)?;

    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| data_err(format!("cannot create {}: {e}", cfg.output_dir.display())))?;

    let do_run = |i: usize| -> CliResult<(RunArchive, f64)> {
        let mut algorithm = cfg.algorithm.clone();
        algorithm.seed = cfg.master_seed.wrapping_add(i as u64);
        let started = Instant::now();
        let out = moa::nsga2::run(&problem, &space, &algorithm, i as u64)
            .map_err(config_err)?;
        let elapsed = started.elapsed().as_secs_f64();
        Ok((
            RunArchive {
                format_version: FORMAT_VERSION,
                study: cfg.clone(),
                run_index: i,
                seed: algorithm.seed,
                space: space.clone(),
                objectives: problem.objectives().to_vec(),
                front: out.front,
                evaluations: out.evaluations,
                nonfinite_evaluations: out.nonfinite_evaluations,
            },
            elapsed,
        ))
    };

    let run_all = || (0..cfg.runs).into_par_iter().map(do_run).collect::<Vec<_>>();
    let results = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| config_err(format!("cannot build a {jobs}-thread pool: {e}")))?
            .install(run_all),
        None => run_all(),
    };

    let mut archive_paths = Vec::with_capacity(cfg.runs);
    let mut names = Vec::with_capacity(cfg.runs);
    for result in results {
        let (archive, seconds) = result?;
        let name = archive_file_name(archive.run_index);
        let path = cfg.output_dir.join(&name);
        save_json(&path, &archive)?;
        eprintln!(
            "run {}: {seconds:.2} s, {} evaluations ({} non-finite), front size {}",
            archive.run_index,
            archive.evaluations,
            archive.nonfinite_evaluations,
            archive.front.len()
        );
        println!("wrote {}", path.display());
        names.push(name);
        archive_paths.push(path);
    }

    let first: RunArchive = crate::archive::load_json(&archive_paths[0])?;
    let manifest = StudyManifest {
        format_version: FORMAT_VERSION,
        study: cfg.clone(),
        space: space.clone(),
        objectives: first.objectives.clone(),
        archives: names,
    };
    let mpath = manifest_path(&cfg.output_dir);
    save_json(&mpath, &manifest)?;
    println!("wrote {}", mpath.display());
    Ok(OptimizeOutput {
        archive_paths,
        manifest_path: mpath,
    })
}

// --------------------------------------------------------------- aggregate

#[derive(Debug, Clone)]
pub struct AggregateArgs {
    pub manifest: PathBuf,
    pub epsilon: Option<f64>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct AggregateOutput {
    pub report: Option<DisparityReport>,
    pub verdict: Option<ConvergenceVerdict>,
    pub files: Vec<PathBuf>,
}

fn front_rows(front: &Front) -> Vec<(u64, &Solution)> {
    front
        .members()
        .iter()
        .map(|m| (m.provenance.run, m))
        .collect()
}

fn param_names(space: &SearchSpace) -> Vec<String> {
    space.dims().iter().map(|d| d.name.clone()).collect()
}

pub fn cmd_aggregate(args: &AggregateArgs) -> CliResult<AggregateOutput> {
    if let Some(t) = args.threshold {
        if !(t > 0.0 && t < 1.0) {
            return Err(config_err(format!(
                "--threshold must lie in (0, 1), got {t}"
            )));
        }
    }
    if let Some(e) = args.epsilon {
        if e.is_nan() || e < 0.0 {
            return Err(config_err(format!(
                "--epsilon must be non-negative, got {e}"
            )));
        }
    }

    let manifest = load_manifest(&args.manifest)?;
    let archives = load_archives(&args.manifest, &manifest)?;
    let threshold = args.threshold.unwrap_or(manifest.study.threshold);
    let epsilon = args.epsilon.or(manifest.study.epsilon);

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| args.manifest.parent().unwrap_or(Path::new(".")).to_path_buf());
    fs::create_dir_all(&out_dir)
        .map_err(|e| data_err(format!("cannot create {}: {e}", out_dir.display())))?;

    let runs = RunSet::new(archives.iter().map(|a| a.front.clone()).collect())
        .map_err(data_err)?;
    let names = param_names(&manifest.space);
    let specs = &manifest.objectives;
    let mut files = Vec::new();

    let grand = psi0(&runs).map_err(data_err)?;
    let psi0_path = out_dir.join("psi0.csv");
    write_front_csv(&psi0_path, &front_rows(&grand), &names, specs)?;
    files.push(psi0_path);

    println!(
        "runs: {}, objectives: {}, grand front size: {}",
        runs.len(),
        runs.objective_count(),
        grand.len()
    );

    if runs.len() < 2 {
        if epsilon.is_some() {
            return Err(data_err(
                "conservative filtering needs at least 2 runs, found 1",
            ));
        }
        println!("single run: disparity and convergence need at least 2 runs; wrote the grand front only");
        return Ok(AggregateOutput {
            report: None,
            verdict: None,
            files,
        });
    }

    let report = disparity_report(&runs, DisparityMetric::RawEuclidean).map_err(data_err)?;
    let verdict = convergence_check(&runs, threshold).map_err(data_err)?;

    let psi1_path = out_dir.join("psi1.csv");
    write_corners_csv(&psi1_path, &report.psi1, specs)?;
    files.push(psi1_path);

    let report_path = out_dir.join("report.json");
    save_json(&report_path, &report)?;
    files.push(report_path);

    if let Some(eps) = epsilon {
        let kept = conservative_front(&report.psi0, &report.per_point, eps).map_err(data_err)?;
        let path = out_dir.join("psicons.csv");
        write_front_csv(&path, &front_rows(&kept), &names, specs)?;
        println!(
            "conservative front (epsilon {eps}): kept {} of {} members",
            kept.len(),
            report.psi0.len()
        );
        files.push(path);
    }

    println!(
        "hypervolume (vs conservative nadir {}): best surface {}, worst surface {}",
        fmt_point(report.eta_bar.values()),
        report.hv_psi0,
        report.hv_psi1
    );
    match report.relative_difference {
        Some(d) => println!("relative hypervolume difference: {:.5}%", d * 100.0),
        None => println!("relative hypervolume difference: undefined"),
    }
    match &verdict {
        ConvergenceVerdict::Converged => println!("verdict: converged"),
        ConvergenceVerdict::RerunAdvised { diagnostic } => {
            println!("verdict: rerun advised — {diagnostic}")
        }
    }

    Ok(AggregateOutput {
        report: Some(report),
        verdict: Some(verdict),
        files,
    })
}

// ----------------------------------------------------------------- analyze

#[derive(Debug, Clone, Default)]
pub struct AnalyzeArgs {
    pub manifest: Option<PathBuf>,
    pub front_csv: Option<PathBuf>,
    pub label_column: Option<String>,
    pub out: Option<PathBuf>,
    pub k: Option<usize>,
    pub autocorrelation: bool,
    pub p_norm: Option<PNorm>,
    pub cart: bool,
    pub balance_factor: Option<u64>,
    pub neighborhood_objective: Option<usize>,
    pub neighborhood_tolerance: Option<f64>,
    pub kinematics: Option<PathBuf>,
    pub eval_seed: Option<u64>,
}

#[derive(Debug, Default)]
pub struct AnalyzeOutput {
    pub files: Vec<PathBuf>,
    pub kmeans_wcss: Option<f64>,
    pub autocorrelation: Vec<(String, Option<f64>)>,
    pub compromise: Option<CompromiseChoice>,
    pub cart_accuracy: Option<f64>,
    /// Weighted per-label counts after balancing, sorted by label.
    pub effective_counts: Option<Vec<(String, u64)>>,
    pub neighborhood_size: Option<usize>,
    pub aero_rows: usize,
}

/// The front being analyzed plus everything needed to label and report it.
struct AnalysisInput {
    front: Front,
    specs: Vec<ObjectiveSpec>,
    param_names: Vec<String>,
    defaults: AnalysisConfig,
    /// Labels per front member, when available (plausibility for the
    /// selection-network problem, or a CSV label column).
    labels: Option<Vec<String>>,
    /// Why labels are unavailable, for error messages.
    label_gap: String,
}

fn load_from_manifest(args: &AnalyzeArgs, path: &Path) -> CliResult<AnalysisInput> {
    let manifest = load_manifest(path)?;
    let archives = load_archives(path, &manifest)?;
    let runs = RunSet::new(archives.iter().map(|a| a.front.clone()).collect())
        .map_err(data_err)?;
    let front = psi0(&runs).map_err(data_err)?;

    let mut problem_cfg = manifest.study.problem.clone();
    if let Some(seed) = args.eval_seed {
        problem_cfg.eval_seed = seed;
    }
    let problem = build_problem(&problem_cfg)
        .map_err(|e| data_err(format!("{}: embedded problem config: {e}", path.display())))?;
    let (labels, label_gap) = match problem.as_wta() {
        Some(wta) => {
            let labels = front
                .members()
                .iter()
                .map(|m| {
                    if wta.plausibility(m.parameters.values()).plausible {
                        "plausible".to_string()
                    } else {
                        "implausible".to_string()
                    }
                })
                .collect();
            (Some(labels), String::new())
        }
        None => (
            None,
            format!(
                "problem '{}' has no plausibility rule; use --front-csv with --label-column",
                manifest.study.problem.name
            ),
        ),
    };

    Ok(AnalysisInput {
        front,
        specs: manifest.objectives.clone(),
        param_names: param_names(&manifest.space),
        defaults: manifest.study.analysis.clone(),
        labels,
        label_gap,
    })
}

fn load_from_front_csv(args: &AnalyzeArgs, path: &Path) -> CliResult<AnalysisInput> {
    let csv = read_front_csv(path, args.label_column.as_deref())?;
    let mut members = Vec::with_capacity(csv.parameters.len());
    for (i, raw) in csv.raw_objectives.iter().enumerate() {
        let Some(objectives) = internalize(&csv.specs, raw) else {
            return Err(data_err(format!(
                "{} row {}: non-finite objective value",
                path.display(),
                i + 2
            )));
        };
        members.push(Solution {
            parameters: csv.parameters[i].clone(),
            objectives,
            provenance: moa::pareto::Provenance {
                run: csv.runs[i],
                ..Default::default()
            },
        });
    }
    let front = Front::new(csv.specs.len(), members)
        .map_err(|e| data_err(format!("{}: {e}", path.display())))?;
    Ok(AnalysisInput {
        front,
        specs: csv.specs,
        param_names: csv.param_names,
        defaults: AnalysisConfig::default(),
        labels: csv.labels,
        label_gap: "supply --label-column naming a CSV column".to_string(),
    })
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<AnalyzeOutput> {
    if args.manifest.is_some() && args.front_csv.is_some() {
        return Err(config_err("choose one of --manifest or --front-csv, not both"));
    }
    if args.manifest.is_none() && args.front_csv.is_none() && args.kinematics.is_none() {
        return Err(config_err(
            "nothing to analyze: pass --manifest, --front-csv, or --kinematics",
        ));
    }
    if args.label_column.is_some() && args.front_csv.is_none() {
        return Err(config_err("--label-column requires --front-csv"));
    }
    if args.neighborhood_tolerance.is_some() && args.neighborhood_objective.is_none() {
        return Err(config_err(
            "--neighborhood-tolerance requires --neighborhood-objective",
        ));
    }

    let input = match (&args.manifest, &args.front_csv) {
        (Some(path), _) => Some(load_from_manifest(args, path)?),
        (None, Some(path)) => Some(load_from_front_csv(args, path)?),
        (None, None) => None,
    };

    let out_dir = args.out.clone().unwrap_or_else(|| {
        let anchor = args
            .manifest
            .as_deref()
            .or(args.front_csv.as_deref())
            .or(args.kinematics.as_deref())
            .expect("at least one input path");
        anchor.parent().unwrap_or(Path::new(".")).to_path_buf()
    });
    fs::create_dir_all(&out_dir)
        .map_err(|e| data_err(format!("cannot create {}: {e}", out_dir.display())))?;

    // With no analysis flags at all, run everything that applies.
    let explicit = args.k.is_some()
        || args.autocorrelation
        || args.p_norm.is_some()
        || args.cart
        || args.neighborhood_objective.is_some()
        || args.kinematics.is_some();
    let suite = !explicit;

    let mut output = AnalyzeOutput::default();

    if let Some(input) = &input {
        if args.k.is_some() || suite {
            run_kmeans(args, input, &out_dir, &mut output, args.k.is_some())?;
        }
        if args.autocorrelation || suite {
            run_autocorrelation(input, &out_dir, &mut output, args.autocorrelation)?;
        }
        if args.p_norm.is_some() || suite {
            run_compromise(args, input, &out_dir, &mut output)?;
        }
        if args.cart || suite {
            run_cart(args, input, &out_dir, &mut output, args.cart)?;
        }
        if let Some(objective) = args.neighborhood_objective {
            run_neighborhood(args, input, objective, &out_dir, &mut output)?;
        }
    }

    if let Some(kin) = &args.kinematics {
        run_aero(kin, &out_dir, &mut output)?;
    }

    Ok(output)
}

fn run_kmeans(
    args: &AnalyzeArgs,
    input: &AnalysisInput,
    out_dir: &Path,
    output: &mut AnalyzeOutput,
    explicit: bool,
) -> CliResult<()> {
    let k = args.k.unwrap_or(input.defaults.k);
    let samples: Vec<Vec<f64>> = input
        .front
        .members()
        .iter()
        .map(|m| m.parameters.values().to_vec())
        .collect();
    let seed = args.eval_seed.unwrap_or(0);
    let clustering = match kmeans(&samples, k, seed, 100) {
        Ok(c) => c,
        Err(e) if !explicit => {
            println!("kmeans skipped: {e}");
            return Ok(());
        }
        Err(e) => return Err(data_err(format!("kmeans: {e}"))),
    };

    let mut header = vec!["member".to_string(), "cluster".to_string()];
    header.extend(input.param_names.iter().map(|n| format!("p:{n}")));
    let rows: Vec<Vec<String>> = input
        .front
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut row = vec![i.to_string(), clustering.assignment[i].to_string()];
            row.extend(m.parameters.values().iter().map(|v| format!("{v}")));
            row
        })
        .collect();
    let path = out_dir.join("kmeans.csv");
    write_csv(&path, &header, &rows)?;
    output.files.push(path);

    let mut header = vec!["cluster".to_string()];
    header.extend(input.param_names.iter().map(|n| format!("p:{n}")));
    let rows: Vec<Vec<String>> = clustering
        .centroids
        .iter()
        .enumerate()
        .map(|(c, centroid)| {
            let mut row = vec![c.to_string()];
            row.extend(centroid.iter().map(|v| format!("{v}")));
            row
        })
        .collect();
    let path = out_dir.join("kmeans_centroids.csv");
    write_csv(&path, &header, &rows)?;
    output.files.push(path);

    println!("kmeans: k={k}, wcss={}", clustering.wcss);
    output.kmeans_wcss = Some(clustering.wcss);
    Ok(())
}

fn run_autocorrelation(
    input: &AnalysisInput,
    out_dir: &Path,
    output: &mut AnalyzeOutput,
    explicit: bool,
) -> CliResult<()> {
    if input.front.len() < 3 {
        let msg = format!(
            "autocorrelation needs at least 3 members, found {}",
            input.front.len()
        );
        if explicit {
            return Err(data_err(msg));
        }
        println!("autocorrelation skipped: {msg}");
        return Ok(());
    }
    let header = vec![
        "parameter".to_string(),
        "coefficient".to_string(),
        "defined".to_string(),
    ];
    let mut rows = Vec::new();
    for (j, name) in input.param_names.iter().enumerate() {
        let r = parameter_autocorrelation(&input.front, j, 0).map_err(data_err)?;
        rows.push(vec![
            name.clone(),
            r.map(|v| format!("{v}")).unwrap_or_default(),
            r.is_some().to_string(),
        ]);
        output.autocorrelation.push((name.clone(), r));
    }
    let path = out_dir.join("autocorrelation.csv");
    write_csv(&path, &header, &rows)?;
    output.files.push(path);
    let summary: Vec<String> = output
        .autocorrelation
        .iter()
        .map(|(n, r)| match r {
            Some(v) => format!("{n}={v:.3}"),
            None => format!("{n}=undefined"),
        })
        .collect();
    println!("autocorrelation (along objective 0): {}", summary.join(", "));
    Ok(())
}

fn run_compromise(
    args: &AnalyzeArgs,
    input: &AnalysisInput,
    out_dir: &Path,
    output: &mut AnalyzeOutput,
) -> CliResult<()> {
    let norm = args.p_norm.unwrap_or(input.defaults.p_norm);
    let choice = select_compromise(&input.front, norm).map_err(data_err)?;
    let path = out_dir.join("compromise.csv");
    write_front_csv(
        &path,
        &[(choice.member.provenance.run, &choice.member)],
        &input.param_names,
        &input.specs,
    )?;
    output.files.push(path);
    let dropped = if choice.dropped_objectives.is_empty() {
        "none".to_string()
    } else {
        format!("{:?}", choice.dropped_objectives)
    };
    println!(
        "compromise ({norm:?}): parameters {}, objectives {}, dropped objectives: {dropped}",
        fmt_point(choice.member.parameters.values()),
        fmt_point(&externalize(&input.specs, &choice.member.objectives)),
    );
    output.compromise = Some(choice);
    Ok(())
}

fn run_cart(
    args: &AnalyzeArgs,
    input: &AnalysisInput,
    out_dir: &Path,
    output: &mut AnalyzeOutput,
    explicit: bool,
) -> CliResult<()> {
    let Some(labels) = &input.labels else {
        if explicit {
            return Err(CliError::Incompatible(format!(
                "cart labeling needs class labels: {}",
                input.label_gap
            )));
        }
        println!("cart skipped: no labels available ({})", input.label_gap);
        return Ok(());
    };

    let mut samples: Vec<LabeledSample> = input
        .front
        .members()
        .iter()
        .zip(labels)
        .map(|(m, label)| LabeledSample::new(m.parameters.clone(), label.clone()))
        .collect();

    let factor = args.balance_factor.unwrap_or(input.defaults.balance_factor);
    let mut class_weights: Vec<(String, u64)> = Vec::new();
    for s in &samples {
        match class_weights.iter_mut().find(|(l, _)| *l == s.label) {
            Some((_, w)) => *w += s.weight,
            None => class_weights.push((s.label.clone(), s.weight)),
        }
    }
    class_weights.sort();
    if factor > 1 && class_weights.len() >= 2 {
        let minority = class_weights
            .iter()
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(l, _)| l.clone())
            .expect("at least two classes");
        samples = balance_by_replication(&samples, factor, &minority).map_err(data_err)?;
        class_weights.clear();
        for s in &samples {
            match class_weights.iter_mut().find(|(l, _)| *l == s.label) {
                Some((_, w)) => *w += s.weight,
                None => class_weights.push((s.label.clone(), s.weight)),
            }
        }
        class_weights.sort();
    }

    let tree = cart_train(&samples, &input.defaults.cart).map_err(data_err)?;

    let dot = tree.to_dot(&input.param_names).map_err(data_err)?;
    let dot_path = out_dir.join("cart.dot");
    crate::csv_io::write_atomic(&dot_path, &format!("{dot}\n"))?;
    output.files.push(dot_path);

    let rules = tree.rules(&input.param_names).map_err(data_err)?;
    let counts_line = class_weights
        .iter()
        .map(|(l, w)| format!("{l}={w}"))
        .collect::<Vec<_>>()
        .join(" ");
    let mut text = String::new();
    for rule in &rules {
        text.push_str(rule);
        text.push('\n');
    }
    text.push_str(&format!(
        "\ntraining accuracy: {:.1}%\neffective counts: {counts_line}\n",
        tree.training_accuracy() * 100.0
    ));
    let rules_path = out_dir.join("cart_rules.txt");
    crate::csv_io::write_atomic(&rules_path, &text)?;
    output.files.push(rules_path);

    println!(
        "cart: depth {}, training accuracy {:.1}%, effective counts: {counts_line}",
        tree.depth(),
        tree.training_accuracy() * 100.0
    );
    for rule in &rules {
        println!("  {rule}");
    }
    output.cart_accuracy = Some(tree.training_accuracy());
    output.effective_counts = Some(class_weights);
    Ok(())
}

fn run_neighborhood(
    args: &AnalyzeArgs,
    input: &AnalysisInput,
    objective: usize,
    out_dir: &Path,
    output: &mut AnalyzeOutput,
) -> CliResult<()> {
    if objective >= input.specs.len() {
        return Err(config_err(format!(
            "--neighborhood-objective {objective} out of range: the study has {} objectives",
            input.specs.len()
        )));
    }
    let tol = args
        .neighborhood_tolerance
        .unwrap_or(input.defaults.neighborhood_tolerance);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(config_err(format!(
            "--neighborhood-tolerance must be positive and finite, got {tol}"
        )));
    }
    let sense = input.specs[objective].sense;
    let hood = select_neighborhood(&input.front, objective, tol, sense).map_err(data_err)?;
    let path = out_dir.join("neighborhood.csv");
    write_front_csv(&path, &front_rows(&hood.front), &input.param_names, &input.specs)?;
    output.files.push(path);
    println!(
        "neighborhood of {} (tolerance {tol}): kept {} of {} members{}",
        objective_header(&input.specs[objective]),
        hood.front.len(),
        input.front.len(),
        if hood.absolute_fallback {
            " — best value 0, tolerance applied as absolute width"
        } else {
            ""
        }
    );
    output.neighborhood_size = Some(hood.front.len());
    Ok(())
}

fn run_aero(kin_path: &Path, out_dir: &Path, output: &mut AnalyzeOutput) -> CliResult<()> {
    let records = read_kinematics_csv(kin_path)?;
    let consts = moa::problems::AeroConstants::default();
    let header: Vec<String> = [
        "a_DI", "p_DI", "r_TWi", "a_TWi", "p_TWi", "r_TWe", "a_TWe", "p_TWe", "U", "Re", "St",
        "k", "kappa_i", "kappa_e",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut rows = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let f = moa::problems::aero_features(rec, &consts)
            .map_err(|e| data_err(format!("{} row {}: {e}", kin_path.display(), i + 2)))?;
        rows.push(
            [
                rec.a_di,
                rec.p_di,
                rec.r_twi,
                rec.a_twi,
                rec.p_twi,
                rec.r_twe,
                rec.a_twe,
                rec.p_twe,
                rec.cruise_speed,
                f.reynolds,
                f.strouhal,
                f.reduced_frequency,
                f.kappa1,
                f.kappa2,
            ]
            .iter()
            .map(|v| format!("{v}"))
            .collect(),
        );
    }
    let path = out_dir.join("aero_features.csv");
    write_csv(&path, &header, &rows)?;
    output.files.push(path);
    println!("aero features: {} rows", rows.len());
    output.aero_rows = rows.len();
    Ok(())
}

// ----------------------------------------------------------------- compare

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

fn grand_front(path: &Path) -> CliResult<(Front, Vec<ObjectiveSpec>)> {
    let manifest = load_manifest(path)?;
    let archives = load_archives(path, &manifest)?;
    let runs = RunSet::new(archives.iter().map(|a| a.front.clone()).collect())
        .map_err(data_err)?;
    Ok((psi0(&runs).map_err(data_err)?, manifest.objectives))
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<ComparisonVerdict> {
    let (a, specs_a) = grand_front(&args.first)?;
    let (b, specs_b) = grand_front(&args.second)?;
    if specs_a.len() != specs_b.len() {
        return Err(CliError::Incompatible(format!(
            "objective counts differ: {} vs {}",
            specs_a.len(),
            specs_b.len()
        )));
    }
    let senses_a: Vec<_> = specs_a.iter().map(|s| s.sense).collect();
    let senses_b: Vec<_> = specs_b.iter().map(|s| s.sense).collect();
    if senses_a != senses_b {
        return Err(CliError::Incompatible(format!(
            "objective orientations differ: {senses_a:?} vs {senses_b:?}"
        )));
    }

    let verdict = front_compare(&a, &b).map_err(data_err)?;
    match &verdict {
        ComparisonVerdict::FirstDominates => println!(
            "first dominates: every grand-front member of the second study is strictly dominated"
        ),
        ComparisonVerdict::SecondDominates => println!(
            "second dominates: every grand-front member of the first study is strictly dominated"
        ),
        ComparisonVerdict::Incomparable {
            first_witnesses,
            second_witnesses,
        } => {
            println!(
                "incomparable: {} witnesses from the first study, {} from the second",
                first_witnesses.len(),
                second_witnesses.len()
            );
            for w in first_witnesses {
                println!("  first:  {}", fmt_point(&externalize(&specs_a, w)));
            }
            for w in second_witnesses {
                println!("  second: {}", fmt_point(&externalize(&specs_a, w)));
            }
        }
    }
    Ok(verdict)
}
