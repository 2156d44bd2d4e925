//! Run archives and the study manifest: self-describing JSON documents
//! that embed the full study configuration and seeds, so they reload
//! without the original config file. All writes are atomic (temp file in
//! the target directory, then rename).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use moa::pareto::{Front, SearchSpace};
use moa::problems::ObjectiveSpec;

use crate::config::StudyConfig;
use crate::{data_err, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// One optimization run: final front plus enough context to reproduce it.
/// Wall-clock time is deliberately absent — archives must be byte-identical
/// across reruns of the same config; timing is reported on stderr instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArchive {
    pub format_version: u32,
    pub study: StudyConfig,
    pub run_index: usize,
    /// Seed actually used for this run (master_seed + run_index).
    pub seed: u64,
    /// The search space the run optimized over, overrides applied.
    pub space: SearchSpace,
    pub objectives: Vec<ObjectiveSpec>,
    /// Internal orientation (every objective maximized).
    pub front: Front,
    pub evaluations: u64,
    pub nonfinite_evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyManifest {
    pub format_version: u32,
    pub study: StudyConfig,
    pub space: SearchSpace,
    pub objectives: Vec<ObjectiveSpec>,
    /// Archive file names relative to the manifest's directory.
    pub archives: Vec<String>,
}

/// Serialize as pretty JSON and write atomically.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| data_err(format!("cannot serialize {}: {e}", path.display())))?;
    body.push('\n');
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, body).map_err(|e| data_err(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| data_err(format!("cannot move {} into place: {e}", tmp.display())))?;
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let body = fs::read_to_string(path)
        .map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| data_err(format!("cannot parse {}: {e}", path.display())))
}

pub fn load_manifest(path: &Path) -> CliResult<StudyManifest> {
    let m: StudyManifest = load_json(path)?;
    if m.format_version != FORMAT_VERSION {
        return Err(data_err(format!(
            "{}: unsupported format version {} (expected {FORMAT_VERSION})",
            path.display(),
            m.format_version
        )));
    }
    Ok(m)
}

/// Load every archive a manifest lists, sorted by run index so the result
/// does not depend on listing order.
pub fn load_archives(manifest_path: &Path, manifest: &StudyManifest) -> CliResult<Vec<RunArchive>> {
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut archives = Vec::with_capacity(manifest.archives.len());
    for name in &manifest.archives {
        let path = dir.join(name);
        let a: RunArchive = load_json(&path)?;
        if a.format_version != FORMAT_VERSION {
            return Err(data_err(format!(
                "{}: unsupported format version {} (expected {FORMAT_VERSION})",
                path.display(),
                a.format_version
            )));
        }
        archives.push(a);
    }
    archives.sort_by_key(|a| a.run_index);
    for (i, a) in archives.iter().enumerate() {
        let n = a.objectives.len();
        let first = archives[0].objectives.len();
        if n != first {
            return Err(data_err(format!(
                "mixed objective counts across archives: run {} has {n}, run {} has {first}",
                a.run_index, archives[0].run_index
            )));
        }
        if a.objectives != archives[0].objectives {
            return Err(data_err(format!(
                "archives disagree on objective names or senses (run {} vs run {})",
                a.run_index, archives[0].run_index
            )));
        }
        if archives.iter().take(i).any(|b| b.run_index == a.run_index) {
            return Err(data_err(format!(
                "manifest lists run {} more than once",
                a.run_index
            )));
        }
    }
    Ok(archives)
}

pub fn archive_file_name(run_index: usize) -> String {
    format!("run_{run_index:03}.json")
}

pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use moa::pareto::{ObjectiveVector, ParameterVector, Provenance, Solution};

    fn tiny_archive(run_index: usize) -> RunArchive {
        let space = SearchSpace::from_bounds(&[(0.0, 1.0)]).unwrap();
        let front = Front::new(
            2,
            vec![Solution {
                parameters: ParameterVector::new(vec![0.5]).unwrap(),
                objectives: ObjectiveVector::new(vec![0.75, 0.75]).unwrap(),
                provenance: Provenance {
                    run: run_index as u64,
                    generation: 3,
                    evaluation: 17,
                },
            }],
        )
        .unwrap();
        RunArchive {
            format_version: FORMAT_VERSION,
            study: StudyConfig {
                problem: moa::problems::ProblemConfig {
                    name: "synthetic".into(),
                    ..Default::default()
                },
                ..Default::default()
            },
            run_index,
            seed: 40 + run_index as u64,
            space,
            objectives: vec![
                ObjectiveSpec::maximize("f1"),
                ObjectiveSpec::maximize("f2"),
            ],
            front,
            evaluations: 20,
            nonfinite_evaluations: 0,
        }
    }

    #[test]
    fn archives_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let a = tiny_archive(0);
        let path = dir.path().join(archive_file_name(0));
        save_json(&path, &a).unwrap();
        let b: RunArchive = load_json(&path).unwrap();
        assert_eq!(a, b);
        // No stray temp file remains after the atomic rename.
        assert!(!dir.path().join("run_000.json.tmp").exists());
    }

    #[test]
    fn saving_twice_produces_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let a = tiny_archive(1);
        let p1 = dir.path().join("one.json");
        let p2 = dir.path().join("two.json");
        save_json(&p1, &a).unwrap();
        save_json(&p2, &a).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    }

    #[test]
    fn manifest_load_sorts_and_validates() {
        let dir = tempfile::tempdir().unwrap();
        let a0 = tiny_archive(0);
        let a1 = tiny_archive(1);
        save_json(&dir.path().join(archive_file_name(0)), &a0).unwrap();
        save_json(&dir.path().join(archive_file_name(1)), &a1).unwrap();
        // Listed out of order on purpose.
        let manifest = StudyManifest {
            format_version: FORMAT_VERSION,
            study: a0.study.clone(),
            space: a0.space.clone(),
            objectives: a0.objectives.clone(),
            archives: vec![archive_file_name(1), archive_file_name(0)],
        };
        let mpath = manifest_path(dir.path());
        save_json(&mpath, &manifest).unwrap();
        let loaded = load_manifest(&mpath).unwrap();
        let archives = load_archives(&mpath, &loaded).unwrap();
        assert_eq!(archives.len(), 2);
        assert_eq!(archives[0].run_index, 0);
        assert_eq!(archives[1].run_index, 1);
    }

    #[test]
    fn mixed_objective_counts_are_a_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let a0 = tiny_archive(0);
        let mut a1 = tiny_archive(1);
        a1.objectives.push(ObjectiveSpec::minimize("extra"));
        save_json(&dir.path().join(archive_file_name(0)), &a0).unwrap();
        save_json(&dir.path().join(archive_file_name(1)), &a1).unwrap();
        let manifest = StudyManifest {
            format_version: FORMAT_VERSION,
            study: a0.study.clone(),
            space: a0.space.clone(),
            objectives: a0.objectives.clone(),
            archives: vec![archive_file_name(0), archive_file_name(1)],
        };
        let mpath = manifest_path(dir.path());
        save_json(&mpath, &manifest).unwrap();
        let loaded = load_manifest(&mpath).unwrap();
        let err = load_archives(&mpath, &loaded).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("mixed objective counts"), "{err}");
    }

    #[test]
    fn corrupt_json_is_a_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        fs::write(&path, "{ not json").unwrap();
        let err = load_manifest(&path).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn future_format_versions_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let a = tiny_archive(0);
        let manifest = StudyManifest {
            format_version: 99,
            study: a.study.clone(),
            space: a.space.clone(),
            objectives: a.objectives.clone(),
            archives: vec![],
        };
        let mpath = manifest_path(dir.path());
        save_json(&mpath, &manifest).unwrap();
        let err = load_manifest(&mpath).unwrap_err();
        assert!(err.to_string().contains("format version"), "{err}");
    }
}
