//! Lloyd's k-means with deterministic farthest-point seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Converged clustering: centroids, the per-sample cluster index, and the
/// within-cluster sum of squared distances. At convergence every sample
/// sits in the cluster of its nearest centroid (ties to the lowest index).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub wcss: f64,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Clusters `samples` into `k` groups.
///
/// Seeding is deterministic: the seed picks the first centroid, then each
/// further centroid is the sample farthest from the ones chosen so far
/// (ties to the lowest index). Iteration stops at a fixed point or after
/// `max_iters` rounds; the WCSS never increases from one round to the
/// next. Should a cluster empty out mid-run, its centroid is re-seeded
/// from the sample currently farthest from its own centroid.
pub fn kmeans(
    samples: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iters: usize,
) -> Result<ClusterAssignment> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("clustering needs at least one sample"));
    }
    if k == 0 {
        return Err(Error::InvalidValue("cluster count must be positive".into()));
    }
    if k > samples.len() {
        return Err(Error::NotEnoughMembers {
            needed: k,
            found: samples.len(),
        });
    }
    let width = samples[0].len();
    for s in samples {
        if s.len() != width {
            return Err(Error::InvalidValue(format!(
                "inconsistent feature widths: {} vs {width}",
                s.len()
            )));
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(
                "samples must have finite features".into(),
            ));
        }
    }

    // Farthest-point seeding from a seeded first pick.
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = vec![samples[rng.random_range(0..samples.len())].clone()];
    while centroids.len() < k {
        let far = (0..samples.len())
            .max_by(|&a, &b| {
                let da = centroids
                    .iter()
                    .map(|c| dist2(&samples[a], c))
                    .fold(f64::INFINITY, f64::min);
                let db = centroids
                    .iter()
                    .map(|c| dist2(&samples[b], c))
                    .fold(f64::INFINITY, f64::min);
                // Lowest index wins ties: make earlier indices compare
                // greater on equality.
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .unwrap();
        centroids.push(samples[far].clone());
    }

    let assign = |centroids: &[Vec<f64>]| -> (Vec<usize>, f64) {
        let mut assignment = Vec::with_capacity(samples.len());
        let mut wcss = 0.0;
        for s in samples {
            let (best, d) = centroids
                .iter()
                .enumerate()
                .map(|(i, c)| (i, dist2(s, c)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .unwrap();
            assignment.push(best);
            wcss += d;
        }
        (assignment, wcss)
    };

    let (mut assignment, mut wcss) = assign(&centroids);
    for _ in 0..max_iters {
        // Means of the current clusters; empty clusters re-seed from the
        // sample farthest from its own centroid.
        let mut sums = vec![vec![0.0; width]; k];
        let mut counts = vec![0usize; k];
        for (s, &c) in samples.iter().zip(&assignment) {
            counts[c] += 1;
            for (acc, v) in sums[c].iter_mut().zip(s) {
                *acc += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..samples.len())
                    .max_by(|&a, &b| {
                        let da = dist2(&samples[a], &centroids[assignment[a]]);
                        let db = dist2(&samples[b], &centroids[assignment[b]]);
                        da.total_cmp(&db).then(b.cmp(&a))
                    })
                    .unwrap();
                centroids[c] = samples[far].clone();
            } else {
                for (j, acc) in sums[c].iter().enumerate() {
                    centroids[c][j] = acc / counts[c] as f64;
                }
            }
        }
        let (next_assignment, next_wcss) = assign(&centroids);
        let converged = next_assignment == assignment;
        assignment = next_assignment;
        wcss = next_wcss;
        if converged {
            break;
        }
    }

    Ok(ClusterAssignment {
        k,
        centroids,
        assignment,
        wcss,
    })
}
