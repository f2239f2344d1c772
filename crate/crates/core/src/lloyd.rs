//! The generic k-means iteration: assign every point to its nearest
//! centroid, recompute the centroids, repeat until the assignment stops
//! changing or the iteration cap is reached.
//!
//! A cluster that loses all its points during assignment is reseeded at the
//! point currently farthest from its own centroid (taken from a cluster with
//! at least two members), which keeps the result at exactly `k` non-empty
//! clusters without breaking the cost monotonicity of the sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sqdist, Clustering, Dataset, Point};
use crate::num::Float;
use crate::seeding::SeedSet;

/// What to do when a cluster empties during assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EmptyClusterPolicy {
    /// Reseed the empty cluster at the point with the largest squared
    /// distance to its current centroid.
    #[default]
    ReseedFarthest,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LloydConfig {
    pub max_iters: usize,
    pub empty_cluster_policy: EmptyClusterPolicy,
}

impl Default for LloydConfig {
    fn default() -> Self {
        LloydConfig {
            max_iters: 100,
            empty_cluster_policy: EmptyClusterPolicy::ReseedFarthest,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LloydResult<F> {
    pub clustering: Clustering<F>,
    /// Final cost (total within-cluster sum of squares).
    pub cost: F,
    /// Completed assign+update passes.
    pub iterations: usize,
    /// True when one more assignment pass would change nothing.
    pub converged: bool,
    /// Cost after each completed pass; non-increasing.
    pub cost_trace: Vec<F>,
}

/// Maps every point to the index of its nearest centroid by squared
/// distance; ties resolve to the lowest centroid index.
pub fn assign<F: Float>(data: &Dataset<F>, centroids: &[Point<F>]) -> Vec<usize> {
    data.points()
        .iter()
        .map(|p| {
            let mut best = 0usize;
            let mut best_d = sqdist(&p.coords, &centroids[0].coords);
            for (j, c) in centroids.iter().enumerate().skip(1) {
                let d = sqdist(&p.coords, &c.coords);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Per-cluster arithmetic means. Every cluster index must be inhabited.
pub fn update<F: Float>(data: &Dataset<F>, assignment: &[usize], k: usize) -> Vec<Point<F>> {
    let dim = data.dim();
    let mut sums = vec![F::zero(); k * dim];
    let mut counts = vec![0usize; k];
    for (i, &j) in assignment.iter().enumerate() {
        counts[j] += 1;
        let base = j * dim;
        for (d, &c) in data.point(i).coords.iter().enumerate() {
            sums[base + d] += c;
        }
    }
    (0..k)
        .map(|j| {
            debug_assert!(counts[j] > 0, "update on an empty cluster");
            let n = F::from_count(counts[j]);
            Point::new(
                sums[j * dim..(j + 1) * dim]
                    .iter()
                    .map(|&s| s / n)
                    .collect(),
            )
        })
        .collect()
}

/// Moves one point into each empty cluster: the point with the largest
/// squared distance to its current centroid, drawn from a donor cluster that
/// keeps at least one member. Empty clusters are repaired in ascending index
/// order; ties break toward the lowest point index.
fn repair_empty<F: Float>(
    data: &Dataset<F>,
    assignment: &mut [usize],
    centroids: &[Point<F>],
    k: usize,
) {
    let mut counts = vec![0usize; k];
    for &j in assignment.iter() {
        counts[j] += 1;
    }
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        let mut donor: Option<usize> = None;
        let mut donor_d = F::neg_infinity();
        for (i, &a) in assignment.iter().enumerate() {
            if counts[a] < 2 {
                continue;
            }
            let d = sqdist(&data.point(i).coords, &centroids[a].coords);
            if d > donor_d {
                donor_d = d;
                donor = Some(i);
            }
        }
        let i = donor.expect("a donor cluster with >= 2 members exists when k <= |data|");
        counts[assignment[i]] -= 1;
        assignment[i] = j;
        counts[j] = 1;
    }
}

fn total_cost<F: Float>(data: &Dataset<F>, assignment: &[usize], centroids: &[Point<F>]) -> F {
    assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| sqdist(&data.point(i).coords, &centroids[j].coords))
        .sum()
}

/// Runs the Lloyd iteration from the given seeds.
pub fn run<F: Float>(
    data: &Dataset<F>,
    seeds: &SeedSet<F>,
    cfg: &LloydConfig,
) -> Result<LloydResult<F>> {
    let k = seeds.k();
    if k == 0 || k > data.len() {
        return Err(Error::usage(format!(
            "k = {k} must be in 1..={}",
            data.len()
        )));
    }
    if seeds.centroids.iter().any(|c| c.dim() != data.dim()) {
        return Err(Error::usage("seed dimensionality differs from data"));
    }
    if cfg.max_iters == 0 {
        return Err(Error::usage("max_iters must be at least 1"));
    }

    let EmptyClusterPolicy::ReseedFarthest = cfg.empty_cluster_policy;
    let mut centroids = seeds.centroids.clone();
    let mut assignment: Option<Vec<usize>> = None;
    let mut cost_trace = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;

    while iterations < cfg.max_iters {
        let mut next = assign(data, &centroids);
        repair_empty(data, &mut next, &centroids, k);
        if assignment.as_deref() == Some(next.as_slice()) {
            converged = true;
            break;
        }
        centroids = update(data, &next, k);
        cost_trace.push(total_cost(data, &next, &centroids));
        assignment = Some(next);
        iterations += 1;
    }

    let assignment = assignment.expect("max_iters >= 1 guarantees one pass");
    let cost = *cost_trace.last().expect("at least one pass ran");
    Ok(LloydResult {
        clustering: Clustering {
            assignment,
            k,
            centroids,
        },
        cost,
        iterations,
        converged,
        cost_trace,
    })
}

/// True when the trace never rises by more than `slack` between passes.
pub fn trace_is_monotone<F: Float>(trace: &[F], slack: F) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0] + slack)
}
