//! Separation thresholds for guaranteed cluster recovery, a verifier for
//! labeled datasets, and an exhaustive optimal-clustering oracle for small
//! instances.
//!
//! A clustering whose clusters fit in balls of radius `R` around their
//! gravity centers is the global cost minimizer whenever every pair of ball
//! surfaces is at least `R(sqrt(k-1) + 3)` apart; on a 2-D grid at most 8
//! neighbors matter, capping the bound at `R(sqrt(8) + 3)`.

use serde::Serialize;

use crate::datagen::LabeledDataset;
use crate::error::{Error, Result};
use crate::model::{centroid, sqdist, Clustering, Dataset};
use crate::num::Float;

/// Minimum required gap between enclosing-ball surfaces for `k` clusters of
/// radius `radius` embedded in `dim` dimensions.
///
/// Returns `radius * (sqrt(min(k-1, 8)) + 3)` in 2-D and
/// `radius * (sqrt(k-1) + 3)` otherwise.
pub fn min_gap_threshold<F: Float>(k: usize, radius: F, dim: usize) -> Result<F> {
    if k < 2 {
        return Err(Error::usage(
            "separation threshold needs at least 2 clusters",
        ));
    }
    if !(radius.is_finite() && radius >= F::zero()) {
        return Err(Error::usage("radius must be non-negative and finite"));
    }
    let mut neighbors = k - 1;
    if dim == 2 {
        neighbors = neighbors.min(8);
    }
    let three = F::from_count(3);
    Ok(radius * (F::from_count(neighbors).sqrt() + three))
}

/// Gap and threshold from one point of view (empirical or nominal).
#[derive(Debug, Clone, Serialize)]
pub struct GapCheck<F> {
    /// Minimum over cluster pairs of center distance minus both radii.
    pub min_ball_gap: F,
    pub threshold: F,
    pub satisfied: bool,
}

/// Well-separatedness report for a labeled dataset.
///
/// The empirical view measures balls around the observed gravity centers;
/// the nominal view uses the generator's intended centers and radius.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport<F> {
    /// Max distance from each cluster's gravity center to its points.
    pub per_cluster_radius: Vec<F>,
    pub min_ball_gap: F,
    pub threshold: F,
    pub satisfied: bool,
    pub nominal: GapCheck<F>,
}

// Comparisons sit exactly on the threshold for displacement-free grids, so
// allow a few ulps of slack before declaring a violation.
fn gap_satisfied<F: Float>(gap: F, threshold: F) -> bool {
    let eps = F::epsilon() * F::from_count(64);
    gap >= threshold - threshold.abs().max(F::one()) * eps
}

fn pairwise_min_gap<F: Float>(centers: &[crate::model::Point<F>], radii: &[F]) -> F {
    let mut min_gap = F::infinity();
    for a in 0..centers.len() {
        for b in a + 1..centers.len() {
            let dist = sqdist(&centers[a].coords, &centers[b].coords).sqrt();
            let gap = dist - radii[a] - radii[b];
            if gap < min_gap {
                min_gap = gap;
            }
        }
    }
    min_gap
}

/// Checks well-separatedness of the intended clusters of `ld`, ignoring
/// noise points. Errors if there are fewer than two intended clusters or an
/// intended cluster has no regular points.
pub fn verify<F: Float>(ld: &LabeledDataset<F>) -> Result<SeparationReport<F>> {
    let k = ld.k();
    if k < 2 {
        return Err(Error::usage(
            "verification needs at least 2 intended clusters",
        ));
    }
    let groups = ld.intended_clusters();
    if let Some(j) = groups.iter().position(|g| g.is_empty()) {
        return Err(Error::usage(format!(
            "intended cluster {j} has no regular points"
        )));
    }
    let dim = ld.dataset.dim();

    let mut gravity = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    for group in &groups {
        let center = centroid(group.iter().map(|&i| ld.dataset.point(i)))?;
        let r = group
            .iter()
            .map(|&i| sqdist(&ld.dataset.point(i).coords, &center.coords))
            .fold(F::zero(), F::max)
            .sqrt();
        gravity.push(center);
        radii.push(r);
    }

    let max_radius = radii.iter().copied().fold(F::zero(), F::max);
    let min_ball_gap = pairwise_min_gap(&gravity, &radii);
    let threshold = min_gap_threshold(k, max_radius, dim)?;
    let satisfied = gap_satisfied(min_ball_gap, threshold);

    let nominal_radius = F::from_config(ld.config.radius);
    let nominal_radii = vec![nominal_radius; k];
    let nominal_gap = pairwise_min_gap(&ld.intended_centers, &nominal_radii);
    let nominal_threshold = min_gap_threshold(k, nominal_radius, dim)?;
    let nominal = GapCheck {
        min_ball_gap: nominal_gap,
        threshold: nominal_threshold,
        satisfied: gap_satisfied(nominal_gap, nominal_threshold),
    };

    Ok(SeparationReport {
        per_cluster_radius: radii,
        min_ball_gap,
        threshold,
        satisfied,
        nominal,
    })
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone)]
pub struct BruteForceResult<F> {
    pub clustering: Clustering<F>,
    pub cost: F,
    /// Best cost among all partitions other than the winner, if any exist.
    pub runner_up_cost: Option<F>,
    /// Number of partitions evaluated.
    pub partitions: u64,
}

/// Number of partitions of an `n`-set into at most `k` non-empty blocks
/// (sum of Stirling numbers of the second kind), saturating at `u128::MAX`.
fn partitions_at_most(n: usize, k: usize) -> u128 {
    // dp[j] = S(i, j) for the current i
    let mut dp = vec![0u128; k + 1];
    dp[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; k + 1];
        for j in 1..=k {
            let grow = (j as u128).saturating_mul(dp[j]);
            next[j] = grow.saturating_add(dp[j - 1]);
        }
        dp = next;
    }
    dp[1..=k]
        .iter()
        .fold(0u128, |acc, &v| acc.saturating_add(v))
}

const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Depth-first enumeration of restricted-growth strings with exactly `k`
/// distinct values, in lexicographic order; ties in cost keep the first
/// partition encountered.
struct Search<'a, F> {
    n: usize,
    k: usize,
    coords: &'a [&'a [F]],
    acc: PartitionCost<F>,
    rgs: Vec<usize>,
    best: Option<(F, Vec<usize>)>,
    runner_up: Option<F>,
    partitions: u64,
}

impl<F: Float> Search<'_, F> {
    fn walk(&mut self, pos: usize, max_used: usize) {
        if pos == self.n {
            if max_used + 1 == self.k {
                self.leaf();
            }
            return;
        }
        // prune: remaining positions must be able to open the missing blocks
        let remaining = self.n - pos;
        let missing = self.k.saturating_sub(max_used + 1);
        if missing > remaining {
            return;
        }
        let hi = (max_used + 1).min(self.k - 1);
        for v in 0..=hi {
            self.rgs[pos] = v;
            self.walk(pos + 1, max_used.max(v));
        }
    }

    fn leaf(&mut self) {
        self.partitions += 1;
        let cost = self.acc.eval(&self.rgs, self.coords);
        match &mut self.best {
            Some((best_cost, assignment)) => {
                if cost < *best_cost {
                    let previous = *best_cost;
                    *best_cost = cost;
                    assignment.clone_from(&self.rgs);
                    Self::lower(&mut self.runner_up, previous);
                } else {
                    Self::lower(&mut self.runner_up, cost);
                }
            }
            None => self.best = Some((cost, self.rgs.clone())),
        }
    }

    fn lower(slot: &mut Option<F>, candidate: F) {
        match slot {
            Some(current) if candidate >= *current => {}
            _ => *slot = Some(candidate),
        }
    }
}

struct PartitionCost<F> {
    dim: usize,
    counts: Vec<usize>,
    sums: Vec<F>,
    sumsq: Vec<F>,
}

impl<F: Float> PartitionCost<F> {
    fn new(k: usize, dim: usize) -> Self {
        PartitionCost {
            dim,
            counts: vec![0; k],
            sums: vec![F::zero(); k * dim],
            sumsq: vec![F::zero(); k],
        }
    }

    /// Total within-cluster sum of squares of one partition, evaluated from
    /// scratch as sum_j (sumsq_j - |sum_j|^2 / n_j). Recomputing per leaf
    /// keeps every partition's cost independent of enumeration order.
    fn eval(&mut self, rgs: &[usize], coords: &[&[F]]) -> F {
        self.counts.fill(0);
        self.sums.fill(F::zero());
        self.sumsq.fill(F::zero());
        for (i, &j) in rgs.iter().enumerate() {
            self.counts[j] += 1;
            let base = j * self.dim;
            for (d, &c) in coords[i].iter().enumerate() {
                self.sums[base + d] += c;
            }
            self.sumsq[j] += coords[i].iter().map(|&c| c * c).sum();
        }
        let mut total = F::zero();
        for (j, &n) in self.counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let base = j * self.dim;
            let mut norm = F::zero();
            for d in 0..self.dim {
                norm += self.sums[base + d] * self.sums[base + d];
            }
            total += self.sumsq[j] - norm / F::from_count(n);
        }
        total
    }
}

/// Exhaustively enumerates every partition of the dataset into exactly `k`
/// non-empty clusters (restricted-growth strings in lexicographic order) and
/// returns the cost minimizer; ties are broken by the first partition
/// encountered.
///
/// Refuses instances whose partition count into at most `k` blocks exceeds
/// 10^7, reporting the estimate.
pub fn brute_force_optimum<F: Float>(data: &Dataset<F>, k: usize) -> Result<BruteForceResult<F>> {
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::usage(format!("k = {k} must be in 1..={n}")));
    }
    let estimate = partitions_at_most(n, k);
    if estimate > BRUTE_FORCE_LIMIT {
        return Err(Error::usage(format!(
            "instance too large for exhaustive search: ~{estimate} partitions of {n} points \
             into <= {k} parts exceeds the limit of {BRUTE_FORCE_LIMIT}"
        )));
    }

    // The cost is translation invariant; centering on the dataset mean keeps
    // the sumsq/|sum|² cancellation in `PartitionCost::cost` benign.
    let mean = centroid(data.points().iter())?;
    let centered: Vec<Vec<F>> = data
        .points()
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .zip(mean.coords.iter())
                .map(|(&c, &m)| c - m)
                .collect()
        })
        .collect();
    let coords: Vec<&[F]> = centered.iter().map(|c| c.as_slice()).collect();
    let dim = data.dim();

    let mut search = Search {
        n,
        k,
        coords: &coords,
        acc: PartitionCost::new(k, dim),
        rgs: vec![0usize; n], // point 0 is pinned to cluster 0 by restricted growth
        best: None,
        runner_up: None,
        partitions: 0,
    };
    search.walk(1, 0);
    let Search {
        best,
        runner_up,
        partitions,
        ..
    } = search;

    let (cost, assignment) = best.expect("at least one partition exists");
    let clustering = Clustering::from_assignment(data, assignment, k)?;
    Ok(BruteForceResult {
        clustering,
        cost,
        runner_up_cost: runner_up,
        partitions,
    })
}
