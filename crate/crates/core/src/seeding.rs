//! The six initialization strategies producing the seed centroids for the
//! Lloyd iteration.
//!
//! Five of them pick actual dataset points (uniformly, by squared-distance
//! weighting, by farthest-first traversal, or by boosted candidate
//! subsampling); the global strategy starts from the dataset centroid and
//! greedily adds the point giving the largest cost reduction. All random
//! choices are reproducible: the dispatcher seeds a dedicated ChaCha stream
//! per invocation, and every argmax/argmin tie breaks toward the lowest
//! point index.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::datagen::LabeledDataset;
use crate::error::{Error, Result};
use crate::model::{centroid, sqdist, Dataset, Point};
use crate::num::Float;

/// Default boost width of the boosted strategy.
pub const DEFAULT_BOOST: usize = 15;

/// Identifier of one initialization strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algo")]
pub enum SeedingMethod {
    /// Uniform sample of k points without replacement.
    #[serde(rename = "random")]
    Random,
    /// Centroids of the intended clusters (requires ground truth).
    #[serde(rename = "tc")]
    TrueCenter,
    /// Squared-distance-weighted sequential sampling.
    #[serde(rename = "kmpp")]
    KMeansPP,
    /// Farthest-first traversal after one random point.
    #[serde(rename = "md")]
    MostDistant,
    /// Squared-distance-weighted sampling of `b` candidates per step, keeping
    /// the candidate that minimizes the resulting potential.
    #[serde(rename = "kmppb")]
    KMeansPPBoosted { b: usize },
    /// Deterministic greedy insertion starting from the dataset centroid.
    #[serde(rename = "global")]
    Global,
}

impl SeedingMethod {
    /// The six strategies in presentation order, boosted width `b`.
    pub fn all(b: usize) -> Vec<SeedingMethod> {
        vec![
            SeedingMethod::Random,
            SeedingMethod::KMeansPP,
            SeedingMethod::KMeansPPBoosted { b },
            SeedingMethod::Global,
            SeedingMethod::MostDistant,
            SeedingMethod::TrueCenter,
        ]
    }

    /// Short stable identifier, also used in file names and the CLI.
    pub fn id(&self) -> &'static str {
        match self {
            SeedingMethod::Random => "random",
            SeedingMethod::TrueCenter => "tc",
            SeedingMethod::KMeansPP => "kmpp",
            SeedingMethod::MostDistant => "md",
            SeedingMethod::KMeansPPBoosted { .. } => "kmppb",
            SeedingMethod::Global => "global",
        }
    }

    /// Human-readable name.
    pub fn display_name(&self) -> &'static str {
        match self {
            SeedingMethod::Random => "k-means",
            SeedingMethod::TrueCenter => "tc-k-means",
            SeedingMethod::KMeansPP => "k-means++",
            SeedingMethod::MostDistant => "md-k-means",
            SeedingMethod::KMeansPPBoosted { .. } => "k-means++B",
            SeedingMethod::Global => "glob-k-means",
        }
    }

    pub fn from_id(id: &str, b: usize) -> Result<SeedingMethod> {
        Ok(match id {
            "random" => SeedingMethod::Random,
            "tc" => SeedingMethod::TrueCenter,
            "kmpp" => SeedingMethod::KMeansPP,
            "md" => SeedingMethod::MostDistant,
            "kmppb" => SeedingMethod::KMeansPPBoosted { b },
            "global" => SeedingMethod::Global,
            other => {
                return Err(Error::usage(format!(
                    "unknown algorithm {other:?}; expected one of random|tc|kmpp|md|kmppb|global"
                )))
            }
        })
    }

    /// Whether the strategy consumes randomness.
    pub fn uses_rng(&self) -> bool {
        !matches!(self, SeedingMethod::TrueCenter | SeedingMethod::Global)
    }

    /// Stable stream tag for seed derivation (0 is reserved for datasets).
    pub fn stream(&self) -> u64 {
        match self {
            SeedingMethod::Random => 1,
            SeedingMethod::TrueCenter => 2,
            SeedingMethod::KMeansPP => 3,
            SeedingMethod::MostDistant => 4,
            SeedingMethod::KMeansPPBoosted { .. } => 5,
            SeedingMethod::Global => 6,
        }
    }
}

/// Whether the boosted selection scores candidates by squared or plain
/// distances. Squared distances keep the criterion aligned with the cost
/// function being minimized and are the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoostObjective {
    #[default]
    SquaredDistance,
    PlainDistance,
}

/// The initial centroid set handed to the Lloyd iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSet<F> {
    pub centroids: Vec<Point<F>>,
    pub method: SeedingMethod,
    /// Seed of the RNG stream that produced the set; `None` for the
    /// deterministic strategies.
    pub rng_seed: Option<u64>,
}

impl<F: Float> SeedSet<F> {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }
}

fn check_k<F: Float>(data: &Dataset<F>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::usage("k must be positive"));
    }
    if k > data.len() {
        return Err(Error::usage(format!(
            "k = {k} exceeds the dataset size {}",
            data.len()
        )));
    }
    Ok(())
}

/// Squared distance of every point to its nearest seed so far.
fn min_sq_dists<F: Float>(data: &Dataset<F>, seed: &Point<F>) -> Vec<F> {
    data.points()
        .iter()
        .map(|p| sqdist(&p.coords, &seed.coords))
        .collect()
}

fn relax<F: Float>(d2: &mut [F], data: &Dataset<F>, seed: &Point<F>) {
    for (slot, p) in d2.iter_mut().zip(data.points()) {
        let d = sqdist(&p.coords, &seed.coords);
        if d < *slot {
            *slot = d;
        }
    }
}

/// Uniform sample of `k` distinct points.
pub fn init_random<F: Float, R: Rng + ?Sized>(
    data: &Dataset<F>,
    k: usize,
    rng: &mut R,
) -> Result<SeedSet<F>> {
    check_k(data, k)?;
    let idx = rand::seq::index::sample(rng, data.len(), k);
    Ok(SeedSet {
        centroids: idx.iter().map(|i| data.point(i).clone()).collect(),
        method: SeedingMethod::Random,
        rng_seed: None,
    })
}

/// Centroid of each intended cluster's regular points, in label order.
/// Noise points never enter the means.
pub fn init_true_centers<F: Float>(ld: &LabeledDataset<F>) -> Result<SeedSet<F>> {
    if ld.k() == 0 {
        return Err(Error::usage("dataset has no intended clusters"));
    }
    let groups = ld.intended_clusters();
    if let Some(j) = groups.iter().position(|g| g.is_empty()) {
        return Err(Error::usage(format!(
            "intended cluster {j} has no regular points"
        )));
    }
    let centroids = groups
        .iter()
        .map(|g| centroid(g.iter().map(|&i| ld.dataset.point(i))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeedSet {
        centroids,
        method: SeedingMethod::TrueCenter,
        rng_seed: None,
    })
}

fn d2_sampler<F: Float>(d2: &[F]) -> Result<WeightedIndex<F>> {
    WeightedIndex::new(d2.iter().cloned()).map_err(|_| {
        Error::usage("cannot draw another seed: all remaining squared distances are zero")
    })
}

/// Sequential squared-distance-weighted sampling: the first seed is uniform,
/// each next one is drawn with probability proportional to its squared
/// distance to the nearest already-chosen seed. Points coinciding with a
/// chosen seed have zero probability.
pub fn init_kmeanspp<F: Float, R: Rng + ?Sized>(
    data: &Dataset<F>,
    k: usize,
    rng: &mut R,
) -> Result<SeedSet<F>> {
    check_k(data, k)?;
    let first = rng.random_range(0..data.len());
    let mut chosen = vec![first];
    let mut d2 = min_sq_dists(data, data.point(first));
    while chosen.len() < k {
        let next = d2_sampler(&d2)?.sample(rng);
        chosen.push(next);
        relax(&mut d2, data, data.point(next));
    }
    Ok(SeedSet {
        centroids: chosen.iter().map(|&i| data.point(i).clone()).collect(),
        method: SeedingMethod::KMeansPP,
        rng_seed: None,
    })
}

/// Farthest-first traversal: after one uniform seed, repeatedly add the
/// point with the largest distance to its nearest seed.
pub fn init_most_distant<F: Float, R: Rng + ?Sized>(
    data: &Dataset<F>,
    k: usize,
    rng: &mut R,
) -> Result<SeedSet<F>> {
    check_k(data, k)?;
    let first = rng.random_range(0..data.len());
    let mut taken = vec![false; data.len()];
    taken[first] = true;
    let mut chosen = vec![first];
    let mut d2 = min_sq_dists(data, data.point(first));
    while chosen.len() < k {
        let mut best = None;
        let mut best_d = F::neg_infinity();
        for (i, &d) in d2.iter().enumerate() {
            if !taken[i] && d > best_d {
                best_d = d;
                best = Some(i);
            }
        }
        let next = best.expect("k <= |data| leaves an unchosen point");
        taken[next] = true;
        chosen.push(next);
        relax(&mut d2, data, data.point(next));
    }
    Ok(SeedSet {
        centroids: chosen.iter().map(|&i| data.point(i).clone()).collect(),
        method: SeedingMethod::MostDistant,
        rng_seed: None,
    })
}

/// Picks the candidate whose insertion minimizes the potential
/// `sum_f min(d2[f], d(f, c))` (squared or plain distances per `objective`).
/// Candidates must be sorted ascending so ties resolve to the lowest index.
pub(crate) fn boosted_pick<F: Float>(
    data: &Dataset<F>,
    d2: &[F],
    candidates: &[usize],
    objective: BoostObjective,
) -> usize {
    let potential = |c: usize| -> F {
        let cp = &data.point(c).coords;
        data.points()
            .iter()
            .zip(d2.iter())
            .map(|(p, &cur)| {
                let cand = sqdist(&p.coords, cp);
                match objective {
                    BoostObjective::SquaredDistance => cur.min(cand),
                    BoostObjective::PlainDistance => cur.sqrt().min(cand.sqrt()),
                }
            })
            .sum()
    };
    let mut best = candidates[0];
    let mut best_pot = potential(best);
    for &c in &candidates[1..] {
        let pot = potential(c);
        if pot < best_pot {
            best_pot = pot;
            best = c;
        }
    }
    best
}

/// Boosted variant: each step draws `b` candidates from the same
/// squared-distance distribution (with replacement; duplicates are evaluated
/// once) and keeps the one minimizing the potential.
pub fn init_kmeanspp_boosted<F: Float, R: Rng + ?Sized>(
    data: &Dataset<F>,
    k: usize,
    b: usize,
    objective: BoostObjective,
    rng: &mut R,
) -> Result<SeedSet<F>> {
    check_k(data, k)?;
    if b == 0 {
        return Err(Error::usage("boost width b must be at least 1"));
    }
    let first = rng.random_range(0..data.len());
    let mut chosen = vec![first];
    let mut d2 = min_sq_dists(data, data.point(first));
    while chosen.len() < k {
        let sampler = d2_sampler(&d2)?;
        let mut candidates: Vec<usize> = (0..b).map(|_| sampler.sample(rng)).collect();
        candidates.sort_unstable();
        candidates.dedup();
        let next = boosted_pick(data, &d2, &candidates, objective);
        chosen.push(next);
        relax(&mut d2, data, data.point(next));
    }
    Ok(SeedSet {
        centroids: chosen.iter().map(|&i| data.point(i).clone()).collect(),
        method: SeedingMethod::KMeansPPBoosted { b },
        rng_seed: None,
    })
}

/// Cost-reduction score of every point: `v_e = sum_f max(0, d2[f] - d²(f,e))`.
pub(crate) fn global_scores<F: Float>(data: &Dataset<F>, d2: &[F]) -> Vec<F> {
    data.points()
        .iter()
        .map(|e| {
            data.points()
                .iter()
                .zip(d2.iter())
                .map(|(f, &cur)| (cur - sqdist(&f.coords, &e.coords)).max(F::zero()))
                .sum()
        })
        .collect()
}

/// Deterministic greedy insertion: start from the dataset centroid, then
/// repeatedly add the point with the maximal cost-reduction score. Consumes
/// no randomness.
pub fn init_global<F: Float>(data: &Dataset<F>, k: usize) -> Result<SeedSet<F>> {
    check_k(data, k)?;
    let mean = centroid(data.points().iter())?;
    let mut d2 = min_sq_dists(data, &mean);
    let mut centroids = vec![mean];
    while centroids.len() < k {
        let scores = global_scores(data, &d2);
        let mut best = 0;
        for (i, &v) in scores.iter().enumerate() {
            if v > scores[best] {
                best = i;
            }
        }
        let point = data.point(best).clone();
        relax(&mut d2, data, &point);
        centroids.push(point);
    }
    Ok(SeedSet {
        centroids,
        method: SeedingMethod::Global,
        rng_seed: None,
    })
}

/// Runs `method` on `ld` with a dedicated ChaCha stream seeded by `seed`,
/// recording provenance. The true-center strategy requires `k` to equal the
/// number of intended clusters.
pub fn initialize<F: Float>(
    method: SeedingMethod,
    ld: &LabeledDataset<F>,
    k: usize,
    seed: u64,
) -> Result<SeedSet<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = match method {
        SeedingMethod::Random => init_random(&ld.dataset, k, &mut rng)?,
        SeedingMethod::TrueCenter => {
            if k != ld.k() {
                return Err(Error::usage(format!(
                    "true-center seeding needs k = {} (the intended cluster count), got {k}",
                    ld.k()
                )));
            }
            init_true_centers(ld)?
        }
        SeedingMethod::KMeansPP => init_kmeanspp(&ld.dataset, k, &mut rng)?,
        SeedingMethod::MostDistant => init_most_distant(&ld.dataset, k, &mut rng)?,
        SeedingMethod::KMeansPPBoosted { b } => {
            init_kmeanspp_boosted(&ld.dataset, k, b, BoostObjective::default(), &mut rng)?
        }
        SeedingMethod::Global => init_global(&ld.dataset, k)?,
    };
    if method.uses_rng() {
        set.rng_seed = Some(seed);
    }
    Ok(set)
}
