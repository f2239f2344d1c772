//! Quality metrics and run summaries.
//!
//! A found cluster discovers an intended cluster only when the two contain
//! exactly the same regular points; noise membership is ignored. Splitting
//! or merging intended clusters therefore counts as an error, matching how
//! the worst-case figures mark erroneous clusters.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::datagen::LabeledDataset;
use crate::error::{Error, Result};
use crate::model::{cost_centroid_form, Clustering, Dataset};
use crate::num::Float;

/// Metrics of one (dataset, algorithm) run. The relative cost is only known
/// once every algorithm has run on the same dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics<F> {
    pub tot_within_ss: F,
    pub wrong_clusters_pct: F,
    pub rel_tot_within_ss: Option<F>,
}

/// Mean and sample standard deviation of one metric over the runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow<F> {
    pub mean: F,
    pub sd: F,
}

/// Total within-cluster sum of squared distances, over all points including
/// noise (every point is assigned somewhere).
pub fn tot_within_ss<F: Float>(data: &Dataset<F>, clustering: &Clustering<F>) -> Result<F> {
    cost_centroid_form(data, clustering)
}

/// Percentage of intended clusters not discovered by the clustering.
///
/// An intended cluster is discovered iff some found cluster's set of regular
/// points equals the intended cluster's set of regular points exactly.
pub fn wrong_clusters_pct<F: Float>(
    ld: &LabeledDataset<F>,
    clustering: &Clustering<F>,
) -> Result<F> {
    if clustering.assignment.len() != ld.dataset.len() {
        return Err(Error::usage("clustering does not cover the dataset"));
    }
    let k = ld.k();
    if k == 0 {
        return Err(Error::usage("dataset has no intended clusters"));
    }
    let mut found: Vec<Vec<usize>> = vec![Vec::new(); clustering.k];
    for (i, &j) in clustering.assignment.iter().enumerate() {
        if j >= clustering.k {
            return Err(Error::usage(format!(
                "cluster index {j} out of range 0..{}",
                clustering.k
            )));
        }
        if !ld.is_noise(i) {
            found[j].push(i);
        }
    }
    let found: HashSet<&[usize]> = found.iter().map(|v| v.as_slice()).collect();
    let discovered = ld
        .intended_clusters()
        .iter()
        .filter(|members| found.contains(members.as_slice()))
        .count();
    let hundred = F::from_count(100);
    Ok(hundred * F::from_count(k - discovered) / F::from_count(k))
}

/// Divides each algorithm's cost by the lowest cost on the same dataset.
/// The minimum entry is exactly 1.0. Input order is preserved.
pub fn rel_tot_within_ss<F: Float>(costs: &[F]) -> Result<Vec<F>> {
    let &min = costs
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("costs are ordered"))
        .ok_or_else(|| Error::usage("relative cost of an empty set of algorithms"))?;
    Ok(costs
        .iter()
        .map(|&c| if c == min { F::one() } else { c / min })
        .collect())
}

/// Arithmetic mean and sample (n-1) standard deviation; the variance is
/// clamped at zero before the square root so rounding can never produce an
/// undefined value.
pub fn summarize<F: Float>(values: &[F]) -> Result<SummaryRow<F>> {
    if values.is_empty() {
        return Err(Error::usage("summary of an empty value list"));
    }
    let n = F::from_count(values.len());
    let mean = values.iter().copied().sum::<F>() / n;
    let sd = if values.len() < 2 {
        F::zero()
    } else {
        let var = values
            .iter()
            .map(|&v| {
                let d = v - mean;
                d * d
            })
            .sum::<F>()
            / (n - F::one());
        var.max(F::zero()).sqrt()
    };
    Ok(SummaryRow { mean, sd })
}
