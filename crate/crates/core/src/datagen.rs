//! Synthetic 2-D benchmark generator: clusters on a (possibly displaced)
//! regular grid, ball-uniform cluster points, Gaussian-shell noise.
//!
//! The grid spacing is chosen so that the enclosing balls of any two clusters
//! keep at least the separation threshold between their surfaces even when
//! both centers are displaced by the maximum allowed amount.

use std::path::{Path, PathBuf};

use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, Point};
use crate::num::Float;
use crate::separation::min_gap_threshold;

/// Parameters of one synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub grid_rows: usize,
    pub grid_cols: usize,
    /// Regular points per cluster.
    pub cluster_size: usize,
    /// Enclosing-ball radius of every cluster.
    pub radius: f64,
    /// Noise points, as a percentage of the regular point count.
    pub noise_pct: f64,
    /// Maximum center displacement off the grid, in units of `radius`.
    pub displacement_max: f64,
    pub rng_seed: u64,
}

impl GenConfig {
    /// Number of clusters on the grid.
    pub fn k(&self) -> usize {
        self.grid_rows * self.grid_cols
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_rows == 0 || self.grid_cols == 0 {
            return Err(Error::usage("grid must have at least one row and column"));
        }
        if self.cluster_size == 0 {
            return Err(Error::usage("cluster size must be positive"));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::usage("radius must be positive and finite"));
        }
        if !(self.noise_pct.is_finite() && self.noise_pct >= 0.0) {
            return Err(Error::usage("noise percentage must be non-negative"));
        }
        if !(self.displacement_max.is_finite() && self.displacement_max >= 0.0) {
            return Err(Error::usage("displacement must be non-negative"));
        }
        Ok(())
    }
}

/// A generated dataset together with its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset<F> {
    pub dataset: Dataset<F>,
    /// Per-point intended cluster; `None` marks a noise point.
    pub intended: Vec<Option<usize>>,
    pub intended_centers: Vec<Point<F>>,
    pub config: GenConfig,
}

impl<F: Float> LabeledDataset<F> {
    /// Number of intended clusters.
    pub fn k(&self) -> usize {
        self.intended_centers.len()
    }

    pub fn is_noise(&self, i: usize) -> bool {
        self.intended[i].is_none()
    }

    /// Regular point indices grouped by intended cluster, in label order.
    pub fn intended_clusters(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k()];
        for (i, lab) in self.intended.iter().enumerate() {
            if let Some(j) = lab {
                groups[*j].push(i);
            }
        }
        groups
    }

    pub fn num_regular(&self) -> usize {
        self.intended.iter().filter(|l| l.is_some()).count()
    }

    pub fn num_noise(&self) -> usize {
        self.intended.iter().filter(|l| l.is_none()).count()
    }
}

fn tau<F: Float>() -> F {
    F::from_config(std::f64::consts::TAU)
}

/// Intended cluster centers: a regular square lattice, each node displaced by
/// a random vector of uniform direction and magnitude uniform in
/// `[0, displacement_max * radius]`.
///
/// The lattice spacing is `2R(1 + displacement_max) + g` where `g` is the
/// separation threshold for the grid's cluster count, so the threshold holds
/// between ball surfaces even under worst-case displacement of both centers.
pub fn grid_centers<F: Float, R: Rng + ?Sized>(config: &GenConfig, rng: &mut R) -> Vec<Point<F>> {
    let k = config.k();
    let radius = F::from_config(config.radius);
    let disp = F::from_config(config.displacement_max);
    let gap = if k >= 2 {
        min_gap_threshold(k, radius, 2).expect("k >= 2")
    } else {
        F::zero()
    };
    let two = F::from_count(2);
    let spacing = two * radius * (F::one() + disp) + gap;
    let max_shift = disp * radius;
    let mut centers = Vec::with_capacity(k);
    for row in 0..config.grid_rows {
        for col in 0..config.grid_cols {
            let base_x = F::from_count(col) * spacing;
            let base_y = F::from_count(row) * spacing;
            let theta = rng.random_range(F::zero()..tau());
            let shift = rng.random_range(F::zero()..=max_shift);
            centers.push(Point::xy(
                base_x + shift * theta.cos(),
                base_y + shift * theta.sin(),
            ));
        }
    }
    centers
}

/// One regular cluster point: uniform direction, distance uniform in
/// `[0, radius]` from the intended center. The result always lies within the
/// cluster's enclosing ball.
pub fn sample_cluster_point<F: Float, R: Rng + ?Sized>(
    center: &Point<F>,
    radius: F,
    rng: &mut R,
) -> Point<F> {
    let theta = rng.random_range(F::zero()..tau());
    let r = rng.random_range(F::zero()..=radius);
    Point::xy(
        center.coords[0] + r * theta.cos(),
        center.coords[1] + r * theta.sin(),
    )
}

/// Distance of a noise point from its origin center: the ball radius plus a
/// Gaussian draw with standard deviation equal to the radius, floored at zero
/// (a distance cannot be negative).
pub(crate) fn noise_distance<F: Float>(radius: F, gauss_std: F) -> F {
    (radius + radius * gauss_std).max(F::zero())
}

/// One noise point around `center`: uniform direction, distance
/// `max(0, R + N(0, R))`.
pub fn sample_noise_point<F, R>(center: &Point<F>, radius: F, rng: &mut R) -> Point<F>
where
    F: Float,
    StandardNormal: Distribution<F>,
    R: Rng + ?Sized,
{
    let theta = rng.random_range(F::zero()..tau());
    let z: F = rng.sample(StandardNormal);
    let r = noise_distance(radius, z);
    Point::xy(
        center.coords[0] + r * theta.cos(),
        center.coords[1] + r * theta.sin(),
    )
}

/// Generates a full labeled dataset: `k * n` regular points (`n` per
/// cluster, listed cluster by cluster) followed by
/// `round(noise_pct/100 * k * n)` noise points, each sampled around a
/// uniformly chosen intended center.
///
/// Deterministic given `config.rng_seed`; the draw order is: per-center
/// displacement, then regular points cluster by cluster, then noise points
/// (origin cluster, direction, Gaussian).
pub fn generate<F>(config: &GenConfig) -> Result<LabeledDataset<F>>
where
    F: Float,
    StandardNormal: Distribution<F>,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let radius = F::from_config(config.radius);
    let k = config.k();
    let n = config.cluster_size;

    let centers = grid_centers::<F, _>(config, &mut rng);

    let n_regular = k * n;
    let n_noise = (config.noise_pct / 100.0 * n_regular as f64).round() as usize;
    let mut points = Vec::with_capacity(n_regular + n_noise);
    let mut intended = Vec::with_capacity(n_regular + n_noise);
    for (label, center) in centers.iter().enumerate() {
        for _ in 0..n {
            points.push(sample_cluster_point(center, radius, &mut rng));
            intended.push(Some(label));
        }
    }
    for _ in 0..n_noise {
        let origin = rng.random_range(0..k);
        points.push(sample_noise_point(&centers[origin], radius, &mut rng));
        intended.push(None);
    }

    Ok(LabeledDataset {
        dataset: Dataset::new(points)?,
        intended,
        intended_centers: centers,
        config: config.clone(),
    })
}

/// Sidecar metadata stored next to a dataset CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct Sidecar<F> {
    config: GenConfig,
    intended_centers: Vec<Point<F>>,
}

/// Path of the JSON sidecar belonging to a dataset CSV.
pub fn meta_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

/// Writes a dataset as CSV (`point_id,x,y,intended_cluster,is_noise`) plus
/// the JSON sidecar holding the generator config and the intended centers.
pub fn write_files<F: Float + Serialize>(ld: &LabeledDataset<F>, csv_path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(csv_path)?;
    w.write_record(["point_id", "x", "y", "intended_cluster", "is_noise"])?;
    for (i, p) in ld.dataset.points().iter().enumerate() {
        let label = ld.intended[i].map(|l| l.to_string()).unwrap_or_default();
        let is_noise = if ld.intended[i].is_none() { "1" } else { "0" };
        w.write_record([
            i.to_string(),
            format!("{}", p.coords[0]),
            format!("{}", p.coords[1]),
            label,
            is_noise.to_string(),
        ])?;
    }
    w.flush()?;
    let sidecar = Sidecar {
        config: ld.config.clone(),
        intended_centers: ld.intended_centers.clone(),
    };
    let json = serde_json::to_vec_pretty(&sidecar)?;
    std::fs::write(meta_path(csv_path), json)?;
    Ok(())
}

/// Reads a dataset written by [`write_files`], sidecar included.
pub fn read_files<F: Float + for<'de> Deserialize<'de>>(
    csv_path: &Path,
) -> Result<LabeledDataset<F>> {
    let mut r = csv::Reader::from_path(csv_path)?;
    let headers = r.headers()?.clone();
    let expected = ["point_id", "x", "y", "intended_cluster", "is_noise"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Io(format!(
            "unexpected CSV header {:?}, want {:?}",
            headers, expected
        )));
    }
    let mut points = Vec::new();
    let mut intended = Vec::new();
    for record in r.records() {
        let record = record?;
        let parse_coord = |s: &str| -> Result<F> {
            let v: f64 = s
                .parse()
                .map_err(|e| Error::Io(format!("bad coordinate {s:?}: {e}")))?;
            Ok(F::from_config(v))
        };
        let x = parse_coord(&record[1])?;
        let y = parse_coord(&record[2])?;
        points.push(Point::xy(x, y));
        let is_noise = &record[4] == "1";
        if is_noise {
            intended.push(None);
        } else {
            let label: usize = record[3]
                .parse()
                .map_err(|e| Error::Io(format!("bad label {:?}: {e}", &record[3])))?;
            intended.push(Some(label));
        }
    }
    let sidecar_path = meta_path(csv_path);
    let raw = std::fs::read(&sidecar_path)
        .map_err(|e| Error::Io(format!("missing sidecar {}: {e}", sidecar_path.display())))?;
    let sidecar: Sidecar<F> = serde_json::from_slice(&raw)?;
    Ok(LabeledDataset {
        dataset: Dataset::new(points)?,
        intended,
        intended_centers: sidecar.intended_centers,
        config: sidecar.config,
    })
}
