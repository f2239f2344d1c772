//! Euclidean primitives and the k-means cost in its two algebraic forms.
//!
//! The cost of a clustering can be written as the sum of squared distances to
//! cluster centroids, or equivalently as half the normalized sum of pairwise
//! squared distances within each cluster. Both forms are implemented; they are
//! used as independent routes for cross-checking each other in tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Float;

/// A point in Euclidean space of any dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<F> {
    pub coords: Vec<F>,
}

impl<F: Float> Point<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Point { coords }
    }

    /// Convenience constructor for the 2-D case.
    pub fn xy(x: F, y: F) -> Self {
        Point { coords: vec![x, y] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Squared Euclidean distance between two points.
///
/// Symmetric, zero iff the points coincide. Errors if the dimensionalities
/// differ.
pub fn squared_distance<F: Float>(a: &Point<F>, b: &Point<F>) -> Result<F> {
    if a.dim() != b.dim() {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(sqdist(&a.coords, &b.coords))
}

/// Squared distance over raw coordinate slices; callers guarantee equal
/// lengths. This is the hot-loop variant used by assignment and seeding.
pub(crate) fn sqdist<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Coordinate-wise arithmetic mean of a non-empty collection of points.
pub fn centroid<'a, F, I>(points: I) -> Result<Point<F>>
where
    F: Float,
    I: IntoIterator<Item = &'a Point<F>>,
{
    let mut iter = points.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::usage("centroid of an empty point set"))?;
    let mut sum = first.coords.clone();
    let mut count = 1usize;
    for p in iter {
        if p.dim() != sum.len() {
            return Err(Error::usage("centroid over mixed dimensionalities"));
        }
        for (s, &c) in sum.iter_mut().zip(p.coords.iter()) {
            *s += c;
        }
        count += 1;
    }
    let n = F::from_count(count);
    for s in sum.iter_mut() {
        *s /= n;
    }
    Ok(Point::new(sum))
}

/// A non-empty set of points of uniform dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset<F> {
    points: Vec<Point<F>>,
    dim: usize,
}

impl<F: Float> Dataset<F> {
    pub fn new(points: Vec<Point<F>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::usage("dataset must not be empty"))?;
        if dim == 0 {
            return Err(Error::usage("points need at least one coordinate"));
        }
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::usage("all points must share one dimensionality"));
        }
        if points
            .iter()
            .any(|p| p.coords.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::usage("coordinates must be finite"));
        }
        Ok(Dataset { points, dim })
    }

    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point<F> {
        &self.points[i]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A partition of a dataset's point indices into `k` clusters, together with
/// one centroid per cluster.
///
/// In consistent state (after a Lloyd update, or when built through
/// [`Clustering::from_assignment`]) `centroids[j]` is the arithmetic mean of
/// the points assigned to cluster `j`, and every cluster is non-empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering<F> {
    pub assignment: Vec<usize>,
    pub k: usize,
    pub centroids: Vec<Point<F>>,
}

impl<F: Float> Clustering<F> {
    /// Builds a consistent clustering from an assignment: validates that all
    /// `k` clusters are non-empty and computes the per-cluster means.
    pub fn from_assignment(data: &Dataset<F>, assignment: Vec<usize>, k: usize) -> Result<Self> {
        if assignment.len() != data.len() {
            return Err(Error::usage("assignment length differs from dataset size"));
        }
        if k == 0 {
            return Err(Error::usage("k must be positive"));
        }
        let mut counts = vec![0usize; k];
        for &j in &assignment {
            if j >= k {
                return Err(Error::usage(format!(
                    "cluster index {j} out of range 0..{k}"
                )));
            }
            counts[j] += 1;
        }
        if let Some(j) = counts.iter().position(|&c| c == 0) {
            return Err(Error::usage(format!("cluster {j} is empty")));
        }
        let mut sums = vec![vec![F::zero(); data.dim()]; k];
        for (i, &j) in assignment.iter().enumerate() {
            for (s, &c) in sums[j].iter_mut().zip(data.point(i).coords.iter()) {
                *s += c;
            }
        }
        let centroids = sums
            .into_iter()
            .zip(counts.iter())
            .map(|(mut sum, &n)| {
                let n = F::from_count(n);
                for s in sum.iter_mut() {
                    *s /= n;
                }
                Point::new(sum)
            })
            .collect();
        Ok(Clustering {
            assignment,
            k,
            centroids,
        })
    }

    /// Point indices grouped per cluster, in index order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.k];
        for (i, &j) in self.assignment.iter().enumerate() {
            groups[j].push(i);
        }
        groups
    }

    fn check_against<G: Float>(&self, data: &Dataset<G>) -> Result<()> {
        if self.assignment.len() != data.len() {
            return Err(Error::usage("clustering does not cover the dataset"));
        }
        if let Some(&j) = self.assignment.iter().find(|&&j| j >= self.k) {
            return Err(Error::usage(format!(
                "cluster index {j} out of range 0..{}",
                self.k
            )));
        }
        Ok(())
    }
}

/// k-means cost, centroid form: the sum over points of the squared distance
/// to the centroid of the cluster the point is assigned to.
pub fn cost_centroid_form<F: Float>(data: &Dataset<F>, g: &Clustering<F>) -> Result<F> {
    g.check_against(data)?;
    if g.centroids.len() != g.k {
        return Err(Error::usage("centroid list does not match k"));
    }
    if g.centroids.iter().any(|c| c.dim() != data.dim()) {
        return Err(Error::usage("centroid dimensionality differs from data"));
    }
    let mut total = F::zero();
    for (i, &j) in g.assignment.iter().enumerate() {
        total += sqdist(&data.point(i).coords, &g.centroids[j].coords);
    }
    Ok(total)
}

/// k-means cost, pairwise form: half the sum, over clusters, of all pairwise
/// squared distances within the cluster divided by the cluster size.
///
/// Algebraically equal to [`cost_centroid_form`]; does not touch the
/// centroids at all, which makes it an independent evaluation route.
pub fn cost_pairwise_form<F: Float>(data: &Dataset<F>, g: &Clustering<F>) -> Result<F> {
    g.check_against(data)?;
    let mut groups = vec![Vec::new(); g.k];
    for (i, &j) in g.assignment.iter().enumerate() {
        groups[j].push(i);
    }
    let mut total = F::zero();
    for group in &groups {
        if group.len() < 2 {
            continue;
        }
        let mut acc = F::zero();
        for (a, &i) in group.iter().enumerate() {
            for &l in &group[a + 1..] {
                acc += sqdist(&data.point(i).coords, &data.point(l).coords);
            }
        }
        // Each unordered pair appears twice in the double sum of the
        // definition, which cancels the leading 1/2.
        total += acc / F::from_count(group.len());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(coords: &[f64]) -> Point<f64> {
        Point::new(coords.to_vec())
    }

    #[test]
    fn squared_distance_identity() {
        assert_eq!(
            squared_distance(&p(&[0.0, 0.0]), &p(&[0.0, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn squared_distance_three_four_five() {
        assert_eq!(
            squared_distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0])).unwrap(),
            25.0
        );
    }

    #[test]
    fn squared_distance_translation() {
        assert_eq!(
            squared_distance(&p(&[1.0, 2.0]), &p(&[4.0, 6.0])).unwrap(),
            25.0
        );
    }

    #[test]
    fn squared_distance_symmetric() {
        let (a, b) = (p(&[1.5, -2.0]), p(&[0.25, 7.0]));
        assert_eq!(
            squared_distance(&a, &b).unwrap(),
            squared_distance(&b, &a).unwrap()
        );
    }

    #[test]
    fn squared_distance_dim_mismatch() {
        let err = squared_distance(&p(&[0.0]), &p(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn centroid_singleton() {
        let pts = [p(&[0.0, 0.0])];
        assert_eq!(centroid(pts.iter()).unwrap(), p(&[0.0, 0.0]));
    }

    #[test]
    fn centroid_midpoint() {
        let pts = [p(&[0.0, 0.0]), p(&[2.0, 0.0])];
        assert_eq!(centroid(pts.iter()).unwrap(), p(&[1.0, 0.0]));
    }

    #[test]
    fn centroid_square() {
        let pts = [
            p(&[0.0, 0.0]),
            p(&[0.0, 3.0]),
            p(&[3.0, 0.0]),
            p(&[3.0, 3.0]),
        ];
        assert_eq!(centroid(pts.iter()).unwrap(), p(&[1.5, 1.5]));
    }

    #[test]
    fn centroid_empty_is_usage_error() {
        let pts: [Point<f64>; 0] = [];
        assert!(matches!(centroid(pts.iter()), Err(Error::Usage(_))));
    }

    #[test]
    fn dataset_rejects_empty_and_mixed_dims() {
        assert!(Dataset::<f64>::new(vec![]).is_err());
        assert!(Dataset::new(vec![p(&[0.0]), p(&[0.0, 1.0])]).is_err());
        assert!(Dataset::new(vec![p(&[f64::NAN])]).is_err());
    }

    #[test]
    fn cost_single_point_is_zero() {
        let d = Dataset::new(vec![p(&[0.0, 0.0])]).unwrap();
        let g = Clustering::from_assignment(&d, vec![0], 1).unwrap();
        assert_eq!(cost_centroid_form(&d, &g).unwrap(), 0.0);
    }

    #[test]
    fn cost_two_points_one_cluster() {
        let d = Dataset::new(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0])]).unwrap();
        let g = Clustering::from_assignment(&d, vec![0, 0], 1).unwrap();
        assert_eq!(cost_centroid_form(&d, &g).unwrap(), 2.0);
        assert_eq!(cost_pairwise_form(&d, &g).unwrap(), 2.0);
    }

    #[test]
    fn cost_singleton_cluster_adds_nothing() {
        let d = Dataset::new(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[10.0, 0.0])]).unwrap();
        let g = Clustering::from_assignment(&d, vec![0, 0, 1], 2).unwrap();
        assert_eq!(cost_centroid_form(&d, &g).unwrap(), 2.0);
        assert_eq!(cost_pairwise_form(&d, &g).unwrap(), 2.0);
    }

    #[test]
    fn cost_rejects_out_of_range_assignment() {
        let d = Dataset::new(vec![p(&[0.0]), p(&[1.0])]).unwrap();
        let g = Clustering {
            assignment: vec![0, 2],
            k: 2,
            centroids: vec![p(&[0.0]), p(&[1.0])],
        };
        assert!(matches!(cost_centroid_form(&d, &g), Err(Error::Usage(_))));
        assert!(matches!(cost_pairwise_form(&d, &g), Err(Error::Usage(_))));
    }

    #[test]
    fn cost_forms_agree_on_random_instance() {
        // 20 points, k = 3, fixed arbitrary coordinates and assignment.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Point<f64>> = (0..20)
            .map(|_| Point::xy(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let d = Dataset::new(pts).unwrap();
        let mut assignment: Vec<usize> = (0..20).map(|i| i % 3).collect();
        for a in assignment.iter_mut() {
            if rng.random_range(0..4) == 0 {
                *a = rng.random_range(0..3);
            }
        }
        // keep all three clusters inhabited
        assignment[0] = 0;
        assignment[1] = 1;
        assignment[2] = 2;
        let g = Clustering::from_assignment(&d, assignment, 3).unwrap();
        let a = cost_centroid_form(&d, &g).unwrap();
        let b = cost_pairwise_form(&d, &g).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn from_assignment_rejects_empty_cluster() {
        let d = Dataset::new(vec![p(&[0.0]), p(&[1.0])]).unwrap();
        assert!(matches!(
            Clustering::from_assignment(&d, vec![0, 0], 2),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn centroid_minimizes_sum_of_squares() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point<f64>> = (0..17)
            .map(|_| Point::xy(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let c = centroid(pts.iter()).unwrap();
        let at = |q: &Point<f64>| -> f64 {
            pts.iter()
                .map(|x| squared_distance(x, q).unwrap())
                .sum::<f64>()
        };
        let base = at(&c);
        for _ in 0..100 {
            let jitter = Point::xy(
                c.coords[0] + rng.random_range(-1.0..1.0),
                c.coords[1] + rng.random_range(-1.0..1.0),
            );
            assert!(at(&jitter) >= base);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let d = Dataset::new(vec![Point::<f32>::xy(0.0, 0.0), Point::<f32>::xy(2.0, 0.0)]).unwrap();
        let g = Clustering::from_assignment(&d, vec![0, 0], 1).unwrap();
        assert_eq!(cost_centroid_form(&d, &g).unwrap(), 2.0f32);
    }
}
