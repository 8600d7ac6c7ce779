//! Lloyd's k-means with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MotionError;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster index for each input point.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster squared error after each Lloyd iteration.
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    /// `false` when the iteration cap was hit before assignments settled.
    pub converged: bool,
}

impl Clustering {
    pub fn objective(&self) -> f64 {
        self.objective_history.last().copied().unwrap_or(0.0)
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignments
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == cluster)
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeans {
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl KMeans {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeans {
            k,
            max_iterations: 100,
            seed,
        }
    }

    /// Seeds centroids with k-means++ and runs Lloyd iterations.
    pub fn fit(&self, points: &[Vec<f64>]) -> Result<Clustering, MotionError> {
        validate(points, self.k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let init = plus_plus_init(points, self.k, &mut rng);
        Ok(self.lloyd(points, init))
    }

    /// Runs Lloyd iterations from the given centroids.
    pub fn fit_from(
        &self,
        points: &[Vec<f64>],
        centroids: Vec<Vec<f64>>,
    ) -> Result<Clustering, MotionError> {
        validate(points, self.k)?;
        let dim = points[0].len();
        if centroids.len() != self.k || centroids.iter().any(|c| c.len() != dim) {
            return Err(MotionError::KMeans(format!(
                "expected {} initial centroids of dimension {dim}",
                self.k
            )));
        }
        Ok(self.lloyd(points, centroids))
    }

    fn lloyd(&self, points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> Clustering {
        let k = self.k;
        let mut assignments = vec![usize::MAX; points.len()];
        let mut history = Vec::new();
        let mut converged = false;
        let mut iterations = 0;

        while iterations < self.max_iterations {
            let changed = assign(points, &centroids, &mut assignments);
            if !changed {
                converged = true;
                break;
            }
            repair_empty(points, &mut centroids, &mut assignments, k);
            centroids = means(points, &assignments, &centroids);
            history.push(within_cluster_sse(points, &assignments, &centroids));
            iterations += 1;
        }
        if !converged {
            log::warn!("k-means stopped after {iterations} iterations without converging");
        }
        Clustering {
            assignments,
            centroids,
            objective_history: history,
            iterations,
            converged,
        }
    }
}

/// Convenience wrapper: k-means++ seeded Lloyd with the default cap.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<Clustering, MotionError> {
    KMeans::new(k, seed).fit(points)
}

fn validate(points: &[Vec<f64>], k: usize) -> Result<(), MotionError> {
    if k == 0 {
        return Err(MotionError::KMeans("k must be at least 1".into()));
    }
    let first = points
        .first()
        .ok_or_else(|| MotionError::KMeans("no points to cluster".into()))?;
    if first.is_empty() || points.iter().any(|p| p.len() != first.len()) {
        return Err(MotionError::KMeans("points must share a non-zero dimension".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(MotionError::KMeans("points must be finite".into()));
    }
    let distinct = distinct_count(points);
    if k > distinct {
        return Err(MotionError::KMeans(format!(
            "k = {k} exceeds the {distinct} distinct point(s)"
        )));
    }
    Ok(())
}

pub fn distinct_count(points: &[Vec<f64>]) -> usize {
    let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
    let cmp = |a: &&Vec<f64>, b: &&Vec<f64>| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    sorted.sort_by(cmp);
    sorted.dedup_by(|a, b| cmp(a, b).is_eq());
    sorted.len()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        // k <= distinct points, so some point is still uncovered
        let mut target = rng.random::<f64>() * total;
        let mut pick = d2.iter().rposition(|&d| d > 0.0).unwrap_or(0);
        for (i, &d) in d2.iter().enumerate() {
            if d > 0.0 && target < d {
                pick = i;
                break;
            }
            target -= d;
        }
        let c = points[pick].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(dist2(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// Moves each point to its nearest centroid; a point only leaves its current
/// cluster for a strictly closer one. Returns whether anything moved.
fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>], assignments: &mut [usize]) -> bool {
    let mut changed = false;
    for (p, a) in points.iter().zip(assignments.iter_mut()) {
        let (mut best, mut best_d) = if *a == usize::MAX {
            (0, dist2(p, &centroids[0]))
        } else {
            (*a, dist2(p, &centroids[*a]))
        };
        for (j, c) in centroids.iter().enumerate() {
            let d = dist2(p, c);
            if d < best_d {
                best = j;
                best_d = d;
            }
        }
        if *a != best {
            *a = best;
            changed = true;
        }
    }
    changed
}

/// Gives each empty cluster the point farthest from its own centroid.
fn repair_empty(
    points: &[Vec<f64>],
    centroids: &mut [Vec<f64>],
    assignments: &mut [usize],
    k: usize,
) {
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignments.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..points.len())
            .filter(|&i| sizes[assignments[i]] > 1)
            .max_by(|&i, &j| {
                dist2(&points[i], &centroids[assignments[i]])
                    .total_cmp(&dist2(&points[j], &centroids[assignments[j]]))
                    .then(j.cmp(&i))
            });
        let Some(i) = donor else {
            return;
        };
        assignments[i] = empty;
        centroids[empty] = points[i].clone();
    }
}

fn means(points: &[Vec<f64>], assignments: &[usize], previous: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; previous.len()];
    let mut counts = vec![0usize; previous.len()];
    for (p, &a) in points.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(p) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .zip(previous)
        .map(|((s, n), prev)| {
            if n == 0 {
                prev.clone()
            } else {
                s.into_iter().map(|v| v / n as f64).collect()
            }
        })
        .collect()
}

pub fn within_cluster_sse(points: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| dist2(p, &centroids[a]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exhaustive_kmeans;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<Vec<f64>> {
        raw.iter().map(|&(x, y)| vec![x, y]).collect()
    }

    #[test]
    fn two_obvious_groups() {
        let p = pts(&[(0.0, 0.0), (0.0, 1.0), (10.0, 10.0), (10.0, 11.0)]);
        let c = kmeans(&p, 2, 7).unwrap();
        assert!(c.converged);
        assert_eq!(c.assignments[0], c.assignments[1]);
        assert_eq!(c.assignments[2], c.assignments[3]);
        assert_ne!(c.assignments[0], c.assignments[2]);
        let (best, _) = exhaustive_kmeans(&p, 2);
        assert!((c.objective() - best).abs() < 1e-12);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let p = pts(&[(1.0, 2.0), (3.0, 4.0), (5.0, 9.0)]);
        let c = kmeans(&p, 1, 0).unwrap();
        assert_eq!(c.centroids, vec![vec![3.0, 5.0]]);
    }

    #[test]
    fn too_few_distinct_points() {
        let p = pts(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)]);
        assert!(matches!(kmeans(&p, 2, 0), Err(MotionError::KMeans(_))));
        assert!(kmeans(&[], 1, 0).is_err());
        assert!(kmeans(&p, 0, 0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let p: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i * 37 % 17) as f64, (i * 11 % 13) as f64])
            .collect();
        assert_eq!(kmeans(&p, 4, 99).unwrap(), kmeans(&p, 4, 99).unwrap());
    }

    #[test]
    fn empty_cluster_repaired() {
        // both initial centroids sit on the left group; the right one starts empty
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (100.0, 0.0)]);
        let c = KMeans::new(2, 0)
            .fit_from(&p, vec![vec![0.5, 0.0], vec![0.5, 0.0]])
            .unwrap();
        let sizes: Vec<usize> = (0..2).map(|k| c.members(k).count()).collect();
        assert!(sizes.iter().all(|&s| s > 0), "{sizes:?}");
        assert!((c.objective() - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn objective_never_increases(
            raw in prop::collection::vec((-50i32..50, -50i32..50), 2..40),
            k in 1usize..6,
            seed in any::<u64>(),
        ) {
            let p: Vec<Vec<f64>> = raw.iter().map(|&(x, y)| vec![x as f64, y as f64]).collect();
            prop_assume!(k <= distinct_count(&p));
            let c = kmeans(&p, k, seed).unwrap();
            for w in c.objective_history.windows(2) {
                prop_assert!(w[1] <= w[0], "{:?}", c.objective_history);
            }
            prop_assert!(c.converged);
        }
    }
}
