//! Independent reference implementations used by tests, the self-test and
//! the acceptance suite. Each one restates a rule directly and favors
//! obviousness over speed, sharing no code with the production path.

use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::ingest::{AUFrame, EmotionFrame, GazeSample};
use crate::motion::{ForegroundMask, MixtureParams};
use crate::rating::RatingTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mouth {
    Closed,
    LipsApart,
    JawOpen,
    Nothing,
}

fn mouth_of(frame: &AUFrame) -> Mouth {
    let on = |au: u8| frame.intensity.get(&au).is_some_and(|&v| v >= 1.0);
    if on(26) {
        Mouth::JawOpen
    } else if on(25) {
        Mouth::LipsApart
    } else if [10, 12, 14, 15, 17, 20, 23].into_iter().any(on) {
        Mouth::Closed
    } else {
        Mouth::Nothing
    }
}

/// Classifies every frame first, then counts each bucket separately.
pub fn vocalization_reference(frames: &[AUFrame]) -> Option<f64> {
    let labels: Vec<Mouth> = frames.iter().map(mouth_of).collect();
    let count = |m: Mouth| labels.iter().filter(|&&l| l == m).count() as f64;
    let (low, med, high) = (count(Mouth::Closed), count(Mouth::LipsApart), count(Mouth::JawOpen));
    let n = low + med + high;
    (n > 0.0).then(|| (0.0 * low + 50.0 * med + 100.0 * high) / n)
}

/// Class means in percent, one column at a time, in
/// angry, disgust, fear, happy, neutral, sad, surprise order.
pub fn emotion_means_reference(frames: &[EmotionFrame]) -> Option<[f64; 7]> {
    if frames.is_empty() {
        return None;
    }
    let mut out = [0.0; 7];
    for (class, slot) in out.iter_mut().enumerate() {
        let column: Vec<f64> = frames.iter().map(|f| f.probs[class] * 100.0).collect();
        *slot = column.iter().sum::<f64>() / column.len() as f64;
    }
    Some(out)
}

/// Largest of happy, angry, surprise and the non-neutral share, found by
/// sorting the candidates.
pub fn peak_reference(means: &[f64; 7]) -> f64 {
    let (angry, happy, neutral, surprise) = (means[0], means[3], means[4], means[6]);
    let mut candidates = [happy, angry, surprise, 100.0 - neutral];
    candidates.sort_by(|a, b| b.total_cmp(a));
    candidates[0]
}

pub fn activity_arousal_reference(activity: f64, vocalization: f64, peak: f64) -> f64 {
    [activity, vocalization, peak].iter().sum::<f64>() / 3.0
}

pub fn anxiety_reference(activity: f64, fear: f64, disgust: f64) -> f64 {
    let stronger = if fear >= disgust { fear } else { disgust };
    (activity + stronger) / 2.0
}

pub fn attention_reference(activity: f64, anxiety: f64) -> f64 {
    100.0 - (activity + anxiety) / 2.0
}

/// Nearest of the nine grid values to `1 + 4p/100`, found by enumeration;
/// equidistant candidates resolve to the larger one.
pub fn quantize_reference(percent: f64) -> Option<f64> {
    if !(0.0..=100.0).contains(&percent) {
        return None;
    }
    let s = 1.0 + 4.0 * percent / 100.0;
    let mut best = 1.0;
    for step in 0..9 {
        let g = 1.0 + 0.5 * f64::from(step);
        if (s - g).abs() <= (s - best).abs() {
            best = g;
        }
    }
    Some(best)
}

pub fn gaze_reference(calibration: &[GazeSample], scored: &[GazeSample]) -> Option<f64> {
    let cal: Vec<&GazeSample> = calibration.iter().filter(|s| s.success).collect();
    let xs: Vec<f64> = cal.iter().map(|s| s.gaze_angle_x).collect();
    let ys: Vec<f64> = cal.iter().map(|s| s.gaze_angle_y).collect();
    let lo_x = xs.iter().copied().reduce(f64::min)?;
    let hi_x = xs.iter().copied().reduce(f64::max)?;
    let lo_y = ys.iter().copied().reduce(f64::min)?;
    let hi_y = ys.iter().copied().reduce(f64::max)?;
    let mut inside = 0;
    let mut total = 0;
    for s in scored.iter().filter(|s| s.success) {
        total += 1;
        let x = s.gaze_angle_x;
        let y = s.gaze_angle_y;
        if lo_x <= x && x <= hi_x && lo_y <= y && y <= hi_y {
            inside += 1;
        }
    }
    (total > 0).then(|| 100.0 * f64::from(inside) / f64::from(total))
}

/// Agreement recomputed with nested loops over every video and item.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementRecount {
    pub per_video: Vec<(String, f64)>,
    pub per_item: Vec<(Concept, f64)>,
    pub average: f64,
}

pub fn agreement_recount(a: &RatingTable, b: &RatingTable, items: &[Concept]) -> Option<AgreementRecount> {
    let videos: BTreeSet<String> = a
        .iter()
        .chain(b.iter())
        .map(|(v, _, _)| v.to_string())
        .collect();
    let items: Vec<Concept> = Concept::ALL
        .iter()
        .copied()
        .filter(|c| items.contains(c))
        .collect();
    let close = |x: f64, y: f64| (x - y).abs() <= 1.0;

    let mut per_video = Vec::new();
    for v in &videos {
        let (mut agreed, mut n) = (0usize, 0usize);
        for &c in &items {
            if let (Some(x), Some(y)) = (a.get(v, c), b.get(v, c)) {
                n += 1;
                agreed += usize::from(close(x.value(), y.value()));
            }
        }
        if n > 0 {
            per_video.push((v.clone(), 100.0 * agreed as f64 / n as f64));
        }
    }
    let mut per_item = Vec::new();
    for &c in &items {
        let (mut agreed, mut n) = (0usize, 0usize);
        for v in &videos {
            if let (Some(x), Some(y)) = (a.get(v, c), b.get(v, c)) {
                n += 1;
                agreed += usize::from(close(x.value(), y.value()));
            }
        }
        if n > 0 {
            per_item.push((c, 100.0 * agreed as f64 / n as f64));
        }
    }
    if per_video.is_empty() {
        return None;
    }
    let average = per_video.iter().map(|(_, p)| p).sum::<f64>() / per_video.len() as f64;
    Some(AgreementRecount {
        per_video,
        per_item,
        average,
    })
}

/// Optimal k-means objective over every partition of `points` into exactly
/// `k` non-empty groups, with the centroids of one optimal partition.
/// Exponential; meant for a handful of points.
pub fn exhaustive_kmeans(points: &[Vec<f64>], k: usize) -> (f64, Vec<Vec<f64>>) {
    assert!(k >= 1 && k <= points.len(), "need 1 <= k <= number of points");
    let n = points.len();
    let dim = points[0].len();
    let mut labels = vec![0usize; n];
    let mut best = (f64::INFINITY, Vec::new());

    // restricted growth strings: labels[i] <= 1 + max(labels[..i])
    fn visit(
        i: usize,
        used: usize,
        labels: &mut Vec<usize>,
        points: &[Vec<f64>],
        k: usize,
        dim: usize,
        best: &mut (f64, Vec<Vec<f64>>),
    ) {
        let n = points.len();
        if used + (n - i) < k {
            return;
        }
        if i == n {
            let mut centroids = vec![vec![0.0; dim]; k];
            let mut sizes = vec![0usize; k];
            for (p, &g) in points.iter().zip(labels.iter()) {
                sizes[g] += 1;
                for d in 0..dim {
                    centroids[g][d] += p[d];
                }
            }
            for (c, &s) in centroids.iter_mut().zip(&sizes) {
                for v in c.iter_mut() {
                    *v /= s as f64;
                }
            }
            let mut sse = 0.0;
            for (p, &g) in points.iter().zip(labels.iter()) {
                for d in 0..dim {
                    sse += (p[d] - centroids[g][d]).powi(2);
                }
            }
            if sse < best.0 {
                *best = (sse, centroids);
            }
            return;
        }
        for g in 0..(used + 1).min(k) {
            labels[i] = g;
            visit(i + 1, used.max(g + 1), labels, points, k, dim, best);
        }
    }
    visit(0, 0, &mut labels, points, k, dim, &mut best);
    best
}

/// One pixel modelled by a single adaptive Gaussian with the mixture's
/// update rule. While a pixel only ever matches its dominant component, the
/// mixture reduces to this.
#[derive(Debug, Clone)]
pub struct SingleGaussianReference {
    mean: f64,
    variance: f64,
    params: MixtureParams,
}

impl SingleGaussianReference {
    pub fn new(mean: f64, params: MixtureParams) -> Self {
        SingleGaussianReference {
            mean,
            variance: params.initial_variance,
            params,
        }
    }

    /// Returns whether `x` is foreground, then learns from it.
    pub fn step(&mut self, x: f64) -> bool {
        let p = &self.params;
        let foreground = (x - self.mean).abs() > p.match_threshold * self.variance.sqrt();
        if foreground {
            self.mean = x;
            self.variance = p.initial_variance;
        } else {
            self.mean += p.learning_rate * (x - self.mean);
            let d = x - self.mean;
            self.variance =
                ((1.0 - p.learning_rate) * self.variance + p.learning_rate * d * d).max(p.min_variance);
        }
        foreground
    }
}

/// Per-pixel count of active masks, capped at 255, pixel by pixel.
pub fn heatmap_reference(masks: &[ForegroundMask]) -> Vec<u8> {
    let Some(first) = masks.first() else {
        return Vec::new();
    };
    (0..first.values.len())
        .map(|i| {
            let active = masks.iter().filter(|m| m.values[i] != 0).count();
            active.min(255) as u8
        })
        .collect()
}

/// Mean of the per-pixel percentages `100 * count / 255`.
pub fn activity_reference(counts: &[u8]) -> f64 {
    let percents: Vec<f64> = counts.iter().map(|&c| 100.0 * f64::from(c) / 255.0).collect();
    percents.iter().sum::<f64>() / percents.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_two_groups() {
        let p: Vec<Vec<f64>> = [(0.0, 0.0), (0.0, 1.0), (10.0, 10.0), (10.0, 11.0)]
            .iter()
            .map(|&(x, y)| vec![x, y])
            .collect();
        let (sse, centroids) = exhaustive_kmeans(&p, 2);
        assert_eq!(sse, 1.0);
        assert_eq!(centroids.len(), 2);
        assert_eq!(exhaustive_kmeans(&p, 4).0, 0.0);
        assert_eq!(exhaustive_kmeans(&p, 1).0, 4.0 * 50.0 + 4.0 * 0.25);
    }

    #[test]
    fn quantize_reference_ties_go_up() {
        assert_eq!(quantize_reference(6.25), Some(1.5));
        assert_eq!(quantize_reference(0.0), Some(1.0));
        assert_eq!(quantize_reference(100.0), Some(5.0));
        assert_eq!(quantize_reference(100.1), None);
    }

    #[test]
    fn peak_reference_examples() {
        // angry, disgust, fear, happy, neutral, sad, surprise
        assert_eq!(peak_reference(&[10.0, 0.0, 0.0, 20.0, 60.0, 5.0, 5.0]), 40.0);
        assert_eq!(peak_reference(&[0.0, 0.0, 0.0, 0.0, 100.0, 0.0, 0.0]), 0.0);
    }
}
