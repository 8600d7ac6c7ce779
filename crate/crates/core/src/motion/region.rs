//! Selecting the youth's region from person detections.
//!
//! Boxes from the whole video are clustered with k equal to the largest
//! number of people seen in a single frame, so the interviewer (when in
//! shot) ends up in a separate cluster. A [`RegionSelector`] then picks the
//! youth's cluster.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{distinct_count, KMeans, MotionError};
use crate::ingest::DetectionBox;

/// Rectangle in continuous pixel coordinates, `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelRect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl PixelRect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        PixelRect { x0, y0, x1, y1 }
    }

    pub fn of_box(b: &DetectionBox) -> Self {
        PixelRect::new(b.x, b.y, b.x + b.w, b.y + b.h)
    }

    pub fn union(&self, other: &PixelRect) -> PixelRect {
        PixelRect::new(
            self.x0.min(other.x0),
            self.y0.min(other.y0),
            self.x1.max(other.x1),
            self.y1.max(other.y1),
        )
    }

    pub fn clamp_to(&self, width: u32, height: u32) -> PixelRect {
        let (w, h) = (f64::from(width), f64::from(height));
        PixelRect::new(
            self.x0.clamp(0.0, w),
            self.y0.clamp(0.0, h),
            self.x1.clamp(0.0, w),
            self.y1.clamp(0.0, h),
        )
    }

    /// Pixel columns and rows touched by the rectangle inside a
    /// `width x height` grid.
    pub fn pixel_span(&self, width: u32, height: u32) -> (Range<u32>, Range<u32>) {
        let span = |lo: f64, hi: f64, n: u32| {
            let start = lo.floor().max(0.0).min(f64::from(n)) as u32;
            let end = hi.ceil().max(0.0).min(f64::from(n)) as u32;
            start..end.max(start)
        };
        (span(self.x0, self.x1, width), span(self.y0, self.y1, height))
    }
}

/// What each box contributes to clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterFeatures {
    /// 2-d box centers.
    #[default]
    Center,
    /// 4-d `(x0, y0, x1, y1)` corners.
    Corners,
}

impl ClusterFeatures {
    fn vector(self, b: &DetectionBox) -> Vec<f64> {
        match self {
            ClusterFeatures::Center => {
                let (cx, cy) = b.center();
                vec![cx, cy]
            }
            ClusterFeatures::Corners => vec![b.x, b.y, b.x + b.w, b.y + b.h],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCluster {
    pub id: usize,
    pub members: Vec<DetectionBox>,
}

impl BoxCluster {
    pub fn mean_area(&self) -> f64 {
        self.members.iter().map(DetectionBox::area).sum::<f64>() / self.members.len() as f64
    }

    pub fn mean_center(&self) -> (f64, f64) {
        let n = self.members.len() as f64;
        let (sx, sy) = self
            .members
            .iter()
            .map(DetectionBox::center)
            .fold((0.0, 0.0), |(ax, ay), (x, y)| (ax + x, ay + y));
        (sx / n, sy / n)
    }

    pub fn bounds(&self) -> PixelRect {
        let first = PixelRect::of_box(&self.members[0]);
        self.members[1..]
            .iter()
            .fold(first, |r, b| r.union(&PixelRect::of_box(b)))
    }
}

/// Picks the youth's cluster. Clusters arrive ordered left to right by mean
/// box center (ties broken top to bottom) with ids `0..k` in that order.
pub trait RegionSelector: Send + Sync {
    fn name(&self) -> &'static str;
    fn select(&self, clusters: &[BoxCluster]) -> Result<usize, MotionError>;
}

/// The cluster whose boxes are largest on average; the youth sits closest
/// to the camera.
#[derive(Debug, Clone, Copy, Default)]
pub struct LargestMeanArea;

impl RegionSelector for LargestMeanArea {
    fn name(&self) -> &'static str {
        "largest-mean-area"
    }

    fn select(&self, clusters: &[BoxCluster]) -> Result<usize, MotionError> {
        clusters
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.mean_area().total_cmp(&b.mean_area()).then(j.cmp(i)))
            .map(|(i, _)| i)
            .ok_or(MotionError::NoDetections)
    }
}

/// A fixed cluster position from configuration.
#[derive(Debug, Clone, Copy)]
pub struct ClusterIndex(pub usize);

impl RegionSelector for ClusterIndex {
    fn name(&self) -> &'static str {
        "index"
    }

    fn select(&self, clusters: &[BoxCluster]) -> Result<usize, MotionError> {
        if self.0 < clusters.len() {
            Ok(self.0)
        } else {
            Err(MotionError::ClusterIndex {
                index: self.0,
                count: clusters.len(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOptions {
    pub features: ClusterFeatures,
    pub max_iterations: usize,
    pub seed: u64,
    /// Frame size for clamping the region, when known.
    pub frame_size: Option<(u32, u32)>,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            features: ClusterFeatures::Center,
            max_iterations: 100,
            seed: 0,
            frame_size: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YouthRegion {
    pub cluster_id: usize,
    /// Number of clusters the boxes were split into.
    pub k: usize,
    pub members: Vec<DetectionBox>,
    /// Union of the member boxes, clamped to the frame when its size is known.
    pub region: PixelRect,
}

pub fn max_simultaneous_persons(detections: &[DetectionBox]) -> usize {
    let mut per_frame: BTreeMap<u64, usize> = BTreeMap::new();
    for d in detections {
        *per_frame.entry(d.frame_index).or_default() += 1;
    }
    per_frame.values().copied().max().unwrap_or(0)
}

pub fn select_youth_region(
    detections: &[DetectionBox],
    selector: &dyn RegionSelector,
    opts: &RegionOptions,
) -> Result<YouthRegion, MotionError> {
    if detections.is_empty() {
        return Err(MotionError::NoDetections);
    }
    let points: Vec<Vec<f64>> = detections.iter().map(|b| opts.features.vector(b)).collect();
    let mut k = max_simultaneous_persons(detections);
    let distinct = distinct_count(&points);
    if k > distinct {
        log::warn!("only {distinct} distinct box position(s) for {k} people; clustering with k = {distinct}");
        k = distinct;
    }
    let clustering = KMeans {
        k,
        max_iterations: opts.max_iterations,
        seed: opts.seed,
    }
    .fit(&points)?;

    let mut clusters: Vec<BoxCluster> = (0..k)
        .map(|c| BoxCluster {
            id: c,
            members: clustering.members(c).map(|i| detections[i].clone()).collect(),
        })
        .filter(|c| !c.members.is_empty())
        .collect();
    clusters.sort_by(|a, b| {
        let (ax, ay) = a.mean_center();
        let (bx, by) = b.mean_center();
        ax.total_cmp(&bx).then(ay.total_cmp(&by))
    });
    for (i, c) in clusters.iter_mut().enumerate() {
        c.id = i;
    }

    let chosen = selector.select(&clusters)?;
    let cluster = clusters.swap_remove(chosen);
    let mut region = cluster.bounds();
    if let Some((w, h)) = opts.frame_size {
        region = region.clamp_to(w, h);
    }
    Ok(YouthRegion {
        cluster_id: chosen,
        k,
        members: cluster.members,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn person(frame: u64, x: f64, y: f64, w: f64, h: f64) -> DetectionBox {
        DetectionBox {
            frame_index: frame,
            class_label: "person".into(),
            x,
            y,
            w,
            h,
            confidence: 0.9,
        }
    }

    /// Youth: large boxes on the left. Interviewer: small boxes on the right,
    /// present in some frames.
    fn two_people() -> Vec<DetectionBox> {
        let mut d = Vec::new();
        for f in 0..10 {
            d.push(person(f, 10.0 + f as f64, 20.0, 100.0, 150.0));
            if f % 2 == 0 {
                d.push(person(f, 300.0, 40.0 + f as f64, 40.0, 60.0));
            }
        }
        d
    }

    #[test]
    fn single_person_region_is_union() {
        let d = vec![person(0, 10.0, 10.0, 20.0, 20.0), person(1, 15.0, 5.0, 20.0, 20.0)];
        let r = select_youth_region(&d, &LargestMeanArea, &RegionOptions::default()).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.members.len(), 2);
        assert_eq!(r.region, PixelRect::new(10.0, 5.0, 35.0, 30.0));
    }

    #[test]
    fn largest_area_picks_youth() {
        let r = select_youth_region(&two_people(), &LargestMeanArea, &RegionOptions::default())
            .unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(r.members.len(), 10);
        assert!(r.members.iter().all(|b| b.w == 100.0));
        assert_eq!(r.cluster_id, 0);
    }

    #[test]
    fn explicit_index_overrides_area() {
        let r = select_youth_region(&two_people(), &ClusterIndex(1), &RegionOptions::default())
            .unwrap();
        assert_eq!(r.cluster_id, 1);
        assert!(r.members.iter().all(|b| b.w == 40.0));
        assert!(select_youth_region(&two_people(), &ClusterIndex(2), &RegionOptions::default())
            .is_err());
    }

    #[test]
    fn corner_features_agree_here() {
        let opts = RegionOptions {
            features: ClusterFeatures::Corners,
            ..Default::default()
        };
        let r = select_youth_region(&two_people(), &LargestMeanArea, &opts).unwrap();
        assert!(r.members.iter().all(|b| b.w == 100.0));
    }

    #[test]
    fn region_clamped_to_frame() {
        let d = vec![person(0, -10.0, -5.0, 50.0, 500.0)];
        let opts = RegionOptions {
            frame_size: Some((32, 24)),
            ..Default::default()
        };
        let r = select_youth_region(&d, &LargestMeanArea, &opts).unwrap();
        assert_eq!(r.region, PixelRect::new(0.0, 0.0, 32.0, 24.0));
    }

    #[test]
    fn no_detections() {
        assert_eq!(
            select_youth_region(&[], &LargestMeanArea, &RegionOptions::default()),
            Err(MotionError::NoDetections)
        );
    }

    #[test]
    fn pixel_span_rounds_outward() {
        let r = PixelRect::new(0.5, 1.2, 2.1, 3.0);
        assert_eq!(r.pixel_span(10, 10), (0..3, 1..3));
        assert_eq!(PixelRect::new(5.0, 5.0, 9.0, 9.0).pixel_span(4, 4), (4..4, 4..4));
    }
}
