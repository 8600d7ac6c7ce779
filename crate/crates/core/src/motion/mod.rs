//! Motion activity: per-pixel background model, foreground masks, the
//! accumulated motion heatmap and its activity percentage, plus k-means
//! clustering of person boxes to isolate the youth's region.

mod heatmap;
mod kmeans;
mod mog;
mod region;

use thiserror::Error;

pub use heatmap::{
    accumulate_heatmap, activity_score, export_heatmap, threshold_mask, MotionHeatmap,
    ThresholdParams,
};
pub use kmeans::{distinct_count, kmeans, within_cluster_sse, Clustering, KMeans};
pub use mog::{BackgroundSubtractor, MixtureBackground, MixtureParams};
pub use region::{
    max_simultaneous_persons, select_youth_region, BoxCluster, ClusterFeatures, ClusterIndex,
    LargestMeanArea, PixelRect, RegionOptions, RegionSelector, YouthRegion,
};

use crate::ingest::GrayFrame;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("no frames to process")]
    NoFrames,
    #[error("no masks to accumulate")]
    NoMasks,
    #[error("frame {frame} is {got_w}x{got_h}, expected {want_w}x{want_h}")]
    DimensionMismatch {
        frame: u64,
        got_w: u32,
        got_h: u32,
        want_w: u32,
        want_h: u32,
    },
    #[error("region covers no pixels of the {width}x{height} heatmap")]
    EmptyRegion { width: u32, height: u32 },
    #[error("no person detections")]
    NoDetections,
    #[error("k-means: {0}")]
    KMeans(String),
    #[error("cluster index {index} out of range ({count} clusters)")]
    ClusterIndex { index: usize, count: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Per-pixel foreground decision for one frame, as 8-bit values
/// (0 = background). Subtractors emit 0/255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForegroundMask {
    pub frame_index: u64,
    pub width: u32,
    pub height: u32,
    pub values: Vec<u8>,
}

impl ForegroundMask {
    pub fn background(frame_index: u64, width: u32, height: u32) -> Self {
        ForegroundMask {
            frame_index,
            width,
            height,
            values: vec![0; width as usize * height as usize],
        }
    }

    pub fn from_bits(frame_index: u64, width: u32, height: u32, bits: &[bool]) -> Self {
        ForegroundMask {
            frame_index,
            width,
            height,
            values: bits.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.values[i] != 0
    }

    pub fn active_count(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }
}

/// Streams `frames` through a background model and thresholding into a
/// motion heatmap without keeping the masks.
pub fn heatmap_from_frames(
    frames: &[GrayFrame],
    subtractor: &mut dyn BackgroundSubtractor,
    threshold: &ThresholdParams,
) -> Result<MotionHeatmap, MotionError> {
    let first = frames.first().ok_or(MotionError::NoFrames)?;
    let mut heatmap = MotionHeatmap::new(first.width, first.height);
    for frame in frames {
        let mask = subtractor.apply(frame)?;
        heatmap.accumulate(&threshold_mask(&mask, threshold))?;
    }
    Ok(heatmap)
}
