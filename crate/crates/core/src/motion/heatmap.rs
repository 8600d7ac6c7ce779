use std::fs;
use std::path::{Path, PathBuf};

use super::{ForegroundMask, MotionError, PixelRect};
use crate::ingest::IngestError;

/// Binary thresholding of a rendered mask: values strictly above `thresh`
/// become `maxval`, everything else 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdParams {
    pub thresh: u8,
    pub maxval: u8,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        ThresholdParams {
            thresh: 1,
            maxval: 255,
        }
    }
}

pub fn threshold_mask(mask: &ForegroundMask, params: &ThresholdParams) -> ForegroundMask {
    ForegroundMask {
        values: mask
            .values
            .iter()
            .map(|&v| if v > params.thresh { params.maxval } else { 0 })
            .collect(),
        ..mask.clone()
    }
}

/// Per-pixel count of active frames, saturating at 255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionHeatmap {
    pub width: u32,
    pub height: u32,
    pub counts: Vec<u8>,
}

impl MotionHeatmap {
    pub fn new(width: u32, height: u32) -> Self {
        MotionHeatmap {
            width,
            height,
            counts: vec![0; width as usize * height as usize],
        }
    }

    pub fn accumulate(&mut self, mask: &ForegroundMask) -> Result<(), MotionError> {
        if (mask.width, mask.height) != (self.width, self.height) {
            return Err(MotionError::DimensionMismatch {
                frame: mask.frame_index,
                got_w: mask.width,
                got_h: mask.height,
                want_w: self.width,
                want_h: self.height,
            });
        }
        for (c, &v) in self.counts.iter_mut().zip(&mask.values) {
            if v != 0 {
                *c = c.saturating_add(1);
            }
        }
        Ok(())
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.counts[(y * self.width + x) as usize]
    }
}

pub fn accumulate_heatmap(masks: &[ForegroundMask]) -> Result<MotionHeatmap, MotionError> {
    let first = masks.first().ok_or(MotionError::NoMasks)?;
    let mut h = MotionHeatmap::new(first.width, first.height);
    for m in masks {
        h.accumulate(m)?;
    }
    Ok(h)
}

/// Mean over pixels of `100 * count / 255`, optionally restricted to the
/// pixels covered by `region`.
pub fn activity_score(h: &MotionHeatmap, region: Option<&PixelRect>) -> Result<f64, MotionError> {
    let (sum, n) = match region {
        None => (
            h.counts.iter().map(|&c| u64::from(c)).sum::<u64>(),
            h.counts.len() as u64,
        ),
        Some(r) => {
            let (xs, ys) = r.pixel_span(h.width, h.height);
            let mut sum = 0u64;
            for y in ys.clone() {
                for x in xs.clone() {
                    sum += u64::from(h.get(x, y));
                }
            }
            (sum, xs.len() as u64 * ys.len() as u64)
        }
    };
    if n == 0 {
        return Err(MotionError::EmptyRegion {
            width: h.width,
            height: h.height,
        });
    }
    Ok(100.0 * sum as f64 / (255.0 * n as f64))
}

/// Writes `<stem>.pgm` (counts as gray levels) and `<stem>.activity.txt`
/// into `dir`; returns both paths.
pub fn export_heatmap(
    dir: &Path,
    stem: &str,
    heatmap: &MotionHeatmap,
    activity: f64,
) -> Result<(PathBuf, PathBuf), IngestError> {
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;
    let image = dir.join(format!("{stem}.pgm"));
    crate::ingest::write_graymap_file(&image, heatmap.width, heatmap.height, heatmap.counts.clone())?;
    let sidecar = dir.join(format!("{stem}.activity.txt"));
    fs::write(&sidecar, format!("activity_percent = {activity}\n"))
        .map_err(|e| IngestError::io(&sidecar, e))?;
    Ok((image, sidecar))
}
