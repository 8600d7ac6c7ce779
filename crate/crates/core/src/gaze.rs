//! Gaze concept: share of tracked frames whose gaze angles fall inside the
//! rectangle spanned by a clip of known eye contact.
//!
//! Frames where the tracker failed are excluded from both the rectangle fit
//! and the score, so a tracking failure is never counted as gaze aversion.

use thiserror::Error;

use crate::ingest::GazeSample;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GazeError {
    #[error("calibration clip has no successfully tracked frames")]
    EmptyCalibration,
    #[error("scored clip has no successfully tracked frames")]
    EmptyScored,
}

/// Closed axis-aligned rectangle in gaze-angle space (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GazeRectangle {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl GazeRectangle {
    /// Bounds are inclusive.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.min_x..=self.max_x).contains(&x) && (self.min_y..=self.max_y).contains(&y)
    }

    /// The rectangle grown by `margin` on every side.
    pub fn expanded(&self, margin: f64) -> GazeRectangle {
        GazeRectangle {
            min_x: self.min_x - margin,
            max_x: self.max_x + margin,
            min_y: self.min_y - margin,
            max_y: self.max_y + margin,
        }
    }
}

fn tracked(samples: &[GazeSample]) -> impl Iterator<Item = &GazeSample> {
    samples.iter().filter(|s| s.success)
}

pub fn fit_gaze_rectangle(calibration: &[GazeSample]) -> Result<GazeRectangle, GazeError> {
    let mut it = tracked(calibration);
    let first = it.next().ok_or(GazeError::EmptyCalibration)?;
    let init = GazeRectangle {
        min_x: first.gaze_angle_x,
        max_x: first.gaze_angle_x,
        min_y: first.gaze_angle_y,
        max_y: first.gaze_angle_y,
    };
    Ok(it.fold(init, |r, s| GazeRectangle {
        min_x: r.min_x.min(s.gaze_angle_x),
        max_x: r.max_x.max(s.gaze_angle_x),
        min_y: r.min_y.min(s.gaze_angle_y),
        max_y: r.max_y.max(s.gaze_angle_y),
    }))
}

/// Percentage of tracked frames in `scored` whose gaze lies in `rect`.
pub fn gaze_score(scored: &[GazeSample], rect: &GazeRectangle) -> Result<f64, GazeError> {
    let (inside, total) = tracked(scored).fold((0usize, 0usize), |(i, t), s| {
        (i + usize::from(rect.contains(s.gaze_angle_x, s.gaze_angle_y)), t + 1)
    });
    if total == 0 {
        return Err(GazeError::EmptyScored);
    }
    Ok(100.0 * inside as f64 / total as f64)
}
