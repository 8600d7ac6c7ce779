use std::path::Path;

use super::csvutil::{csv_writer, finish, fmt_f64, write_row, HeaderedCsv};
use super::{EmotionFrame, IngestError, Location, Result};
use crate::affect::Emotion;

/// Allowed deviation of a frame's class-probability sum from 1. Exports
/// rounded to two decimals do not sum to exactly 1.
pub const EMOTION_SUM_TOLERANCE: f64 = 0.02;

// absorbs binary rounding of values like 1.02
const SUM_SLACK: f64 = 1e-9;

/// Parses per-frame expression class scores: a `frame` column plus one
/// column per class (`angry`, `disgust`, `fear`, `happy`, `neutral`, `sad`,
/// `surprise`), probabilities in [0, 1].
pub fn parse_emotion_csv(path: impl AsRef<Path>) -> Result<Vec<EmotionFrame>> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let frame = csv.column("frame")?;
    let mut cols = [0usize; 7];
    for e in Emotion::ALL {
        cols[e.index()] = csv.column(e.name())?;
    }
    let mut out = Vec::new();
    csv.for_each_row(|row| {
        let frame_index = row.index(frame)?;
        let mut probs = [0.0; 7];
        for e in Emotion::ALL {
            let v = row.number(cols[e.index()])?;
            if !(0.0..=1.0).contains(&v) {
                return Err(IngestError::invalid(
                    path,
                    Location::Frame(frame_index),
                    format!("{} probability {v} outside [0, 1] ({})", e.name(), row.location()),
                ));
            }
            probs[e.index()] = v;
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > EMOTION_SUM_TOLERANCE + SUM_SLACK {
            return Err(IngestError::invalid(
                path,
                Location::Frame(frame_index),
                format!(
                    "class probabilities sum to {sum}, expected 1 ± {EMOTION_SUM_TOLERANCE} ({})",
                    row.location()
                ),
            ));
        }
        out.push(EmotionFrame { frame_index, probs });
        Ok(())
    })?;
    Ok(out)
}

pub fn write_emotion_csv(path: impl AsRef<Path>, frames: &[EmotionFrame]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    write_row(
        &mut w,
        path,
        std::iter::once("frame").chain(Emotion::ALL.iter().map(|e| e.name())),
    )?;
    for f in frames {
        let cells = std::iter::once(f.frame_index.to_string())
            .chain(f.probs.iter().map(|&p| fmt_f64(p)));
        write_row(&mut w, path, cells)?;
    }
    finish(w, path)
}
