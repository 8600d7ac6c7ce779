use std::path::Path;

use super::csvutil::{csv_writer, finish, fmt_f64, write_row, HeaderedCsv};
use super::{DetectionBox, IngestError, Result};

pub const PERSON_CLASS: &str = "person";

/// Person detections plus the number of other-class rows that were dropped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionStreams {
    pub boxes: Vec<DetectionBox>,
    pub dropped_non_person: usize,
}

/// Parses detector output with columns `frame, class, x, y, w, h,
/// confidence`. Only `person` rows are kept.
pub fn parse_detections_csv(path: impl AsRef<Path>) -> Result<DetectionStreams> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let frame = csv.column("frame")?;
    let class = csv.column("class")?;
    let x = csv.column("x")?;
    let y = csv.column("y")?;
    let w = csv.column("w")?;
    let h = csv.column("h")?;
    let confidence = csv.column("confidence")?;

    let mut out = DetectionStreams::default();
    csv.for_each_row(|row| {
        let b = DetectionBox {
            frame_index: row.index(frame)?,
            class_label: row.text(class).to_string(),
            x: row.finite(x)?,
            y: row.finite(y)?,
            w: row.finite(w)?,
            h: row.finite(h)?,
            confidence: row.finite(confidence)?,
        };
        if b.w <= 0.0 || b.h <= 0.0 {
            return Err(IngestError::invalid(
                path,
                row.location(),
                format!("box size must be positive, got w={} h={}", b.w, b.h),
            ));
        }
        if !(0.0..=1.0).contains(&b.confidence) {
            return Err(IngestError::invalid(
                path,
                row.location(),
                format!("confidence {} outside [0, 1]", b.confidence),
            ));
        }
        if b.class_label == PERSON_CLASS {
            out.boxes.push(b);
        } else {
            out.dropped_non_person += 1;
        }
        Ok(())
    })?;
    if out.dropped_non_person > 0 {
        log::warn!(
            "{}: dropped {} non-person detection(s)",
            path.display(),
            out.dropped_non_person
        );
    }
    Ok(out)
}

pub fn write_detections_csv(path: impl AsRef<Path>, boxes: &[DetectionBox]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    write_row(&mut w, path, ["frame", "class", "x", "y", "w", "h", "confidence"])?;
    for b in boxes {
        write_row(
            &mut w,
            path,
            [
                b.frame_index.to_string(),
                b.class_label.clone(),
                fmt_f64(b.x),
                fmt_f64(b.y),
                fmt_f64(b.w),
                fmt_f64(b.h),
                fmt_f64(b.confidence),
            ],
        )?;
    }
    finish(w, path)
}
