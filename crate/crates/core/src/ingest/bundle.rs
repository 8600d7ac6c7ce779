//! The canonical on-disk bundle: one directory per video.
//!
//! ```text
//! <bundle>/
//!   meta             TOML: video_id, fps, optional gaze_calibration
//!   gaze.csv         frame,timestamp,success,gaze_angle_x,gaze_angle_y
//!   calibration.csv  same layout; clip of known eye contact (optional)
//!   aus.csv          frame,AU<NN>_r...
//!   emotions.csv     frame,angry,disgust,fear,happy,neutral,sad,surprise
//!   detections.csv   frame,class,x,y,w,h,confidence
//!   frames/          frame_00001.pgm ...
//! ```
//!
//! Every stream is optional; absent files simply leave the stream empty.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    load_frames, parse_detections_csv, parse_emotion_csv, parse_face_csv, read_aus_csv,
    write_aus_csv, write_detections_csv, write_emotion_csv, write_frames, write_gaze_csv,
    AUFrame, DetectionBox, EmotionFrame, GazeSample, GrayFrame, IngestError, Result,
};

pub const META_FILE: &str = "meta";
const GAZE_FILE: &str = "gaze.csv";
const CALIBRATION_FILE: &str = "calibration.csv";
const AUS_FILE: &str = "aus.csv";
const EMOTIONS_FILE: &str = "emotions.csv";
const DETECTIONS_FILE: &str = "detections.csv";
const FRAMES_DIR: &str = "frames";

/// All feature streams of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBundle {
    pub video_id: String,
    pub fps: f64,
    pub gaze: Option<Vec<GazeSample>>,
    /// Gaze during a clip of known eye contact, used to fit the gaze rectangle.
    pub gaze_calibration: Option<Vec<GazeSample>>,
    pub aus: Option<Vec<AUFrame>>,
    pub emotions: Option<Vec<EmotionFrame>>,
    pub detections: Option<Vec<DetectionBox>>,
    pub frames: Option<Vec<GrayFrame>>,
}

impl FeatureBundle {
    pub fn frame_size(&self) -> Option<(u32, u32)> {
        self.frames
            .as_ref()
            .and_then(|f| f.first())
            .map(|f| (f.width, f.height))
    }
}

/// Streams handed to [`assemble_bundle`]; `None` marks an absent stream.
#[derive(Debug, Clone, Default)]
pub struct BundleStreams {
    pub gaze: Option<Vec<GazeSample>>,
    pub gaze_calibration: Option<Vec<GazeSample>>,
    pub aus: Option<Vec<AUFrame>>,
    pub emotions: Option<Vec<EmotionFrame>>,
    pub detections: Option<Vec<DetectionBox>>,
    pub frames: Option<Vec<GrayFrame>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleMeta {
    pub video_id: String,
    pub fps: f64,
    /// Calibration clip path, relative to the bundle directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaze_calibration: Option<String>,
}

/// Sorts a stream by frame index, noting whether it was out of order, and
/// rejects duplicate frames when `strict`.
fn sort_stream<T>(
    name: &str,
    items: &mut [T],
    frame_of: impl Fn(&T) -> u64,
    strict: bool,
    warnings: &mut Vec<String>,
) -> Result<()> {
    if items.windows(2).any(|w| frame_of(&w[0]) > frame_of(&w[1])) {
        warnings.push(format!("{name} stream was not sorted by frame; sorted on assembly"));
        items.sort_by_key(|t| frame_of(t));
    }
    if strict {
        if let Some(w) = items.windows(2).find(|w| frame_of(&w[0]) == frame_of(&w[1])) {
            return Err(IngestError::Bundle(format!(
                "{name} stream has duplicate frame {}",
                frame_of(&w[0])
            )));
        }
    }
    Ok(())
}

/// Validates and normalizes streams into a bundle. Streams are sorted by
/// frame index (with a warning when they were not); they need not cover the
/// same frame range. Returns the bundle and any warnings.
pub fn assemble_bundle(
    video_id: &str,
    fps: f64,
    mut streams: BundleStreams,
) -> Result<(FeatureBundle, Vec<String>)> {
    if video_id.trim().is_empty() {
        return Err(IngestError::Bundle("video_id must be non-empty".into()));
    }
    if !(fps.is_finite() && fps > 0.0) {
        return Err(IngestError::Bundle(format!("fps must be positive, got {fps}")));
    }
    let mut warnings = Vec::new();
    if let Some(g) = streams.gaze.as_mut() {
        sort_stream("gaze", g, |s| s.frame_index, true, &mut warnings)?;
    }
    if let Some(g) = streams.gaze_calibration.as_mut() {
        sort_stream("gaze calibration", g, |s| s.frame_index, true, &mut warnings)?;
    }
    if let Some(a) = streams.aus.as_mut() {
        sort_stream("AU", a, |f| f.frame_index, true, &mut warnings)?;
    }
    if let Some(e) = streams.emotions.as_mut() {
        sort_stream("emotion", e, |f| f.frame_index, true, &mut warnings)?;
    }
    if let Some(d) = streams.detections.as_mut() {
        // several boxes may share a frame
        sort_stream("detection", d, |b| b.frame_index, false, &mut warnings)?;
    }
    if let Some(frames) = streams.frames.as_mut() {
        sort_stream("frame", frames, |f| f.frame_index, true, &mut warnings)?;
        if let Some(first) = frames.first() {
            let dims = (first.width, first.height);
            if let Some(bad) = frames.iter().find(|f| (f.width, f.height) != dims) {
                return Err(IngestError::Bundle(format!(
                    "frame {} is {}x{}, expected {}x{}",
                    bad.frame_index, bad.width, bad.height, dims.0, dims.1
                )));
            }
        }
    }
    Ok((
        FeatureBundle {
            video_id: video_id.to_string(),
            fps,
            gaze: streams.gaze,
            gaze_calibration: streams.gaze_calibration,
            aus: streams.aus,
            emotions: streams.emotions,
            detections: streams.detections,
            frames: streams.frames,
        },
        warnings,
    ))
}

/// Writes `bundle` in the canonical layout, creating `dir` if needed.
pub fn write_bundle(dir: impl AsRef<Path>, bundle: &FeatureBundle) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;
    let meta = BundleMeta {
        video_id: bundle.video_id.clone(),
        fps: bundle.fps,
        gaze_calibration: bundle
            .gaze_calibration
            .as_ref()
            .map(|_| CALIBRATION_FILE.to_string()),
    };
    let meta_path = dir.join(META_FILE);
    let text = toml::to_string(&meta).map_err(|e| IngestError::Meta {
        path: meta_path.clone(),
        message: e.to_string(),
    })?;
    fs::write(&meta_path, text).map_err(|e| IngestError::io(&meta_path, e))?;

    if let Some(g) = &bundle.gaze {
        write_gaze_csv(dir.join(GAZE_FILE), g)?;
    }
    if let Some(g) = &bundle.gaze_calibration {
        write_gaze_csv(dir.join(CALIBRATION_FILE), g)?;
    }
    if let Some(a) = &bundle.aus {
        write_aus_csv(dir.join(AUS_FILE), a)?;
    }
    if let Some(e) = &bundle.emotions {
        write_emotion_csv(dir.join(EMOTIONS_FILE), e)?;
    }
    if let Some(d) = &bundle.detections {
        write_detections_csv(dir.join(DETECTIONS_FILE), d)?;
    }
    if let Some(f) = &bundle.frames {
        write_frames(dir.join(FRAMES_DIR), f)?;
    }
    Ok(())
}

pub fn read_meta(dir: &Path) -> Result<BundleMeta> {
    let path = dir.join(META_FILE);
    let text = fs::read_to_string(&path).map_err(|e| IngestError::io(&path, e))?;
    toml::from_str(&text).map_err(|e| IngestError::Meta {
        path,
        message: e.message().to_string(),
    })
}

/// Reads a canonical bundle directory and validates it.
pub fn read_bundle(dir: impl AsRef<Path>) -> Result<(FeatureBundle, Vec<String>)> {
    let dir = dir.as_ref();
    let meta = read_meta(dir)?;
    let present = |name: &str| {
        let p = dir.join(name);
        p.exists().then_some(p)
    };
    let streams = BundleStreams {
        gaze: present(GAZE_FILE)
            .map(|p| parse_face_csv(p).map(|f| f.gaze))
            .transpose()?,
        gaze_calibration: meta
            .gaze_calibration
            .as_ref()
            .map(|rel| parse_face_csv(dir.join(rel)).map(|f| f.gaze))
            .transpose()?,
        aus: present(AUS_FILE).map(read_aus_csv).transpose()?,
        emotions: present(EMOTIONS_FILE).map(parse_emotion_csv).transpose()?,
        detections: present(DETECTIONS_FILE)
            .map(|p| parse_detections_csv(p).map(|d| d.boxes))
            .transpose()?,
        frames: present(FRAMES_DIR).map(load_frames).transpose()?,
    };
    assemble_bundle(&meta.video_id, meta.fps, streams)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaze(frame: u64) -> GazeSample {
        GazeSample {
            frame_index: frame,
            timestamp_s: frame as f64 / 25.0,
            success: true,
            gaze_angle_x: 0.0,
            gaze_angle_y: 0.0,
        }
    }

    #[test]
    fn valid_streams_assemble() {
        let streams = BundleStreams {
            gaze: Some(vec![gaze(1), gaze(2)]),
            ..Default::default()
        };
        let (b, w) = assemble_bundle("v1", 25.0, streams).unwrap();
        assert_eq!(b.fps, 25.0);
        assert!(w.is_empty());
    }

    #[test]
    fn unsorted_stream_sorted_with_warning() {
        let streams = BundleStreams {
            gaze: Some(vec![gaze(3), gaze(1), gaze(2)]),
            ..Default::default()
        };
        let (b, w) = assemble_bundle("v1", 25.0, streams).unwrap();
        let frames: Vec<u64> = b.gaze.unwrap().iter().map(|g| g.frame_index).collect();
        assert_eq!(frames, vec![1, 2, 3]);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn zero_fps_rejected() {
        assert!(assemble_bundle("v1", 0.0, BundleStreams::default()).is_err());
        assert!(assemble_bundle("", 25.0, BundleStreams::default()).is_err());
    }

    #[test]
    fn duplicate_frames_rejected() {
        let streams = BundleStreams {
            gaze: Some(vec![gaze(1), gaze(1)]),
            ..Default::default()
        };
        assert!(assemble_bundle("v1", 25.0, streams).is_err());
    }

    #[test]
    fn meta_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(META_FILE),
            "video_id = \"a\"\nfps = 25.0\ncolour = 1\n",
        )
        .unwrap();
        assert!(matches!(read_meta(dir.path()), Err(IngestError::Meta { .. })));
    }
}
