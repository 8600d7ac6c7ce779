//! Parsing of upstream model exports into validated per-frame streams.
//!
//! Every parser discovers columns from the header row, so column order in the
//! input file never matters. Values are trimmed before parsing.

mod bundle;
pub(crate) mod csvutil;
mod detections;
mod emotion;
mod face;
mod frames;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub use bundle::{
    assemble_bundle, read_bundle, write_bundle, BundleMeta, BundleStreams, FeatureBundle,
    META_FILE,
};
pub use detections::{parse_detections_csv, write_detections_csv, DetectionStreams, PERSON_CLASS};
pub use emotion::{parse_emotion_csv, write_emotion_csv, EMOTION_SUM_TOLERANCE};
pub use face::{
    parse_face_csv, read_aus_csv, write_aus_csv, write_gaze_csv, FaceStreams, VOCAL_AUS,
};
pub use frames::{load_frames, write_frames, write_graymap as write_graymap_file};

use crate::affect::Emotion;

/// Where in an input file a problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based physical line in the file (the header is line 1).
    Line(u64),
    Frame(u64),
    File,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Frame(i) => write!(f, "frame {i}"),
            Location::File => f.write_str("file"),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: malformed CSV: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: missing required column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("{}: {location}: column `{column}`: cannot parse {value:?} as a number", path.display())]
    Parse {
        path: PathBuf,
        location: Location,
        column: String,
        value: String,
    },
    #[error("{}: {location}: {message}", path.display())]
    Invalid {
        path: PathBuf,
        location: Location,
        message: String,
    },
    #[error("{}: cannot decode image: {message}", path.display())]
    Image { path: PathBuf, message: String },
    #[error("{}: bad bundle metadata: {message}", path.display())]
    Meta { path: PathBuf, message: String },
    #[error("invalid bundle: {0}")]
    Bundle(String),
}

impl IngestError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(
        path: impl Into<PathBuf>,
        location: Location,
        message: impl Into<String>,
    ) -> Self {
        IngestError::Invalid {
            path: path.into(),
            location,
            message: message.into(),
        }
    }
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

/// One face-tracker gaze estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GazeSample {
    pub frame_index: u64,
    pub timestamp_s: f64,
    /// `false` when the tracker failed on this frame; such rows are kept.
    pub success: bool,
    /// Horizontal gaze angle in radians, relative to the camera.
    pub gaze_angle_x: f64,
    pub gaze_angle_y: f64,
}

/// Action-unit intensities for one frame, keyed by AU number.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AUFrame {
    pub frame_index: u64,
    pub intensity: BTreeMap<u8, f64>,
}

impl AUFrame {
    /// Intensity of `au`, or 0 when the AU was not extracted.
    pub fn intensity(&self, au: u8) -> f64 {
        self.intensity.get(&au).copied().unwrap_or(0.0)
    }
}

pub const AU_INTENSITY_MAX: f64 = 5.0;

/// Per-frame expression class probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionFrame {
    pub frame_index: u64,
    /// Indexed by [`Emotion::index`].
    pub probs: [f64; 7],
}

impl EmotionFrame {
    pub fn prob(&self, emotion: Emotion) -> f64 {
        self.probs[emotion.index()]
    }
}

/// A person detection in pixel coordinates; `(x, y)` is the top-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionBox {
    pub frame_index: u64,
    pub class_label: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub confidence: f64,
}

impl DetectionBox {
    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }
}

/// An 8-bit grayscale frame stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrame {
    pub frame_index: u64,
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl GrayFrame {
    pub fn new(frame_index: u64, width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width as usize * height as usize {
            return Err(IngestError::Bundle(format!(
                "frame {frame_index}: {} pixels for a {width}x{height} frame",
                pixels.len()
            )));
        }
        Ok(GrayFrame {
            frame_index,
            width,
            height,
            pixels,
        })
    }

    /// A frame filled with one intensity.
    pub fn filled(frame_index: u64, width: u32, height: u32, value: u8) -> Self {
        GrayFrame {
            frame_index,
            width,
            height,
            pixels: vec![value; width as usize * height as usize],
        }
    }
}
