//! Interpretable behavior-concept scoring for video feature streams.
//!
//! The engine ingests per-frame outputs of upstream vision models (face
//! tracker CSVs, facial-expression class scores, person detections) and raw
//! grayscale frames, and turns them into seven concept percentages: gaze,
//! vocalization, positive affect, negative emotionality,
//! activity-level/arousal, anxiety and attention. Percentages are mapped onto
//! the CIB 1–5 half-point rating grid and compared against human ratings with
//! percent agreement.
//!
//! Algorithm families that have more than one reasonable variant (the
//! percentage-to-rating map, the youth-region selection policy, the
//! background model) sit behind traits and are looked up by name in a
//! [`registry::Registry`], so the CLI and config can pick them at runtime.

pub mod affect;
pub mod composites;
pub mod concept;
pub mod config;
pub mod gaze;
pub mod ingest;
pub mod motion;
pub mod oracle;
pub mod rating;
pub mod registry;
pub mod score_table;
pub mod selftest;
pub mod synthetic;
pub mod vocalization;

pub use composites::{score_video, ConceptScores, VideoScores};
pub use concept::Concept;
pub use config::RunConfig;
pub use ingest::FeatureBundle;
pub use rating::{CibScore, RatingTable};
