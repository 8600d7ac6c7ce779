//! Composite concepts and per-video scoring.
//!
//! Primitive scores (gaze, vocalization, affect, activity) come from their
//! own modules; this module combines them with equal weights and assembles
//! the seven-concept vector for a bundle.

use thiserror::Error;

use crate::affect::{self, Emotion, EmotionSummary};
use crate::concept::Concept;
use crate::config::{ConfigError, RunConfig};
use crate::gaze;
use crate::ingest::FeatureBundle;
use crate::motion::{self, MotionError, MotionHeatmap, YouthRegion};
use crate::registry;
use crate::vocalization;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompositeError {
    #[error("{name} = {value} outside [0, 100]")]
    OutOfRange { name: &'static str, value: f64 },
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("{video_id}: no concept could be scored ({reasons})")]
    NothingAvailable { video_id: String, reasons: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn pct(name: &'static str, value: f64) -> Result<f64, CompositeError> {
    if (0.0..=100.0).contains(&value) {
        Ok(value)
    } else {
        Err(CompositeError::OutOfRange { name, value })
    }
}

/// Equal-weight mean of motion, vocalization and expressiveness.
pub fn activity_arousal(
    activity: f64,
    vocalization: f64,
    peak: f64,
) -> Result<f64, CompositeError> {
    Ok((pct("activity", activity)? + pct("vocalization", vocalization)? + pct("peak", peak)?) / 3.0)
}

pub fn anxiety(activity: f64, fear: f64, disgust: f64) -> Result<f64, CompositeError> {
    Ok((pct("activity", activity)? + pct("fear", fear)?.max(pct("disgust", disgust)?)) / 2.0)
}

/// Calm and still scores high: `((100 - activity) + (100 - anxiety)) / 2`.
pub fn attention(activity: f64, anxiety: f64) -> Result<f64, CompositeError> {
    Ok(((100.0 - pct("activity", activity)?) + (100.0 - pct("anxiety", anxiety)?)) / 2.0)
}

/// The seven concept percentages of one video; `None` marks a concept whose
/// inputs were unavailable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConceptScores([Option<f64>; 7]);

impl ConceptScores {
    pub fn get(&self, c: Concept) -> Option<f64> {
        self.0[c.index()]
    }

    pub fn set(&mut self, c: Concept, value: Option<f64>) {
        self.0[c.index()] = value;
    }

    /// Concepts in canonical order with their values.
    pub fn iter(&self) -> impl Iterator<Item = (Concept, Option<f64>)> + '_ {
        Concept::ALL.iter().map(|&c| (c, self.get(c)))
    }

    pub fn available(&self) -> usize {
        self.0.iter().flatten().count()
    }
}

/// Scores of one video plus the intermediate motion results.
#[derive(Debug, Clone)]
pub struct VideoScores {
    pub video_id: String,
    pub scores: ConceptScores,
    /// Activity percentage from the motion heatmap.
    pub activity: Option<f64>,
    pub heatmap: Option<MotionHeatmap>,
    pub youth_region: Option<YouthRegion>,
    /// Why each missing concept could not be scored.
    pub unavailable: Vec<(Concept, String)>,
}

struct Activity {
    percent: f64,
    heatmap: MotionHeatmap,
    region: Option<YouthRegion>,
}

fn motion_activity(bundle: &FeatureBundle, cfg: &RunConfig) -> Result<Activity, String> {
    let frames = bundle.frames.as_deref().ok_or("no frames")?;
    if frames.is_empty() {
        return Err("frame directory is empty".into());
    }
    let mut model = registry::background_models()
        .create(&cfg.background_model, cfg)
        .map_err(|e| e.to_string())?;
    let heatmap = motion::heatmap_from_frames(frames, model.as_mut(), &cfg.threshold_params())
        .map_err(|e| e.to_string())?;

    let region = if cfg.youth_region {
        let detections = bundle
            .detections
            .as_deref()
            .ok_or("youth-region gating is on but there are no detections")?;
        let selector = registry::region_selectors()
            .create(&cfg.youth_region_policy, cfg)
            .map_err(|e| e.to_string())?;
        let opts = cfg.region_options(bundle.frame_size());
        Some(
            motion::select_youth_region(detections, selector.as_ref(), &opts)
                .map_err(|e: MotionError| e.to_string())?,
        )
    } else {
        None
    };
    let percent = motion::activity_score(&heatmap, region.as_ref().map(|r| &r.region))
        .map_err(|e| e.to_string())?;
    Ok(Activity {
        percent,
        heatmap,
        region,
    })
}

fn gaze_percent(bundle: &FeatureBundle) -> Result<f64, String> {
    let scored = bundle.gaze.as_deref().ok_or("no gaze stream")?;
    let calibration = bundle
        .gaze_calibration
        .as_deref()
        .ok_or("no gaze calibration clip")?;
    let rect = gaze::fit_gaze_rectangle(calibration).map_err(|e| e.to_string())?;
    gaze::gaze_score(scored, &rect).map_err(|e| e.to_string())
}

fn vocalization_percent(bundle: &FeatureBundle) -> Result<f64, String> {
    let aus = bundle.aus.as_deref().ok_or("no action-unit stream")?;
    vocalization::vocalization_score(aus).map_err(|e| e.to_string())
}

fn emotion_summary(bundle: &FeatureBundle) -> Result<EmotionSummary, String> {
    let frames = bundle.emotions.as_deref().ok_or("no emotion stream")?;
    affect::summarize(frames).map_err(|e| e.to_string())
}

/// Both inputs, or the reason the first missing one is missing.
fn both<A: Copy, B: Copy>(a: &Result<A, String>, b: &Result<B, String>) -> Result<(A, B), String> {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok((*a, *b)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

/// Runs every primitive on `bundle` and assembles the concept vector.
/// A missing stream only removes the concepts that depend on it.
pub fn score_video(bundle: &FeatureBundle, cfg: &RunConfig) -> Result<VideoScores, ScoreError> {
    cfg.validate()?;
    let gaze = gaze_percent(bundle);
    let voc = vocalization_percent(bundle);
    let emo = emotion_summary(bundle);
    let motion = motion_activity(bundle, cfg);
    let activity = motion.as_ref().map(|m| m.percent).map_err(Clone::clone);

    let composite = |r: Result<f64, CompositeError>| r.map_err(|e| e.to_string());
    let peak = emo.as_ref().map(affect::arousal_peak).map_err(Clone::clone);
    let arousal = both(&both(&activity, &voc), &peak)
        .and_then(|((a, v), p)| composite(activity_arousal(a, v, p)));
    let fear_disgust = emo
        .as_ref()
        .map(|s| (s.get(Emotion::Fear), s.get(Emotion::Disgust)))
        .map_err(Clone::clone);
    let anx = both(&activity, &fear_disgust)
        .and_then(|(a, (fear, disgust))| composite(anxiety(a, fear, disgust)));
    let att = both(&activity, &anx).and_then(|(a, x)| composite(attention(a, x)));

    let results = [
        (Concept::Gaze, gaze),
        (Concept::Vocalization, voc),
        (Concept::PositiveAffect, emo.as_ref().map(affect::positive_affect).map_err(Clone::clone)),
        (
            Concept::NegativeEmotionality,
            emo.as_ref().map(affect::negative_emotionality).map_err(Clone::clone),
        ),
        (Concept::ActivityArousal, arousal),
        (Concept::Anxiety, anx),
        (Concept::Attention, att),
    ];
    let mut scores = ConceptScores::default();
    let mut unavailable = Vec::new();
    for (c, r) in results {
        match r {
            Ok(v) => scores.set(c, Some(v)),
            Err(reason) => unavailable.push((c, reason)),
        }
    }
    if scores.available() == 0 {
        let mut reasons: Vec<String> = unavailable.iter().map(|(_, r)| r.clone()).collect();
        reasons.dedup();
        return Err(ScoreError::NothingAvailable {
            video_id: bundle.video_id.clone(),
            reasons: reasons.join("; "),
        });
    }
    for (c, reason) in &unavailable {
        log::info!("{}: {} unavailable: {reason}", bundle.video_id, c.as_str());
    }
    let (activity, heatmap, youth_region) = match motion {
        Ok(m) => (Some(m.percent), Some(m.heatmap), m.region),
        Err(_) => (None, None, None),
    };
    Ok(VideoScores {
        video_id: bundle.video_id.clone(),
        scores,
        activity,
        heatmap,
        youth_region,
        unavailable,
    })
}
