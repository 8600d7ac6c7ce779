//! Per-video expression summaries and the affect-derived concept terms.
//!
//! Class probabilities are turned into percentages and averaged over frames
//! first; every max below is taken over those per-video means.

use std::fmt;

use thiserror::Error;

use crate::ingest::EmotionFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Emotion {
    Angry,
    Disgust,
    Fear,
    Happy,
    Neutral,
    Sad,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; 7] = [
        Emotion::Angry,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Happy,
        Emotion::Neutral,
        Emotion::Sad,
        Emotion::Surprise,
    ];

    /// Column name in expression-classifier exports.
    pub fn name(self) -> &'static str {
        match self {
            Emotion::Angry => "angry",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Happy => "happy",
            Emotion::Neutral => "neutral",
            Emotion::Sad => "sad",
            Emotion::Surprise => "surprise",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffectError {
    #[error("no emotion frames to summarize")]
    Empty,
}

/// Mean class percentages (0–100) over a video's frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmotionSummary {
    percent: [f64; 7],
}

impl EmotionSummary {
    pub fn from_percentages(percent: [f64; 7]) -> Self {
        EmotionSummary { percent }
    }

    pub fn get(&self, e: Emotion) -> f64 {
        self.percent[e.index()]
    }

    pub fn percentages(&self) -> &[f64; 7] {
        &self.percent
    }
}

pub fn summarize(frames: &[EmotionFrame]) -> Result<EmotionSummary, AffectError> {
    if frames.is_empty() {
        return Err(AffectError::Empty);
    }
    let mut sums = [0.0; 7];
    for f in frames {
        for (s, p) in sums.iter_mut().zip(f.probs) {
            *s += p;
        }
    }
    let n = frames.len() as f64;
    Ok(EmotionSummary {
        percent: sums.map(|s| 100.0 * s / n),
    })
}

pub fn positive_affect(s: &EmotionSummary) -> f64 {
    s.get(Emotion::Happy)
}

/// The larger of the sad and angry means.
pub fn negative_emotionality(s: &EmotionSummary) -> f64 {
    s.get(Emotion::Sad).max(s.get(Emotion::Angry))
}

/// Expressiveness term of the arousal composite: the strongest of happy,
/// angry, surprise and the non-neutral share.
pub fn arousal_peak(s: &EmotionSummary) -> f64 {
    s.get(Emotion::Happy)
        .max(s.get(Emotion::Angry))
        .max(s.get(Emotion::Surprise))
        .max(100.0 - s.get(Emotion::Neutral))
}

/// The larger of the fear and disgust means, used by the anxiety composite.
pub fn fear_or_disgust(s: &EmotionSummary) -> f64 {
    s.get(Emotion::Fear).max(s.get(Emotion::Disgust))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_hot(e: Emotion) -> EmotionFrame {
        let mut probs = [0.0; 7];
        probs[e.index()] = 1.0;
        EmotionFrame {
            frame_index: 0,
            probs,
        }
    }

    fn summary(pairs: &[(Emotion, f64)]) -> EmotionSummary {
        let mut p = [0.0; 7];
        for &(e, v) in pairs {
            p[e.index()] = v;
        }
        EmotionSummary::from_percentages(p)
    }

    #[test]
    fn summarize_cases() {
        let s = summarize(&[one_hot(Emotion::Happy), one_hot(Emotion::Happy)]).unwrap();
        assert_eq!(s.get(Emotion::Happy), 100.0);
        assert_eq!(s.get(Emotion::Sad), 0.0);

        let s = summarize(&[one_hot(Emotion::Happy), one_hot(Emotion::Neutral)]).unwrap();
        assert_eq!(s.get(Emotion::Happy), 50.0);

        assert_eq!(summarize(&[]), Err(AffectError::Empty));
    }

    #[test]
    fn positive_affect_is_happy() {
        for v in [100.0, 37.2, 0.0] {
            assert_eq!(positive_affect(&summary(&[(Emotion::Happy, v)])), v);
        }
    }

    #[test]
    fn negative_emotionality_cases() {
        let n = |sad, angry| negative_emotionality(&summary(&[(Emotion::Sad, sad), (Emotion::Angry, angry)]));
        assert_eq!(n(30.0, 40.0), 40.0);
        assert_eq!(n(25.0, 25.0), 25.0);
        assert_eq!(n(0.0, 0.0), 0.0);
    }

    #[test]
    fn arousal_peak_cases() {
        let s = summary(&[
            (Emotion::Happy, 20.0),
            (Emotion::Angry, 10.0),
            (Emotion::Surprise, 5.0),
            (Emotion::Neutral, 60.0),
        ]);
        assert_eq!(arousal_peak(&s), 40.0);
        assert_eq!(arousal_peak(&summary(&[(Emotion::Neutral, 100.0)])), 0.0);
        assert_eq!(
            arousal_peak(&summary(&[(Emotion::Neutral, 0.0), (Emotion::Happy, 30.0)])),
            100.0
        );
    }

    fn frames() -> impl Strategy<Value = Vec<EmotionFrame>> {
        prop::collection::vec(prop::array::uniform7(0.01f64..1.0), 1..30).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, raw)| {
                    let total: f64 = raw.iter().sum();
                    EmotionFrame {
                        frame_index: i as u64,
                        probs: raw.map(|v| v / total),
                    }
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn outputs_bounded_and_ordered(f in frames()) {
            let s = summarize(&f).unwrap();
            let total: f64 = s.percentages().iter().sum();
            prop_assert!((total - 100.0).abs() <= 2.0);
            for v in [positive_affect(&s), negative_emotionality(&s), arousal_peak(&s)] {
                prop_assert!((-1e-9..=100.0 + 1e-9).contains(&v));
            }
            prop_assert!(negative_emotionality(&s) >= s.get(Emotion::Sad));
            prop_assert!(negative_emotionality(&s) >= s.get(Emotion::Angry));
            prop_assert!(arousal_peak(&s) >= 100.0 - s.get(Emotion::Neutral));
        }

        #[test]
        fn summarize_permutation_invariant(f in frames()) {
            let mut rev = f.clone();
            rev.reverse();
            let (a, b) = (summarize(&f).unwrap(), summarize(&rev).unwrap());
            for e in Emotion::ALL {
                prop_assert!((a.get(e) - b.get(e)).abs() <= 1e-9);
            }
        }
    }
}
