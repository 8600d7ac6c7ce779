use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One of the seven CIB items scored by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Concept {
    Gaze,
    Vocalization,
    PositiveAffect,
    NegativeEmotionality,
    ActivityArousal,
    Anxiety,
    Attention,
}

impl Concept {
    /// Column order used by every file format in the crate.
    pub const ALL: [Concept; 7] = [
        Concept::Gaze,
        Concept::Vocalization,
        Concept::PositiveAffect,
        Concept::NegativeEmotionality,
        Concept::ActivityArousal,
        Concept::Anxiety,
        Concept::Attention,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Concept::Gaze => "gaze",
            Concept::Vocalization => "vocalization",
            Concept::PositiveAffect => "positive_affect",
            Concept::NegativeEmotionality => "negative_emotionality",
            Concept::ActivityArousal => "activity_arousal",
            Concept::Anxiety => "anxiety",
            Concept::Attention => "attention",
        }
    }

    /// Human-readable label for reports.
    pub fn label(self) -> &'static str {
        match self {
            Concept::Gaze => "Gaze",
            Concept::Vocalization => "Vocalization",
            Concept::PositiveAffect => "Positive aff.",
            Concept::NegativeEmotionality => "Neg. Emo.",
            Concept::ActivityArousal => "Act./Arousal",
            Concept::Anxiety => "Anxiety",
            Concept::Attention => "Attention",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown concept `{0}` (expected one of gaze, vocalization, positive_affect, negative_emotionality, activity_arousal, anxiety, attention)")]
pub struct UnknownConcept(pub String);

impl FromStr for Concept {
    type Err = UnknownConcept;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concept::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| UnknownConcept(s.to_string()))
    }
}

/// Parses a comma-separated concept list such as `gaze,vocalization`.
pub fn parse_concept_list(s: &str) -> Result<Vec<Concept>, UnknownConcept> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(Concept::from_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Concept::ALL {
            assert_eq!(c.as_str().parse::<Concept>().unwrap(), c);
        }
        assert!("arousal".parse::<Concept>().is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(
            parse_concept_list("gaze, vocalization").unwrap(),
            vec![Concept::Gaze, Concept::Vocalization]
        );
        assert!(parse_concept_list("gaze,nope").is_err());
    }
}
