//! Vocalization concept from mouth action units.
//!
//! Each frame is bucketed by the strongest mouth-opening evidence present
//! (an AU counts as present at intensity >= 1): jaw drop (AU26) is high,
//! lips part (AU25) is medium, any closed-mouth AU is low. The score is the
//! weighted mean of the buckets over frames that have any evidence.

use thiserror::Error;

use crate::ingest::AUFrame;

/// Minimum intensity at which an AU counts as present.
pub const PRESENCE_THRESHOLD: f64 = 1.0;
/// AUs that occur with a closed mouth.
pub const CLOSED_MOUTH_AUS: [u8; 7] = [10, 12, 14, 15, 17, 20, 23];
pub const LIPS_PART_AU: u8 = 25;
pub const JAW_DROP_AU: u8 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VocalizationLevel {
    Low,
    Medium,
    High,
    NoEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocalizationError {
    #[error("no frame shows mouth action-unit evidence")]
    NoEvidence,
}

fn present(frame: &AUFrame, au: u8) -> bool {
    frame.intensity(au) >= PRESENCE_THRESHOLD
}

/// Buckets one frame; when several groups are present the most open mouth
/// wins.
pub fn classify_frame(frame: &AUFrame) -> VocalizationLevel {
    if present(frame, JAW_DROP_AU) {
        VocalizationLevel::High
    } else if present(frame, LIPS_PART_AU) {
        VocalizationLevel::Medium
    } else if CLOSED_MOUTH_AUS.iter().any(|&au| present(frame, au)) {
        VocalizationLevel::Low
    } else {
        VocalizationLevel::NoEvidence
    }
}

/// Percentage attached to each bucket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VocalizationWeights {
    pub low: f64,
    pub medium: f64,
    pub high: f64,
}

impl Default for VocalizationWeights {
    fn default() -> Self {
        VocalizationWeights {
            low: 0.0,
            medium: 50.0,
            high: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VocalizationCounts {
    pub n_low: usize,
    pub n_med: usize,
    pub n_high: usize,
}

impl VocalizationCounts {
    pub fn push(&mut self, level: VocalizationLevel) {
        match level {
            VocalizationLevel::Low => self.n_low += 1,
            VocalizationLevel::Medium => self.n_med += 1,
            VocalizationLevel::High => self.n_high += 1,
            VocalizationLevel::NoEvidence => {}
        }
    }

    /// Frames with any evidence.
    pub fn total(&self) -> usize {
        self.n_low + self.n_med + self.n_high
    }

    pub fn score(&self, w: &VocalizationWeights) -> Result<f64, VocalizationError> {
        let n = self.total();
        if n == 0 {
            return Err(VocalizationError::NoEvidence);
        }
        Ok((w.low * self.n_low as f64 + w.medium * self.n_med as f64 + w.high * self.n_high as f64)
            / n as f64)
    }
}

impl<'a> FromIterator<&'a AUFrame> for VocalizationCounts {
    fn from_iter<I: IntoIterator<Item = &'a AUFrame>>(iter: I) -> Self {
        let mut counts = VocalizationCounts::default();
        for f in iter {
            counts.push(classify_frame(f));
        }
        counts
    }
}

pub fn vocalization_score(frames: &[AUFrame]) -> Result<f64, VocalizationError> {
    vocalization_score_with(frames, &VocalizationWeights::default())
}

pub fn vocalization_score_with(
    frames: &[AUFrame],
    weights: &VocalizationWeights,
) -> Result<f64, VocalizationError> {
    frames.iter().collect::<VocalizationCounts>().score(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn frame(aus: &[(u8, f64)]) -> AUFrame {
        AUFrame {
            frame_index: 0,
            intensity: aus.iter().copied().collect::<BTreeMap<_, _>>(),
        }
    }

    fn repeat(aus: &[(u8, f64)], n: usize) -> Vec<AUFrame> {
        vec![frame(aus); n]
    }

    #[test]
    fn classification() {
        assert_eq!(classify_frame(&frame(&[(26, 2.0), (25, 3.0)])), VocalizationLevel::High);
        assert_eq!(classify_frame(&frame(&[(12, 1.5)])), VocalizationLevel::Low);
        assert_eq!(
            classify_frame(&frame(&[(12, 0.0), (25, 0.0), (26, 0.0)])),
            VocalizationLevel::NoEvidence
        );
        assert_eq!(classify_frame(&frame(&[(25, 1.0), (17, 4.0)])), VocalizationLevel::Medium);
        // threshold is inclusive
        assert_eq!(classify_frame(&frame(&[(26, 1.0)])), VocalizationLevel::High);
        assert_eq!(classify_frame(&frame(&[(26, 0.99)])), VocalizationLevel::NoEvidence);
    }

    #[test]
    fn weighted_mean_examples() {
        let mut f = repeat(&[(10, 1.0)], 10);
        f.extend(repeat(&[(25, 1.0)], 10));
        f.extend(repeat(&[(26, 1.0)], 10));
        assert_eq!(vocalization_score(&f).unwrap(), 50.0);

        assert_eq!(vocalization_score(&repeat(&[(26, 3.0)], 4)).unwrap(), 100.0);

        let mut f = repeat(&[(23, 2.0)], 5);
        f.extend(repeat(&[(26, 2.0)], 5));
        assert_eq!(vocalization_score(&f).unwrap(), 50.0);
    }

    #[test]
    fn no_evidence_is_an_error() {
        assert_eq!(
            vocalization_score(&repeat(&[(1, 4.0)], 3)),
            Err(VocalizationError::NoEvidence)
        );
        assert_eq!(vocalization_score(&[]), Err(VocalizationError::NoEvidence));
    }

    #[test]
    fn no_evidence_frames_do_not_dilute() {
        let mut f = repeat(&[(26, 2.0)], 3);
        f.extend(repeat(&[], 7));
        assert_eq!(vocalization_score(&f).unwrap(), 100.0);
    }

    fn au_frame() -> impl Strategy<Value = AUFrame> {
        prop::collection::btree_map(
            prop::sample::select(vec![10u8, 12, 14, 15, 17, 20, 23, 25, 26, 1, 6]),
            0.0f64..5.0,
            0..5,
        )
        .prop_map(|intensity| AUFrame { frame_index: 0, intensity })
    }

    proptest! {
        #[test]
        fn permutation_invariant_and_bounded(
            frames in prop::collection::vec(au_frame(), 1..40),
            seed in any::<u64>(),
        ) {
            let mut shuffled = frames.clone();
            let n = shuffled.len();
            // deterministic Fisher-Yates driven by the seed
            let mut state = seed;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (state >> 33) as usize % (i + 1));
            }
            match (vocalization_score(&frames), vocalization_score(&shuffled)) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a, b);
                    prop_assert!((0.0..=100.0).contains(&a));
                    let counts: VocalizationCounts = frames.iter().collect();
                    prop_assert_eq!(a == 0.0, counts.n_low == counts.total());
                    prop_assert_eq!(a == 100.0, counts.n_high == counts.total());
                }
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                _ => prop_assert!(false, "shuffle changed availability"),
            }
        }

        #[test]
        fn streaming_matches_classify_then_count(frames in prop::collection::vec(au_frame(), 0..40)) {
            let levels: Vec<_> = frames.iter().map(classify_frame).collect();
            let count = |l| levels.iter().filter(|&&x| x == l).count();
            let (lo, me, hi) = (
                count(VocalizationLevel::Low),
                count(VocalizationLevel::Medium),
                count(VocalizationLevel::High),
            );
            let expected = if lo + me + hi == 0 {
                None
            } else {
                Some((50.0 * me as f64 + 100.0 * hi as f64) / (lo + me + hi) as f64)
            };
            prop_assert_eq!(vocalization_score(&frames).ok(), expected);
        }
    }
}
