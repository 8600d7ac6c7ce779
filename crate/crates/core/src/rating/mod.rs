//! CIB rating grid, percentage-to-rating maps and percent agreement.

mod agreement;
mod scale;
mod table;

use std::fmt;

use thiserror::Error;

pub use agreement::{
    agree, compare_tables, percent_agreement, AgreementReport, ItemAgreement, VideoAgreement,
};
pub use scale::{quantize, EqualBins, LinearHalfPoint, ScaleMap};
pub use table::{read_ratings_csv, write_ratings_csv, RatingTable};

use crate::concept::Concept;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatingError {
    #[error("percentage {0} outside [0, 100]")]
    PercentOutOfRange(f64),
    #[error("score {0} is not on the 1.0, 1.5, ..., 5.0 grid")]
    OffGrid(f64),
    #[error("no score pairs to compare")]
    NoPairs,
    #[error("`{a}` and `{b}` share no (video, item) pairs within the selected items")]
    NoSharedKeys { a: String, b: String },
    #[error("rater `{rater}` has two scores for video `{video}`, item `{item}`")]
    Duplicate {
        rater: String,
        video: String,
        item: Concept,
    },
}

/// A score on the CIB grid {1.0, 1.5, ..., 5.0}, stored in half points so
/// comparisons are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CibScore(u8);

impl CibScore {
    pub const MIN: CibScore = CibScore(2);
    pub const MAX: CibScore = CibScore(10);

    /// All nine grid values in ascending order.
    pub fn grid() -> impl Iterator<Item = CibScore> {
        (2..=10).map(CibScore)
    }

    pub fn from_half_points(h: u8) -> Option<CibScore> {
        (2..=10).contains(&h).then_some(CibScore(h))
    }

    /// Accepts only exact grid values.
    pub fn new(value: f64) -> Result<CibScore, RatingError> {
        let doubled = value * 2.0;
        if doubled.fract() == 0.0 && (2.0..=10.0).contains(&doubled) {
            Ok(CibScore(doubled as u8))
        } else {
            Err(RatingError::OffGrid(value))
        }
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn half_points(self) -> u8 {
        self.0
    }
}

impl fmt::Display for CibScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.1}", self.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert_eq!(CibScore::new(2.5).unwrap().value(), 2.5);
        assert!(CibScore::new(0.5).is_err());
        assert!(CibScore::new(5.5).is_err());
        assert!(CibScore::new(2.25).is_err());
        assert_eq!(CibScore::grid().count(), 9);
        assert_eq!(CibScore::new(3.0).unwrap().to_string(), "3.0");
    }
}
