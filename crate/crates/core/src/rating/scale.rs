use super::{CibScore, RatingError};

/// Maps a concept percentage onto the CIB grid.
pub trait ScaleMap: Send + Sync {
    fn name(&self) -> &'static str;
    fn quantize(&self, percent: f64) -> Result<CibScore, RatingError>;
}

fn check(percent: f64) -> Result<(), RatingError> {
    if (0.0..=100.0).contains(&percent) {
        Ok(())
    } else {
        Err(RatingError::PercentOutOfRange(percent))
    }
}

/// `1 + 4p/100`, rounded to the nearest half point; exact midpoints round up.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearHalfPoint;

impl ScaleMap for LinearHalfPoint {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn quantize(&self, percent: f64) -> Result<CibScore, RatingError> {
        check(percent)?;
        let s = 1.0 + 4.0 * percent / 100.0;
        let half_points = (2.0 * s + 0.5).floor();
        Ok(CibScore::from_half_points(half_points as u8).expect("s lies in [1, 5]"))
    }
}

/// Nine equal-width bins over [0, 100], lowest bin to 1.0.
#[derive(Debug, Clone, Copy, Default)]
pub struct EqualBins;

impl ScaleMap for EqualBins {
    fn name(&self) -> &'static str {
        "bins"
    }

    fn quantize(&self, percent: f64) -> Result<CibScore, RatingError> {
        check(percent)?;
        let bin = ((percent / 100.0 * 9.0).floor() as u8).min(8);
        Ok(CibScore::from_half_points(2 + bin).expect("bin lies in 0..=8"))
    }
}

/// The default linear map.
pub fn quantize(percent: f64) -> Result<CibScore, RatingError> {
    LinearHalfPoint.quantize(percent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_examples() {
        assert_eq!(quantize(0.0).unwrap().value(), 1.0);
        assert_eq!(quantize(100.0).unwrap().value(), 5.0);
        assert_eq!(quantize(37.5).unwrap().value(), 2.5);
        // s = 1.25 and 4.75 are midpoints and round up
        assert_eq!(quantize(6.25).unwrap().value(), 1.5);
        assert_eq!(quantize(93.75).unwrap().value(), 5.0);
        assert_eq!(quantize(6.0).unwrap().value(), 1.0);
        assert!(quantize(-0.1).is_err());
        assert!(quantize(100.5).is_err());
        assert!(quantize(f64::NAN).is_err());
    }

    #[test]
    fn bins_examples() {
        assert_eq!(EqualBins.quantize(0.0).unwrap().value(), 1.0);
        assert_eq!(EqualBins.quantize(100.0).unwrap().value(), 5.0);
        assert_eq!(EqualBins.quantize(50.0).unwrap().value(), 3.0);
    }

    proptest! {
        #[test]
        fn monotone(a in 0.0f64..=100.0, b in 0.0f64..=100.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for m in [&LinearHalfPoint as &dyn ScaleMap, &EqualBins] {
                prop_assert!(m.quantize(lo).unwrap() <= m.quantize(hi).unwrap());
            }
        }
    }

    #[test]
    fn image_is_the_whole_grid() {
        for m in [&LinearHalfPoint as &dyn ScaleMap, &EqualBins] {
            let mut seen: Vec<CibScore> = (0..=10_000)
                .map(|i| m.quantize(i as f64 / 100.0).unwrap())
                .collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen, CibScore::grid().collect::<Vec<_>>(), "{}", m.name());
        }
    }
}
