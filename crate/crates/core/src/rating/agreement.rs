use std::collections::BTreeMap;

use super::{CibScore, RatingError, RatingTable};
use crate::concept::Concept;

/// Two scores agree when they differ by at most one point.
pub fn agree(a: CibScore, b: CibScore) -> bool {
    a.half_points().abs_diff(b.half_points()) <= 2
}

pub fn percent_agreement(pairs: &[(CibScore, CibScore)]) -> Result<f64, RatingError> {
    if pairs.is_empty() {
        return Err(RatingError::NoPairs);
    }
    let agreements = pairs.iter().filter(|&&(a, b)| agree(a, b)).count();
    Ok(100.0 * agreements as f64 / pairs.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemAgreement {
    pub item: Concept,
    pub percent: f64,
    /// Videos scored on this item by both raters.
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VideoAgreement {
    pub video_id: String,
    pub percent: f64,
    /// Items of the subset scored on this video by both raters.
    pub pairs: usize,
}

/// Agreement between two rating tables over a subset of items.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub rater_a: String,
    pub rater_b: String,
    /// The item subset used, in canonical order.
    pub items: Vec<Concept>,
    /// Only items with at least one shared video appear.
    pub per_item: Vec<ItemAgreement>,
    pub per_video: Vec<VideoAgreement>,
    /// Mean of the per-video agreements; the headline figure.
    pub average: f64,
    pub compared_pairs: usize,
}

impl AgreementReport {
    pub fn item(&self, item: Concept) -> Option<&ItemAgreement> {
        self.per_item.iter().find(|i| i.item == item)
    }
}

/// Compares two tables on the `(video, item)` keys they share within
/// `items`. The headline number averages per-video agreement.
pub fn compare_tables(
    a: &RatingTable,
    b: &RatingTable,
    items: &[Concept],
) -> Result<AgreementReport, RatingError> {
    let mut subset = items.to_vec();
    subset.sort();
    subset.dedup();

    let mut by_item: BTreeMap<Concept, Vec<(CibScore, CibScore)>> = BTreeMap::new();
    let mut by_video: BTreeMap<&str, Vec<(CibScore, CibScore)>> = BTreeMap::new();
    for (video, item, sa) in a.iter() {
        if subset.binary_search(&item).is_err() {
            continue;
        }
        if let Some(sb) = b.get(video, item) {
            by_item.entry(item).or_default().push((sa, sb));
            by_video.entry(video).or_default().push((sa, sb));
        }
    }
    if by_video.is_empty() {
        return Err(RatingError::NoSharedKeys {
            a: a.rater_id.clone(),
            b: b.rater_id.clone(),
        });
    }

    let per_item = by_item
        .iter()
        .map(|(&item, pairs)| {
            Ok(ItemAgreement {
                item,
                percent: percent_agreement(pairs)?,
                pairs: pairs.len(),
            })
        })
        .collect::<Result<Vec<_>, RatingError>>()?;
    let per_video = by_video
        .iter()
        .map(|(&video, pairs)| {
            Ok(VideoAgreement {
                video_id: video.to_string(),
                percent: percent_agreement(pairs)?,
                pairs: pairs.len(),
            })
        })
        .collect::<Result<Vec<_>, RatingError>>()?;
    let average = per_video.iter().map(|v| v.percent).sum::<f64>() / per_video.len() as f64;
    let compared_pairs = per_video.iter().map(|v| v.pairs).sum();

    Ok(AgreementReport {
        rater_a: a.rater_id.clone(),
        rater_b: b.rater_id.clone(),
        items: subset,
        per_item,
        per_video,
        average,
        compared_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::agreement_recount;
    use proptest::prelude::*;

    fn s(v: f64) -> CibScore {
        CibScore::new(v).unwrap()
    }

    fn table(id: &str, rows: &[(&str, Concept, f64)]) -> RatingTable {
        let mut t = RatingTable::new(id);
        for &(v, c, x) in rows {
            t.insert(v, c, s(x)).unwrap();
        }
        t
    }

    #[test]
    fn agree_rule() {
        assert!(agree(s(3.0), s(4.0)));
        assert!(!agree(s(4.5), s(2.5)));
        assert!(agree(s(1.5), s(2.5)));
        assert!(!agree(s(1.0), s(2.5)));
        for x in CibScore::grid() {
            assert!(agree(x, x));
        }
    }

    #[test]
    fn percent_examples() {
        assert_eq!(percent_agreement(&[(s(3.0), s(4.0)), (s(4.5), s(2.5))]).unwrap(), 50.0);
        assert_eq!(percent_agreement(&[(s(2.0), s(2.0)); 4]).unwrap(), 100.0);
        assert_eq!(percent_agreement(&[]), Err(RatingError::NoPairs));
    }

    fn two_by_two() -> (RatingTable, RatingTable) {
        use Concept::*;
        (
            table("A", &[("v1", Gaze, 3.0), ("v1", Vocalization, 3.0), ("v2", Gaze, 3.0), ("v2", Vocalization, 2.0)]),
            table("B", &[("v1", Gaze, 3.5), ("v1", Vocalization, 4.0), ("v2", Gaze, 3.0), ("v2", Vocalization, 4.0)]),
        )
    }

    #[test]
    fn hand_built_fixture() {
        let (a, b) = two_by_two();
        let r = compare_tables(&a, &b, &Concept::ALL).unwrap();
        let per_video: Vec<f64> = r.per_video.iter().map(|v| v.percent).collect();
        assert_eq!(per_video, vec![100.0, 50.0]);
        assert_eq!(r.average, 75.0);
        assert_eq!(r.compared_pairs, 4);
        assert_eq!(r.item(Concept::Gaze).unwrap().percent, 100.0);
        assert_eq!(r.item(Concept::Vocalization).unwrap().percent, 50.0);

        let r = compare_tables(&a, &b, &[Concept::Gaze]).unwrap();
        assert_eq!(r.average, 100.0);
    }

    #[test]
    fn identical_tables_agree_fully() {
        let (a, _) = two_by_two();
        let r = compare_tables(&a, &a, &Concept::ALL).unwrap();
        assert!(r.per_video.iter().all(|v| v.percent == 100.0));
        assert!(r.per_item.iter().all(|v| v.percent == 100.0));
    }

    #[test]
    fn no_overlap_is_an_error() {
        let a = table("A", &[("v1", Concept::Gaze, 3.0)]);
        let b = table("B", &[("v2", Concept::Gaze, 3.0)]);
        assert!(matches!(
            compare_tables(&a, &b, &Concept::ALL),
            Err(RatingError::NoSharedKeys { .. })
        ));
        let b = table("B", &[("v1", Concept::Anxiety, 3.0)]);
        assert!(compare_tables(&a, &b, &Concept::ALL).is_err());
    }

    fn random_table(id: &'static str) -> impl Strategy<Value = RatingTable> {
        prop::collection::btree_map((0u8..12, 0usize..7), 2u8..=10, 1..60).prop_map(move |m| {
            let mut t = RatingTable::new(id);
            for ((v, c), h) in m {
                t.insert(format!("v{v}"), Concept::ALL[c], CibScore::from_half_points(h).unwrap())
                    .unwrap();
            }
            t
        })
    }

    proptest! {
        #[test]
        fn matches_nested_loop_recount(
            a in random_table("A"),
            b in random_table("B"),
            mask in prop::collection::vec(any::<bool>(), 7),
        ) {
            let items: Vec<Concept> = Concept::ALL.iter().zip(&mask).filter(|(_, &m)| m).map(|(c, _)| *c).collect();
            match (compare_tables(&a, &b, &items), agreement_recount(&a, &b, &items)) {
                (Ok(r), Some(o)) => {
                    prop_assert_eq!(r.average, o.average);
                    let got: Vec<_> = r.per_video.iter().map(|v| (v.video_id.clone(), v.percent)).collect();
                    prop_assert_eq!(got, o.per_video);
                    let got: Vec<_> = r.per_item.iter().map(|v| (v.item, v.percent)).collect();
                    prop_assert_eq!(got, o.per_item);
                }
                (Err(_), None) => {}
                (r, o) => prop_assert!(false, "mismatch {:?} vs {:?}", r, o),
            }
        }

        #[test]
        fn agree_symmetric_and_permutation_invariant(
            pairs in prop::collection::vec((2u8..=10, 2u8..=10), 1..30)
        ) {
            let pairs: Vec<_> = pairs.into_iter()
                .map(|(x, y)| (CibScore::from_half_points(x).unwrap(), CibScore::from_half_points(y).unwrap()))
                .collect();
            for &(x, y) in &pairs {
                prop_assert_eq!(agree(x, y), agree(y, x));
            }
            let mut rev = pairs.clone();
            rev.reverse();
            prop_assert_eq!(percent_agreement(&pairs).unwrap(), percent_agreement(&rev).unwrap());
        }
    }
}
