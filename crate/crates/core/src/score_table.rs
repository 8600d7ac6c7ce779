//! Concept-score CSV: one row per video, `video_id` plus one column per
//! concept, blank where a concept was unavailable.

use std::path::Path;

use crate::composites::ConceptScores;
use crate::concept::Concept;
use crate::ingest::csvutil::{csv_writer, finish, fmt_f64, write_row, HeaderedCsv};
use crate::ingest::{IngestError, Location};
use crate::rating::{RatingError, RatingTable, ScaleMap};

/// Rater id given to machine scores when they are compared to humans.
pub const MACHINE_RATER: &str = "ML";

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub video_id: String,
    pub scores: ConceptScores,
}

pub fn write_scores_csv(path: impl AsRef<Path>, rows: &[ScoreRow]) -> Result<(), IngestError> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    let header = std::iter::once("video_id").chain(Concept::ALL.iter().map(|c| c.as_str()));
    write_row(&mut w, path, header)?;
    for row in rows {
        let cells = std::iter::once(row.video_id.clone())
            .chain(row.scores.iter().map(|(_, v)| v.map(fmt_f64).unwrap_or_default()));
        write_row(&mut w, path, cells)?;
    }
    finish(w, path)
}

pub fn read_scores_csv(path: impl AsRef<Path>) -> Result<Vec<ScoreRow>, IngestError> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let video = csv.column("video_id")?;
    let mut cols = [0usize; 7];
    for c in Concept::ALL {
        cols[c.index()] = csv.column(c.as_str())?;
    }
    let mut rows = Vec::new();
    csv.for_each_row(|row| {
        let video_id = row.text(video).to_string();
        if video_id.is_empty() {
            return Err(IngestError::invalid(path, row.location(), "video_id must be non-empty"));
        }
        let mut scores = ConceptScores::default();
        for c in Concept::ALL {
            let value = row.optional_number(cols[c.index()])?;
            if let Some(v) = value {
                if !(0.0..=100.0).contains(&v) {
                    return Err(IngestError::invalid(
                        path,
                        row.location(),
                        format!("{c} = {v} outside [0, 100]"),
                    ));
                }
            }
            scores.set(c, value);
        }
        rows.push(ScoreRow { video_id, scores });
        Ok(())
    })?;
    Ok(rows)
}

/// Which kind of table a CSV holds, judged from its header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Ratings,
    Scores,
}

pub fn sniff_table_kind(path: impl AsRef<Path>) -> Result<TableKind, IngestError> {
    let path = path.as_ref();
    let csv = HeaderedCsv::open(path)?;
    let has = |name: &str| csv.optional_column(name).is_some();
    if has("rater_id") && has("score") {
        Ok(TableKind::Ratings)
    } else if has("video_id") && Concept::ALL.iter().any(|c| has(c.as_str())) {
        Ok(TableKind::Scores)
    } else {
        Err(IngestError::invalid(
            path,
            Location::Line(1),
            "header matches neither a ratings table (rater_id, video_id, item, score) \
             nor a concept-score table (video_id, <concepts>)",
        ))
    }
}

/// Quantizes machine percentages onto the rating grid. Unavailable concepts
/// are left out.
pub fn scores_to_ratings(
    rows: &[ScoreRow],
    map: &dyn ScaleMap,
    rater_id: &str,
) -> Result<RatingTable, RatingError> {
    let mut table = RatingTable::new(rater_id);
    for row in rows {
        for (c, v) in row.scores.iter() {
            if let Some(p) = v {
                table.insert(row.video_id.clone(), c, map.quantize(p)?)?;
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rating::LinearHalfPoint;

    fn row(id: &str, values: [Option<f64>; 7]) -> ScoreRow {
        let mut scores = ConceptScores::default();
        for (c, v) in Concept::ALL.iter().zip(values) {
            scores.set(*c, v);
        }
        ScoreRow {
            video_id: id.into(),
            scores,
        }
    }

    #[test]
    fn round_trip_keeps_full_precision_and_blanks() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("scores.csv");
        let rows = vec![
            row("a", [Some(75.0), Some(50.0), Some(1.0 / 3.0), None, None, None, None]),
            row("b", [None, None, None, Some(99.99), Some(0.0), Some(100.0), Some(2.0 / 7.0)]),
        ];
        write_scores_csv(&p, &rows).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("video_id,gaze,vocalization,"));
        assert!(text.contains("a,75,50,0.3333333333333333,,,,\n"), "{text}");
        assert_eq!(read_scores_csv(&p).unwrap(), rows);
        assert_eq!(sniff_table_kind(&p).unwrap(), TableKind::Scores);
    }

    #[test]
    fn quantized_table_skips_unavailable() {
        let rows = vec![row("a", [Some(75.0), None, Some(37.5), None, None, None, None])];
        let t = scores_to_ratings(&rows, &LinearHalfPoint, MACHINE_RATER).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("a", Concept::Gaze).unwrap().value(), 4.0);
        assert_eq!(t.get("a", Concept::PositiveAffect).unwrap().value(), 2.5);
    }

    #[test]
    fn sniffing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, "rater_id,video_id,item,score\n").unwrap();
        assert_eq!(sniff_table_kind(&p).unwrap(), TableKind::Ratings);
        std::fs::write(&p, "a,b\n").unwrap();
        assert!(sniff_table_kind(&p).is_err());
    }

    #[test]
    fn out_of_range_percentage_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        std::fs::write(
            &p,
            "video_id,gaze,vocalization,positive_affect,negative_emotionality,activity_arousal,anxiety,attention\nv,101,,,,,,\n",
        )
        .unwrap();
        let err = read_scores_csv(&p).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
