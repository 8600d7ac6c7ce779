use std::collections::BTreeMap;
use std::path::Path;

use super::{CibScore, RatingError};
use crate::concept::Concept;
use crate::ingest::csvutil::{csv_writer, finish, write_row, HeaderedCsv};
use crate::ingest::IngestError;

/// One rater's scores keyed by `(video_id, item)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingTable {
    pub rater_id: String,
    scores: BTreeMap<(String, Concept), CibScore>,
}

impl RatingTable {
    pub fn new(rater_id: impl Into<String>) -> Self {
        RatingTable {
            rater_id: rater_id.into(),
            scores: BTreeMap::new(),
        }
    }

    pub fn insert(
        &mut self,
        video_id: impl Into<String>,
        item: Concept,
        score: CibScore,
    ) -> Result<(), RatingError> {
        let video = video_id.into();
        if self.scores.contains_key(&(video.clone(), item)) {
            return Err(RatingError::Duplicate {
                rater: self.rater_id.clone(),
                video,
                item,
            });
        }
        self.scores.insert((video, item), score);
        Ok(())
    }

    pub fn get(&self, video_id: &str, item: Concept) -> Option<CibScore> {
        self.scores.get(&(video_id.to_string(), item)).copied()
    }

    /// Entries in `(video_id, item)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, Concept, CibScore)> {
        self.scores.iter().map(|((v, c), s)| (v.as_str(), *c, *s))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Reads a ratings CSV (`rater_id, video_id, item, score`). A file may hold
/// several raters; tables come back in order of first appearance.
pub fn read_ratings_csv(path: impl AsRef<Path>) -> Result<Vec<RatingTable>, IngestError> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let rater = csv.column("rater_id")?;
    let video = csv.column("video_id")?;
    let item = csv.column("item")?;
    let score = csv.column("score")?;
    let mut tables: Vec<RatingTable> = Vec::new();
    csv.for_each_row(|row| {
        let invalid = |msg: String| IngestError::invalid(path, row.location(), msg);
        let rater_id = row.text(rater);
        let video_id = row.text(video);
        if rater_id.is_empty() || video_id.is_empty() {
            return Err(invalid("rater_id and video_id must be non-empty".into()));
        }
        let concept: Concept = row.text(item).parse().map_err(|e| invalid(format!("{e}")))?;
        let value = CibScore::new(row.number(score)?).map_err(|e| invalid(e.to_string()))?;
        let idx = match tables.iter().position(|t| t.rater_id == rater_id) {
            Some(i) => i,
            None => {
                tables.push(RatingTable::new(rater_id));
                tables.len() - 1
            }
        };
        tables[idx]
            .insert(video_id, concept, value)
            .map_err(|e| invalid(e.to_string()))
    })?;
    Ok(tables)
}

pub fn write_ratings_csv(path: impl AsRef<Path>, tables: &[RatingTable]) -> Result<(), IngestError> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    write_row(&mut w, path, ["rater_id", "video_id", "item", "score"])?;
    for t in tables {
        for (video, item, score) in t.iter() {
            write_row(
                &mut w,
                path,
                [t.rater_id.as_str(), video, item.as_str(), &score.to_string()],
            )?;
        }
    }
    finish(w, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn read_two_raters() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(
            &p,
            "rater_id,video_id,item,score\nR1,v1,gaze,3\nR2,v1,gaze,3.5\nR1,v1,anxiety,1.5\n",
        )
        .unwrap();
        let t = read_ratings_csv(&p).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].rater_id, "R1");
        assert_eq!(t[0].len(), 2);
        assert_eq!(t[1].get("v1", Concept::Gaze).unwrap().value(), 3.5);

        let out = dir.path().join("out.csv");
        write_ratings_csv(&out, &t).unwrap();
        assert_eq!(read_ratings_csv(&out).unwrap(), t);
    }

    #[test]
    fn off_grid_and_duplicates_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, "rater_id,video_id,item,score\nR1,v1,gaze,3.2\n").unwrap();
        let err = read_ratings_csv(&p).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");

        std::fs::write(&p, "rater_id,video_id,item,score\nR1,v1,gaze,3\nR1,v1,gaze,4\n").unwrap();
        assert!(read_ratings_csv(&p).is_err());

        std::fs::write(&p, "rater_id,video_id,item,score\nR1,v1,smile,3\n").unwrap();
        assert!(read_ratings_csv(&p).is_err());
    }
}
