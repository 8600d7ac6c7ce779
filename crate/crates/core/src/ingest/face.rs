use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::csvutil::{csv_writer, finish, fmt_f64, write_row, HeaderedCsv, Row};
use super::{AUFrame, GazeSample, IngestError, Result, AU_INTENSITY_MAX};

/// AUs the vocalization score reads. A complete face extraction carries all
/// of them.
pub const VOCAL_AUS: [u8; 9] = [10, 12, 14, 15, 17, 20, 23, 25, 26];

/// Gaze and action-unit streams from one face-tracker CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaceStreams {
    pub gaze: Vec<GazeSample>,
    pub aus: Vec<AUFrame>,
}

impl FaceStreams {
    pub fn failed_frames(&self) -> usize {
        self.gaze.iter().filter(|g| !g.success).count()
    }
}

/// Recognizes `AU<NN>_r` intensity columns. Presence columns (`AU<NN>_c`)
/// are ignored.
fn au_intensity_column(name: &str) -> Option<u8> {
    let id: u8 = name.strip_prefix("AU")?.strip_suffix("_r")?.parse().ok()?;
    (1..=45).contains(&id).then_some(id)
}

fn au_columns(csv: &HeaderedCsv) -> Vec<(usize, u8)> {
    csv.headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| au_intensity_column(h).map(|id| (i, id)))
        .collect()
}

fn read_au_cells(row: &Row<'_>, columns: &[(usize, u8)]) -> Result<BTreeMap<u8, f64>> {
    let mut intensity = BTreeMap::new();
    for &(idx, id) in columns {
        let Some(v) = row.optional_number(idx)? else {
            continue;
        };
        if !(0.0..=AU_INTENSITY_MAX).contains(&v) {
            return Err(IngestError::invalid(
                row.path,
                row.location(),
                format!("AU{id:02} intensity {v} outside [0, {AU_INTENSITY_MAX}]"),
            ));
        }
        intensity.insert(id, v);
    }
    Ok(intensity)
}

/// Parses a face-tracker CSV (OpenFace `FeatureExtraction` layout).
///
/// Requires `frame`, `timestamp`, `success`, `gaze_angle_x` and
/// `gaze_angle_y`; every `AU<NN>_r` column found is read into the AU stream.
/// Rows where tracking failed are kept with `success == false`.
pub fn parse_face_csv(path: impl AsRef<Path>) -> Result<FaceStreams> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let frame = csv.column("frame")?;
    let timestamp = csv.column("timestamp")?;
    let success = csv.column("success")?;
    let gx = csv.column("gaze_angle_x")?;
    let gy = csv.column("gaze_angle_y")?;
    let aus = au_columns(&csv);

    if !aus.is_empty() {
        let present: BTreeSet<u8> = aus.iter().map(|&(_, id)| id).collect();
        let missing: Vec<String> = VOCAL_AUS
            .iter()
            .filter(|id| !present.contains(id))
            .map(|id| format!("AU{id:02}_r"))
            .collect();
        if !missing.is_empty() {
            log::warn!(
                "{}: incomplete AU extraction, missing {}",
                path.display(),
                missing.join(", ")
            );
        }
    }

    let mut out = FaceStreams::default();
    csv.for_each_row(|row| {
        let frame_index = row.index(frame)?;
        out.gaze.push(GazeSample {
            frame_index,
            timestamp_s: row.number(timestamp)?,
            success: row.number(success)? != 0.0,
            gaze_angle_x: row.finite(gx)?,
            gaze_angle_y: row.finite(gy)?,
        });
        if !aus.is_empty() {
            out.aus.push(AUFrame {
                frame_index,
                intensity: read_au_cells(row, &aus)?,
            });
        }
        Ok(())
    })?;
    Ok(out)
}

/// Reads the canonical `aus.csv` of a bundle: `frame` plus `AU<NN>_r`
/// columns, blank cells meaning "not extracted".
pub fn read_aus_csv(path: impl AsRef<Path>) -> Result<Vec<AUFrame>> {
    let path = path.as_ref();
    let mut csv = HeaderedCsv::open(path)?;
    let frame = csv.column("frame")?;
    let aus = au_columns(&csv);
    let mut out = Vec::new();
    csv.for_each_row(|row| {
        out.push(AUFrame {
            frame_index: row.index(frame)?,
            intensity: read_au_cells(row, &aus)?,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Writes gaze samples in the face-CSV layout (gaze columns only), which
/// [`parse_face_csv`] reads back unchanged.
pub fn write_gaze_csv(path: impl AsRef<Path>, gaze: &[GazeSample]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    write_row(
        &mut w,
        path,
        ["frame", "timestamp", "success", "gaze_angle_x", "gaze_angle_y"],
    )?;
    for g in gaze {
        write_row(
            &mut w,
            path,
            [
                g.frame_index.to_string(),
                fmt_f64(g.timestamp_s),
                u8::from(g.success).to_string(),
                fmt_f64(g.gaze_angle_x),
                fmt_f64(g.gaze_angle_y),
            ],
        )?;
    }
    finish(w, path)
}

pub fn write_aus_csv(path: impl AsRef<Path>, aus: &[AUFrame]) -> Result<()> {
    let path = path.as_ref();
    let ids: BTreeSet<u8> = aus.iter().flat_map(|f| f.intensity.keys().copied()).collect();
    let mut w = csv_writer(path)?;
    let header = std::iter::once("frame".to_string())
        .chain(ids.iter().map(|id| format!("AU{id:02}_r")));
    write_row(&mut w, path, header)?;
    for f in aus {
        let cells = std::iter::once(f.frame_index.to_string()).chain(
            ids.iter()
                .map(|id| f.intensity.get(id).map(|&v| fmt_f64(v)).unwrap_or_default()),
        );
        write_row(&mut w, path, cells)?;
    }
    finish(w, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn single_row_read_verbatim() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "face.csv",
            "frame, face_id, timestamp, confidence, success, gaze_angle_x, gaze_angle_y, AU25_r, AU25_c\n\
             1, 0, 0.04, 0.98, 1, 0.10, -0.05, 2.0, 1\n",
        );
        let s = parse_face_csv(&p).unwrap();
        assert_eq!(s.gaze.len(), 1);
        assert_eq!(s.gaze[0].gaze_angle_x, 0.10);
        assert_eq!(s.gaze[0].gaze_angle_y, -0.05);
        assert!(s.gaze[0].success);
        assert_eq!(s.aus.len(), 1);
        assert_eq!(s.aus[0].intensity, BTreeMap::from([(25, 2.0)]));
    }

    #[test]
    fn header_only_gives_empty_streams() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "face.csv",
            "frame,timestamp,success,gaze_angle_x,gaze_angle_y,AU12_r\n",
        );
        let s = parse_face_csv(&p).unwrap();
        assert!(s.gaze.is_empty() && s.aus.is_empty());
    }

    #[test]
    fn missing_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "face.csv", "frame,timestamp,success,gaze_angle_x\n1,0,1,0.1\n");
        let err = parse_face_csv(&p).unwrap_err();
        match &err {
            IngestError::MissingColumn { column, .. } => assert_eq!(column, "gaze_angle_y"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("face.csv"));
    }

    #[test]
    fn non_numeric_cell_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "face.csv",
            "frame,timestamp,success,gaze_angle_x,gaze_angle_y\n1,0,1,0.1,0.2\n2,0.04,1,abc,0.2\n",
        );
        let err = parse_face_csv(&p).unwrap_err();
        match err {
            IngestError::Parse {
                location, column, ..
            } => {
                assert_eq!(location, super::super::Location::Line(3));
                assert_eq!(column, "gaze_angle_x");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn failed_rows_are_kept() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "face.csv",
            "frame,timestamp,success,gaze_angle_x,gaze_angle_y\n1,0,1,0.1,0.2\n2,0.04,0,0,0\n",
        );
        let s = parse_face_csv(&p).unwrap();
        assert_eq!(s.gaze.len(), 2);
        assert_eq!(s.failed_frames(), 1);
    }

    #[test]
    fn column_order_does_not_matter() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(
            &dir,
            "a.csv",
            "frame,timestamp,success,gaze_angle_x,gaze_angle_y,AU12_r,AU26_r\n3,0.1,1,0.25,-0.5,1.5,0.0\n",
        );
        let b = write(
            &dir,
            "b.csv",
            "AU26_r,gaze_angle_y,success,AU12_r,timestamp,gaze_angle_x,frame\n0.0,-0.5,1,1.5,0.1,0.25,3\n",
        );
        assert_eq!(parse_face_csv(&a).unwrap(), parse_face_csv(&b).unwrap());
    }

    #[test]
    fn intensity_out_of_range_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "face.csv",
            "frame,timestamp,success,gaze_angle_x,gaze_angle_y,AU12_r\n1,0,1,0.1,0.2,5.5\n",
        );
        assert!(matches!(
            parse_face_csv(&p),
            Err(IngestError::Invalid { .. })
        ));
    }

    #[test]
    fn au_column_recognition() {
        assert_eq!(au_intensity_column("AU25_r"), Some(25));
        assert_eq!(au_intensity_column("AU05_r"), Some(5));
        assert_eq!(au_intensity_column("AU25_c"), None);
        assert_eq!(au_intensity_column("AU99_r"), None);
    }
}
