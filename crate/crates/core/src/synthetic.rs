//! A small hand-checkable video whose concept vector is known exactly.
//!
//! Gaze: calibration spans [-0.1, 0.1] in both angles (a failed calibration
//! frame far outside is ignored). Of the ten scored frames, two failed;
//! six of the remaining eight lie inside, so gaze is 75.
//!
//! Mouth: two jaw-drop frames, three lips-apart, two closed-mouth and three
//! without evidence, so vocalization is (3 * 50 + 2 * 100) / 7 = 50.
//!
//! Expression means over four frames: happy 20, neutral 50, sad 7.5,
//! disgust 7.5, angry 5, fear 5, surprise 5. The arousal peak is
//! 100 - neutral = 50.
//!
//! Frames: ten 8x8 frames, black except the top half (32 px) at 200 in
//! frames 2 to 6. Those pixels are foreground in all five frames, so the
//! heatmap holds 5 on half the image and activity is 100 * 5 * 32 / (255 * 64)
//! = 50/51.

use std::fs;
use std::path::{Path, PathBuf};

use crate::composites::ConceptScores;
use crate::concept::Concept;
use crate::ingest::{
    write_frames, AUFrame, DetectionBox, EmotionFrame, FeatureBundle, GazeSample, GrayFrame,
    IngestError,
};

pub const SYNTHETIC_VIDEO_ID: &str = "synth01";
pub const SYNTHETIC_FPS: f64 = 25.0;

/// Intensity columns a full face-tracker export carries.
const EXPORTED_AUS: [u8; 17] = [1, 2, 4, 5, 6, 7, 9, 10, 12, 14, 15, 17, 20, 23, 25, 26, 45];

const FRAME_W: u32 = 8;
const FRAME_H: u32 = 8;

fn gaze(frame: u64, success: bool, x: f64, y: f64) -> GazeSample {
    GazeSample {
        frame_index: frame,
        timestamp_s: (frame - 1) as f64 / SYNTHETIC_FPS,
        success,
        gaze_angle_x: x,
        gaze_angle_y: y,
    }
}

fn calibration() -> Vec<GazeSample> {
    vec![
        gaze(1, true, -0.1, -0.1),
        gaze(2, true, 0.1, -0.1),
        gaze(3, false, 0.5, 0.5),
        gaze(4, true, -0.1, 0.1),
        gaze(5, true, 0.1, 0.1),
        gaze(6, true, 0.0, 0.0),
    ]
}

fn scored_gaze() -> Vec<GazeSample> {
    vec![
        gaze(1, true, 0.0, 0.0),
        gaze(2, true, 0.05, -0.05),
        gaze(3, true, 0.1, 0.1),
        gaze(4, true, -0.1, 0.02),
        gaze(5, true, 0.08, -0.1),
        gaze(6, true, -0.03, 0.07),
        gaze(7, true, 0.3, 0.0),
        gaze(8, true, 0.0, -0.25),
        // failed frames report zero angles, which would land inside
        gaze(9, false, 0.0, 0.0),
        gaze(10, false, 0.0, 0.0),
    ]
}

fn aus() -> Vec<AUFrame> {
    let set: [&[(u8, f64)]; 10] = [
        &[(26, 2.0), (25, 3.0)],
        &[(26, 1.0)],
        &[(25, 1.5)],
        &[(25, 1.0), (12, 2.0)],
        &[(25, 2.5), (6, 1.2)],
        &[(12, 1.5)],
        &[(17, 1.0), (26, 0.9)],
        &[(25, 0.99), (4, 2.0)],
        &[],
        &[],
    ];
    set.iter()
        .enumerate()
        .map(|(i, active)| {
            let mut intensity: std::collections::BTreeMap<u8, f64> =
                EXPORTED_AUS.iter().map(|&id| (id, 0.0)).collect();
            for &(id, v) in active.iter() {
                intensity.insert(id, v);
            }
            AUFrame {
                frame_index: i as u64 + 1,
                intensity,
            }
        })
        .collect()
}

fn emotions() -> Vec<EmotionFrame> {
    // angry, disgust, fear, happy, neutral, sad, surprise
    let rows = [
        [0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0],
        [0.2, 0.0, 0.0, 0.3, 0.4, 0.1, 0.0],
        [0.0, 0.0, 0.2, 0.0, 0.6, 0.0, 0.2],
        [0.0, 0.3, 0.0, 0.0, 0.5, 0.2, 0.0],
    ];
    rows.iter()
        .enumerate()
        .map(|(i, &probs)| EmotionFrame {
            frame_index: i as u64 + 1,
            probs,
        })
        .collect()
}

fn person(frame: u64, x: f64, y: f64, w: f64, h: f64, confidence: f64) -> DetectionBox {
    DetectionBox {
        frame_index: frame,
        class_label: "person".into(),
        x,
        y,
        w,
        h,
        confidence,
    }
}

/// The youth fills the left of the frame; a smaller interviewer box
/// appears on the right in every other frame.
fn detections() -> Vec<DetectionBox> {
    let mut out = Vec::new();
    for f in 1..=10u64 {
        let jitter = (f % 3) as f64 * 0.25;
        out.push(person(f, 0.5 + jitter, 0.25, 4.0, 7.5, 0.91));
        if f % 2 == 0 {
            out.push(person(f, 6.0, 1.0 + jitter, 1.5, 2.0, 0.64));
        }
    }
    out
}

fn frames() -> Vec<GrayFrame> {
    (1..=10u64)
        .map(|f| {
            let mut frame = GrayFrame::filled(f, FRAME_W, FRAME_H, 0);
            if (2..=6).contains(&f) {
                let half = (FRAME_W * FRAME_H / 2) as usize;
                frame.pixels[..half].fill(200);
            }
            frame
        })
        .collect()
}

pub fn synthetic_bundle() -> FeatureBundle {
    FeatureBundle {
        video_id: SYNTHETIC_VIDEO_ID.into(),
        fps: SYNTHETIC_FPS,
        gaze: Some(scored_gaze()),
        gaze_calibration: Some(calibration()),
        aus: Some(aus()),
        emotions: Some(emotions()),
        detections: Some(detections()),
        frames: Some(frames()),
    }
}

/// Motion activity of the synthetic frames.
pub const SYNTHETIC_ACTIVITY: f64 = 50.0 / 51.0;

/// The concept vector worked out by hand in the module docs.
pub fn synthetic_expected() -> ConceptScores {
    let activity = SYNTHETIC_ACTIVITY;
    let anxiety = (activity + 7.5) / 2.0;
    let mut s = ConceptScores::default();
    s.set(Concept::Gaze, Some(75.0));
    s.set(Concept::Vocalization, Some(50.0));
    s.set(Concept::PositiveAffect, Some(20.0));
    s.set(Concept::NegativeEmotionality, Some(7.5));
    s.set(Concept::ActivityArousal, Some((activity + 50.0 + 50.0) / 3.0));
    s.set(Concept::Anxiety, Some(anxiety));
    s.set(Concept::Attention, Some(100.0 - (activity + anxiety) / 2.0));
    s
}

/// Paths of the upstream-style exports written by [`write_raw_exports`].
#[derive(Debug, Clone)]
pub struct RawExports {
    pub face: PathBuf,
    pub calibration: PathBuf,
    pub emotions: PathBuf,
    pub detections: PathBuf,
    pub frames: PathBuf,
}

fn face_csv(gaze: &[GazeSample], aus: Option<&[AUFrame]>) -> String {
    // face-tracker exports pad their header and cells with a space
    let mut header = vec!["frame", "face_id", "timestamp", "confidence", "success"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    header.extend(["gaze_angle_x", "gaze_angle_y"].map(String::from));
    if aus.is_some() {
        header.extend(EXPORTED_AUS.iter().map(|id| format!("AU{id:02}_r")));
        header.extend(EXPORTED_AUS.iter().map(|id| format!("AU{id:02}_c")));
    }
    let mut out = header.join(", ");
    out.push('\n');
    for (i, g) in gaze.iter().enumerate() {
        let mut cells = vec![
            g.frame_index.to_string(),
            "0".into(),
            format!("{}", g.timestamp_s),
            if g.success { "0.98" } else { "0" }.into(),
            u8::from(g.success).to_string(),
            format!("{}", g.gaze_angle_x),
            format!("{}", g.gaze_angle_y),
        ];
        if let Some(aus) = aus {
            let f = &aus[i];
            cells.extend(EXPORTED_AUS.iter().map(|id| format!("{}", f.intensity(*id))));
            cells.extend(
                EXPORTED_AUS
                    .iter()
                    .map(|id| if f.intensity(*id) >= 1.0 { "1" } else { "0" }.to_string()),
            );
        }
        out.push_str(&cells.join(", "));
        out.push('\n');
    }
    out
}

fn emotion_csv(frames: &[EmotionFrame]) -> String {
    // class columns in the detector's own order, not the crate's
    let order = [0usize, 1, 2, 3, 5, 6, 4];
    let names = ["angry", "disgust", "fear", "happy", "neutral", "sad", "surprise"];
    let mut out = String::from("frame");
    for &i in &order {
        out.push(',');
        out.push_str(names[i]);
    }
    out.push('\n');
    for f in frames {
        out.push_str(&f.frame_index.to_string());
        for &i in &order {
            out.push_str(&format!(",{}", f.probs[i]));
        }
        out.push('\n');
    }
    out
}

fn detection_csv(boxes: &[DetectionBox]) -> String {
    let mut out = String::from("frame,class,x,y,w,h,confidence\n");
    for b in boxes {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            b.frame_index, b.class_label, b.x, b.y, b.w, b.h, b.confidence
        ));
        if b.frame_index == 3 && b.class_label == "person" {
            out.push_str("3,chair,6.5,5,1.5,3,0.55\n");
        }
    }
    out
}

/// Writes the synthetic video as upstream-model exports (face-tracker CSV,
/// calibration clip, expression scores, detections and a frame directory)
/// under `dir`. Ingesting them reproduces [`synthetic_bundle`].
pub fn write_raw_exports(dir: impl AsRef<Path>) -> Result<RawExports, IngestError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;
    let b = synthetic_bundle();
    let paths = RawExports {
        face: dir.join("face.csv"),
        calibration: dir.join("calibration.csv"),
        emotions: dir.join("emotions.csv"),
        detections: dir.join("detections.csv"),
        frames: dir.join("frames"),
    };
    let write = |p: &Path, text: String| fs::write(p, text).map_err(|e| IngestError::io(p, e));
    write(&paths.face, face_csv(b.gaze.as_deref().unwrap(), b.aus.as_deref()))?;
    write(&paths.calibration, face_csv(b.gaze_calibration.as_deref().unwrap(), None))?;
    write(&paths.emotions, emotion_csv(b.emotions.as_deref().unwrap()))?;
    write(&paths.detections, detection_csv(b.detections.as_deref().unwrap()))?;
    write_frames(&paths.frames, b.frames.as_deref().unwrap())?;
    Ok(paths)
}
