use std::path::{Path, PathBuf};

use cib_core::ingest::{
    assemble_bundle, load_frames, parse_detections_csv, parse_emotion_csv, parse_face_csv,
    write_bundle, BundleStreams,
};
use clap::Args;

use crate::error::CliError;

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    video_id: String,
    #[arg(long)]
    fps: f64,
    /// Face-tracker CSV with gaze angles and AU intensities.
    #[arg(long)]
    face: Option<PathBuf>,
    /// Face-tracker CSV of a clip with known eye contact.
    #[arg(long)]
    calibration: Option<PathBuf>,
    /// Per-frame expression class scores.
    #[arg(long)]
    emotions: Option<PathBuf>,
    /// Object detections (person rows are kept).
    #[arg(long)]
    detections: Option<PathBuf>,
    /// Directory of grayscale PGM frames.
    #[arg(long)]
    frames: Option<PathBuf>,
    /// Bundle directory to write.
    #[arg(long)]
    out: PathBuf,
}

/// `Some(path)` when given and present; a named but missing file is a
/// warning, not an error, since every stream is optional.
fn present<'a>(name: &str, path: &'a Option<PathBuf>, warnings: &mut Vec<String>) -> Option<&'a Path> {
    match path {
        Some(p) if p.exists() => Some(p),
        Some(p) => {
            warnings.push(format!("{name} file {} not found; bundle written without it", p.display()));
            None
        }
        None => None,
    }
}

pub fn run(args: &IngestArgs) -> Result<(), CliError> {
    let mut warnings = Vec::new();
    let mut streams = BundleStreams::default();
    let mut counts = Vec::new();

    if let Some(p) = present("face", &args.face, &mut warnings) {
        let face = parse_face_csv(p)?;
        counts.push(format!("gaze: {} rows ({} failed tracking)", face.gaze.len(), face.failed_frames()));
        if face.aus.is_empty() && !face.gaze.is_empty() {
            warnings.push(format!("{}: no AU intensity columns; vocalization unavailable", p.display()));
        } else {
            counts.push(format!("aus: {} rows", face.aus.len()));
            streams.aus = Some(face.aus);
        }
        streams.gaze = Some(face.gaze);
    }
    if let Some(p) = present("calibration", &args.calibration, &mut warnings) {
        let cal = parse_face_csv(p)?;
        counts.push(format!("calibration: {} rows", cal.gaze.len()));
        streams.gaze_calibration = Some(cal.gaze);
    }
    if let Some(p) = present("emotions", &args.emotions, &mut warnings) {
        let e = parse_emotion_csv(p)?;
        counts.push(format!("emotions: {} rows", e.len()));
        streams.emotions = Some(e);
    }
    if let Some(p) = present("detections", &args.detections, &mut warnings) {
        let d = parse_detections_csv(p)?;
        counts.push(format!(
            "detections: {} person boxes ({} other rows dropped)",
            d.boxes.len(),
            d.dropped_non_person
        ));
        streams.detections = Some(d.boxes);
    }
    if let Some(p) = present("frames", &args.frames, &mut warnings) {
        let f = load_frames(p)?;
        match f.first() {
            Some(first) => counts.push(format!("frames: {} ({}x{})", f.len(), first.width, first.height)),
            None => warnings.push(format!("{}: no .pgm frames", p.display())),
        }
        streams.frames = Some(f);
    }
    if streams.gaze.is_none()
        && streams.gaze_calibration.is_none()
        && streams.emotions.is_none()
        && streams.detections.is_none()
        && streams.frames.is_none()
    {
        return Err(CliError::input("no input streams given"));
    }

    let (bundle, assembly) = assemble_bundle(&args.video_id, args.fps, streams)?;
    warnings.extend(assembly);
    write_bundle(&args.out, &bundle).map_err(CliError::output)?;

    for line in &counts {
        println!("{line}");
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "wrote bundle `{}` to {} ({} warning(s))",
        bundle.video_id,
        args.out.display(),
        warnings.len()
    );
    Ok(())
}
