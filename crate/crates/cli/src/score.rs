use std::fs;
use std::path::{Path, PathBuf};

use cib_core::ingest::read_bundle;
use cib_core::motion::export_heatmap;
use cib_core::score_table::{write_scores_csv, ScoreRow};
use cib_core::{score_video, RunConfig, VideoScores};
use clap::Args;
use rayon::prelude::*;

use crate::error::CliError;
use crate::{effective_config, Overrides};

pub const SCORES_FILE: &str = "scores.csv";
pub const ERRORS_FILE: &str = "score_errors.csv";

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Canonical bundle directories.
    #[arg(required = true)]
    bundles: Vec<PathBuf>,
    /// Also write each video's motion heatmap as a PGM image.
    #[arg(long)]
    emit_heatmaps: bool,
    /// Worker threads (default: one per core).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    overrides: Overrides,
}

fn score_one(dir: &Path, cfg: &RunConfig) -> Result<VideoScores, String> {
    let (bundle, warnings) = read_bundle(dir).map_err(|e| e.to_string())?;
    for w in warnings {
        log::warn!("{}: {w}", bundle.video_id);
    }
    score_video(&bundle, cfg).map_err(|e| e.to_string())
}

fn write_errors(path: &Path, errors: &[(String, String)]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::internal(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["bundle", "error"]).map_err(io)?;
    for (bundle, message) in errors {
        w.write_record([bundle, message]).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::internal(format!("{}: {e}", path.display())))
}

pub fn run(config: Option<&PathBuf>, args: &ScoreArgs) -> Result<(), CliError> {
    let cfg = effective_config(config, &args.overrides)?;
    let out_dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::internal(format!("{}: {e}", out_dir.display())))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::internal(e.to_string()))?;
    // collect keeps input order, so output does not depend on scheduling
    let results: Vec<Result<VideoScores, String>> =
        pool.install(|| args.bundles.par_iter().map(|d| score_one(d, &cfg)).collect());

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (dir, result) in args.bundles.iter().zip(results) {
        match result {
            Ok(scores) => {
                if args.emit_heatmaps {
                    if let (Some(h), Some(a)) = (&scores.heatmap, scores.activity) {
                        export_heatmap(&out_dir.join("heatmaps"), &scores.video_id, h, a)
                            .map_err(CliError::output)?;
                    } else {
                        log::warn!("{}: no heatmap to export (no frames)", scores.video_id);
                    }
                }
                rows.push(ScoreRow {
                    video_id: scores.video_id,
                    scores: scores.scores,
                });
            }
            Err(message) => {
                eprintln!("warning: {}: {message}", dir.display());
                errors.push((dir.display().to_string(), message));
            }
        }
    }

    let scores_path = out_dir.join(SCORES_FILE);
    write_scores_csv(&scores_path, &rows).map_err(CliError::output)?;
    let errors_path = out_dir.join(ERRORS_FILE);
    if errors.is_empty() {
        // a stale error file from an earlier run would be misleading
        if errors_path.exists() {
            fs::remove_file(&errors_path)
                .map_err(|e| CliError::internal(format!("{}: {e}", errors_path.display())))?;
        }
    } else {
        write_errors(&errors_path, &errors)?;
    }

    println!(
        "scored {} video(s) into {}; {} error(s)",
        rows.len(),
        scores_path.display(),
        errors.len()
    );
    if rows.is_empty() {
        return Err(CliError::input(format!(
            "no bundle could be scored; see {}",
            errors_path.display()
        )));
    }
    if !errors.is_empty() {
        eprintln!("warning: {} bundle(s) failed; see {}", errors.len(), errors_path.display());
    }
    Ok(())
}
