use std::path::PathBuf;

use cib_core::concept::Concept;
use cib_core::rating::{compare_tables, read_ratings_csv, RatingTable};
use cib_core::registry::scale_maps;
use cib_core::score_table::{read_scores_csv, scores_to_ratings, sniff_table_kind, TableKind, MACHINE_RATER};
use clap::Args;

use crate::error::CliError;
use crate::report::{write_reports, Comparison};
use crate::{effective_config, parse_items, ItemList, Overrides};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ratings CSVs (rater_id, video_id, item, score) and at most one
    /// concept-score CSV, which is quantized before comparison.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Items left out of every comparison.
    #[arg(long, value_parser = parse_items)]
    drop_items: Option<ItemList>,
    #[command(flatten)]
    overrides: Overrides,
}

pub fn run(config: Option<&PathBuf>, args: &EvaluateArgs) -> Result<(), CliError> {
    let cfg = effective_config(config, &args.overrides)?;
    let out_dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));

    let mut humans: Vec<RatingTable> = Vec::new();
    let mut machine: Option<RatingTable> = None;
    for path in &args.inputs {
        match sniff_table_kind(path)? {
            TableKind::Ratings => humans.extend(read_ratings_csv(path)?),
            TableKind::Scores => {
                if machine.is_some() {
                    return Err(CliError::input(format!(
                        "{}: only one concept-score table may be compared",
                        path.display()
                    )));
                }
                let rows = read_scores_csv(path)?;
                let map = scale_maps().create(&cfg.scale_map, &cfg)?;
                let table = scores_to_ratings(&rows, map.as_ref(), MACHINE_RATER)?;
                log::info!(
                    "{}: quantized {} score(s) from {} video(s) with the `{}` map",
                    path.display(),
                    table.len(),
                    rows.len(),
                    map.name()
                );
                machine = Some(table);
            }
        }
    }
    let mut seen: Vec<&str> = Vec::new();
    for t in humans.iter().chain(machine.iter()) {
        if seen.contains(&t.rater_id.as_str()) {
            return Err(CliError::input(format!("rater `{}` appears more than once", t.rater_id)));
        }
        seen.push(&t.rater_id);
    }
    if humans.len() + machine.iter().len() < 2 {
        return Err(CliError::evaluation(format!(
            "need at least two raters to compare, found {}",
            seen.len()
        )));
    }

    let dropped: Vec<Concept> = {
        let mut d = args.drop_items.clone().map(|l| l.0).unwrap_or_default();
        d.sort();
        d.dedup();
        d
    };
    let items: Vec<Concept> = cfg.items.iter().copied().filter(|c| !dropped.contains(c)).collect();
    if items.is_empty() {
        return Err(CliError::input("every item was dropped; nothing to compare"));
    }

    let mut pairs: Vec<(&RatingTable, &RatingTable)> = Vec::new();
    for (i, a) in humans.iter().enumerate() {
        for b in &humans[i + 1..] {
            pairs.push((a, b));
        }
    }
    if let Some(m) = &machine {
        pairs.extend(humans.iter().map(|h| (m, h)));
    }
    let comparisons = pairs
        .into_iter()
        .map(|(a, b)| {
            Ok(Comparison {
                label: format!("{} vs. {}", a.rater_id, b.rater_id),
                report: compare_tables(a, b, &items)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let table = write_reports(&out_dir, &items, &dropped, &comparisons)?;
    print!("{table}");
    Ok(())
}
