mod error;
mod evaluate;
mod ingest;
mod report;
mod score;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use cib_core::concept::{parse_concept_list, Concept};
use cib_core::RunConfig;
use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

/// Scores videos on seven behavior concepts from per-frame vision features
/// and measures agreement with human ratings.
#[derive(Debug, Parser)]
#[command(name = "cibscore", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, env = "CIBSCORE_CONFIG")]
    config: Option<PathBuf>,

    /// Log more (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate upstream exports and write a canonical bundle directory.
    Ingest(ingest::IngestArgs),
    /// Score bundles into a concept-score CSV.
    Score(score::ScoreArgs),
    /// Compare rating tables and write agreement reports.
    Evaluate(evaluate::EvaluateArgs),
    /// Run the embedded oracle checks.
    Selftest(selftest::SelftestArgs),
    /// Print the effective configuration as TOML.
    ShowConfig(Overrides),
}

/// Flags that override configuration values.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Seed for randomized steps.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Percentage-to-rating map (linear, bins).
    #[arg(long)]
    pub scale_map: Option<String>,
    /// Comma-separated items to compare.
    #[arg(long, value_parser = parse_items)]
    pub items: Option<ItemList>,
    /// Restrict activity to the youth's detected region.
    #[arg(long)]
    pub youth_region: bool,
    /// Youth-region policy (largest-mean-area, index).
    #[arg(long)]
    pub youth_region_policy: Option<String>,
    /// Cluster position for the `index` policy.
    #[arg(long)]
    pub youth_region_index: Option<usize>,
}

/// A comma-separated item list; wrapped so clap treats it as one value.
#[derive(Debug, Clone)]
pub struct ItemList(pub Vec<Concept>);

pub fn parse_items(s: &str) -> Result<ItemList, String> {
    parse_concept_list(s).map(ItemList).map_err(|e| e.to_string())
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            cfg.output_dir = Some(dir.clone());
        }
        if let Some(map) = &self.scale_map {
            cfg.scale_map = map.clone();
        }
        if let Some(items) = &self.items {
            cfg.items = items.0.clone();
        }
        if self.youth_region {
            cfg.youth_region = true;
        }
        if let Some(policy) = &self.youth_region_policy {
            cfg.youth_region_policy = policy.clone();
        }
        if let Some(index) = self.youth_region_index {
            cfg.youth_region_index = index;
        }
    }
}

/// Loads the config file (if any), applies flag overrides and validates.
pub fn effective_config(path: Option<&PathBuf>, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_ref();
    match cli.command {
        Command::Ingest(args) => ingest::run(&args),
        Command::Score(args) => score::run(config, &args),
        Command::Evaluate(args) => evaluate::run(config, &args),
        Command::Selftest(args) => selftest::run(&args),
        Command::ShowConfig(overrides) => {
            print!("{}", effective_config(config, &overrides)?.to_toml_string());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    match run(cli) {
        Ok(()) => ExitCode::from(error::exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
