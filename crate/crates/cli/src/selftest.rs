use std::time::Instant;

use cib_core::selftest::{run_selftest, SelftestOptions};
use cib_core::vocalization::VocalizationWeights;
use clap::Args;

use crate::error::CliError;

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fewer random cases per check.
    #[arg(long)]
    quick: bool,
    /// Substitute vocalization bucket weights `LOW,MEDIUM,HIGH`; anything
    /// other than the defaults should make the vocalization check fail.
    #[arg(long, value_parser = parse_weights, value_name = "LOW,MEDIUM,HIGH")]
    vocalization_weights: Option<VocalizationWeights>,
}

fn parse_weights(s: &str) -> Result<VocalizationWeights, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [low, medium, high] => Ok(VocalizationWeights { low, medium, high }),
        _ => Err(format!("expected three comma-separated weights, got {}", parts.len())),
    }
}

pub fn run(args: &SelftestArgs) -> Result<(), CliError> {
    let mut opts = SelftestOptions {
        seed: args.seed,
        ..Default::default()
    };
    if args.quick {
        opts.formula_cases = 100;
        opts.agreement_cases = 20;
        opts.gaze_cases = 20;
        opts.heatmap_shuffles = 5;
        opts.kmeans_exhaustive_cases = 10;
        opts.kmeans_descent_cases = 20;
    }
    if let Some(w) = args.vocalization_weights {
        opts.vocalization_weights = w;
    }

    let start = Instant::now();
    let outcomes = run_selftest(&opts);
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    for c in &outcomes {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    log::info!("selftest took {:.2?}", start.elapsed());
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        return Err(CliError::internal(format!("{failed} selftest check(s) failed")));
    }
    Ok(())
}
