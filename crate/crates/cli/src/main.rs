use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bandit_lab::config::parse_config;
use bandit_lab::results::{
    aggregate_rows, read_results_csv, write_aggregate_csv, write_results_csv, ResultsError,
};
use bandit_lab::sim::{aggregate, run_experiment, run_experiment_with_workers, Metric};
use bandit_lab::validate::run_sampler_battery;
use bandit_lab::MasterSeed;

#[derive(Debug, Parser)]
#[command(
    name = "bandit-lab",
    version,
    about = "Simulate ad-selection bandit policies and measure their regret"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment config and write per-checkpoint results as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to one per CPU.
        #[arg(long, env = "BANDIT_LAB_WORKERS")]
        workers: Option<usize>,
    },
    /// Summarize a results CSV into plot-ready mean/sd/stderr/ci95 rows.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_metric, default_value = "avg_per_offer")]
        metric: Metric,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the sampler moment and KS battery.
    ValidateSamplers {
        #[arg(long, default_value_t = 2015)]
        seed: u64,
    },
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse()
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, err: impl ToString) -> Self {
        Failure {
            code: 3,
            message: format!("{}: {}", path.display(), err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            out,
            workers,
        } => cmd_run(&config, &out, workers),
        Command::Aggregate { input, metric, out } => cmd_aggregate(&input, metric, &out),
        Command::ValidateSamplers { seed } => cmd_validate_samplers(seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_run(config_path: &Path, out_path: &Path, workers: Option<usize>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config_path).map_err(|e| Failure::io(config_path, e))?;
    let config = parse_config(&text).map_err(Failure::config)?;
    let results = match workers {
        Some(n) => run_experiment_with_workers(&config, n),
        None => run_experiment(&config),
    }
    .map_err(Failure::config)?;

    let file = File::create(out_path).map_err(|e| Failure::io(out_path, e))?;
    let mut w = BufWriter::new(file);
    write_results_csv(&results, &mut w).map_err(|e| Failure::io(out_path, e))?;
    w.flush().map_err(|e| Failure::io(out_path, e))?;

    let max_budget = *config.budgets.last().expect("validated non-empty");
    let rows = aggregate(&results, Metric::AvgPerOffer).map_err(Failure::config)?;
    for row in rows
        .iter()
        .filter(|r| r.budget == max_budget && r.step == max_budget)
    {
        let s = &row.summary;
        println!(
            "{}: avg regret per offer at B={} = {:.4} +/- {:.4} (n={})",
            row.policy,
            max_budget,
            s.mean,
            s.ci95.unwrap_or(0.0),
            s.n
        );
    }
    Ok(())
}

fn cmd_aggregate(input: &Path, metric: Metric, out_path: &Path) -> Result<(), Failure> {
    let file = File::open(input).map_err(|e| Failure::io(input, e))?;
    let rows = read_results_csv(BufReader::new(file)).map_err(|e| match e {
        ResultsError::Io(io) => Failure::io(input, io),
        other => Failure::config(format!("{}: {other}", input.display())),
    })?;
    let curve = aggregate_rows(&rows, metric).map_err(Failure::config)?;

    let file = File::create(out_path).map_err(|e| Failure::io(out_path, e))?;
    let mut w = BufWriter::new(file);
    write_aggregate_csv(&curve, &mut w).map_err(|e| Failure::io(out_path, e))?;
    w.flush().map_err(|e| Failure::io(out_path, e))
}

fn cmd_validate_samplers(seed: u64) -> Result<(), Failure> {
    let checks = run_sampler_battery(MasterSeed(seed));
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("{failed} of {} sampler checks failed", checks.len()),
        })
    }
}
