use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use les::commands::benchmark::BenchmarkArgs;
use les::commands::evolve::EvolveArgs;
use les::commands::fit_beta::FitBetaArgs;
use les::commands::inspect::InspectArgs;
use les::commands::train::TrainArgs;
use les::commands::{benchmark, evolve, fit_beta, inspect, train, Globals};
use les::ConfigError;

#[derive(Parser, Debug)]
#[command(name = "les", version, about = "Learned and discovered evolution strategies")]
struct Cli {
    /// Training configuration (TOML); used by meta-train and selfref-train.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meta-train learned-strategy parameters with the configured outer optimizer.
    MetaTrain(TrainArgs),
    /// Meta-train with a learned strategy that optimizes its own parameters.
    SelfrefTrain(TrainArgs),
    /// Run one strategy on one task and write per-generation fitness.
    Evolve(EvolveArgs),
    /// Run a grid of strategies and tasks and write final fitness per run.
    Benchmark(BenchmarkArgs),
    /// Trace the recombination weights and learning rates of a learned strategy.
    Inspect(InspectArgs),
    /// Fit the discovered strategy's temperature to an inspect trace.
    FitBeta(FitBetaArgs),
}

fn run(cli: Cli, seed_given: bool) -> anyhow::Result<()> {
    let g = Globals { config: cli.config, seed: cli.seed, out: cli.out, threads: cli.threads };
    let train_cmd = matches!(cli.command, Command::MetaTrain(_) | Command::SelfrefTrain(_));
    if g.config.is_some() && !train_cmd {
        anyhow::bail!("--config is only used by meta-train and selfref-train");
    }
    match &cli.command {
        Command::MetaTrain(a) | Command::SelfrefTrain(a) => {
            let selfref = matches!(cli.command, Command::SelfrefTrain(_));
            let cfg = train::load_config(&g, seed_given)?;
            let out = train::run(cfg, a, &g, selfref, |r| {
                eprintln!(
                    "gen {:>5}  best {:+.4}  median {:+.4}  ref_gap {:+.4}{}",
                    r.generation,
                    r.best,
                    r.median,
                    r.ref_gap_best,
                    if r.replaced { "  replaced" } else { "" }
                );
            })?;
            println!("{} generations; checkpoints in {}", out.trainer.generation, g.out.display());
        }
        Command::Evolve(a) => {
            let stats = evolve::run(a, &g)?;
            if let Some(last) = stats.last() {
                println!("final best {}", last.best_so_far);
            }
        }
        Command::Benchmark(a) => {
            let rows = benchmark::run(a, &g)?;
            println!("{} runs written to {}", rows.len(), g.out.join(benchmark::FILE).display());
        }
        Command::Inspect(a) => {
            let rows = inspect::run(a, &g)?;
            println!("{} generations written to {}", rows.len(), g.out.join(inspect::FILE).display());
        }
        Command::FitBeta(a) => {
            let r = fit_beta::run(a, &g)?;
            println!("beta={} residual={}", r.beta, r.residual);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let seed_given = matches!(
        matches.value_source("seed"),
        Some(clap::parser::ValueSource::CommandLine)
    );
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli, seed_given) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
