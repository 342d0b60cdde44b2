use std::path::PathBuf;
use std::process::ExitCode;

use bbig_cli::commands::{cmd_centrality, cmd_gen_graph, cmd_sample_pop, cmd_validate};
use bbig_cli::config::{ConfigError, ExperimentConfig};
use bbig_cli::growth::cmd_growth;
use bbig_cli::{CliError, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use clap::{Parser, Subcommand};

/// Busy Beaver Imitation Game experiments.
#[derive(Parser)]
#[command(name = "bbig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the property suite.
    Validate,
    /// Emergent complexity across the population grid.
    Growth,
    /// Time centrality of the configured graph at every size.
    Centrality,
    /// Write the configured graphs.
    GenGraph,
    /// Write sampled populations with their cycle-1 outputs.
    SamplePop,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(command: &Command, cfg: &ExperimentConfig) -> Result<u8, CliError> {
    match command {
        Command::Validate => {
            let outcomes = cmd_validate(cfg)?;
            for o in &outcomes {
                let status = if o.passed() { "pass" } else { "FAIL" };
                println!("{status:4}  {:24} {:>7} cases  {}", o.property, o.cases, o.detail);
            }
            Ok(if outcomes.iter().all(|o| o.passed()) { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Growth => {
            let report = cmd_growth(cfg)?;
            for s in &report.summaries {
                println!(
                    "N = {:5}  EEAC median {:9.4}  leading median {:9.4}  A_max median {}",
                    s.n, s.eeac_median, s.leading_median, s.amax_value_median
                );
            }
            if let Some(t) = &report.trend {
                print!("{}", t.render());
            }
            Ok(EXIT_OK)
        }
        Command::Centrality => {
            for [unlimited, maximum] in cmd_centrality(cfg)? {
                let show = |t: Option<usize>| t.map_or_else(|| "none".to_string(), |t| t.to_string());
                println!(
                    "N = {:5}  t_cen unlimited {}  maximum {}",
                    unlimited.n,
                    show(unlimited.t_cen),
                    show(maximum.t_cen)
                );
            }
            Ok(EXIT_OK)
        }
        Command::GenGraph => cmd_gen_graph(cfg).map(|()| EXIT_OK),
        Command::SamplePop => cmd_sample_pop(cfg).map(|()| EXIT_OK),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
