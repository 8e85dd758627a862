use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hoplab_cli::report::{applicability_csv, hops_csv, scalability_csv};
use hoplab_cli::{
    load_all, parse_seeds, run_experiment, summarize_applicability, summarize_hop_stats, summarize_scalability,
    ExperimentConfig, OptimizerKind, ProblemSource,
};
use hoplab_core::wpflf::{generate_instance, serialize_instance, GeneratorConfig, Group};

#[derive(Parser)]
#[command(name = "hoplab", version, about = "Run optimizer campaigns and summarize their hop reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration for every seed.
    Run {
        /// Benchmark spec (`problem=lbp n=50 k=10 R=1`), generator spec
        /// (`problem=wpflf preset=mini-c seed=3`) or instance file path.
        #[arg(long)]
        problem: String,
        /// ltgomea-sll, ltgomea-dled, ils-sll or fihc-restart.
        #[arg(long)]
        optimizer: OptimizerKind,
        #[arg(long)]
        ffe: Option<u64>,
        /// Wall-clock limit per run in seconds.
        #[arg(long)]
        time: Option<f64>,
        /// Inclusive range `a..b`, single seeds, or a comma-separated mix.
        #[arg(long)]
        seeds: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate finished runs into a CSV table.
    Report {
        kind: ReportKind,
        /// Run output directory or a single config directory.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a generated WP_LFL instance file.
    GenInstance {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arcs: usize,
        #[arg(long)]
        demands: usize,
        #[arg(long)]
        routes: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportKind {
    Scalability,
    Applicability,
    Hops,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            problem,
            optimizer,
            ffe,
            time,
            seeds,
            out,
        } => {
            let time = match time {
                Some(t) if !(t.is_finite() && t > 0.0) => bail!("--time must be a positive number of seconds"),
                t => t.map(Duration::from_secs_f64),
            };
            let cfg = ExperimentConfig::new(ProblemSource::parse(&problem)?, optimizer, ffe, time, parse_seeds(&seeds)?, out)?;
            let records = run_experiment(&cfg)?;
            let solved = records.iter().filter(|r| r.ffe_to_optimum.is_some()).count();
            let dir = cfg.config_dir(&cfg.resolve()?);
            println!("{} runs ({solved} reached the optimum) in {}", records.len(), dir.display());
        }
        Command::Report { kind, input, out } => {
            let groups = load_all(&input)?;
            let csv = match kind {
                ReportKind::Scalability => scalability_csv(&summarize_scalability(&groups)),
                ReportKind::Applicability => applicability_csv(&summarize_applicability(&groups)),
                ReportKind::Hops => hops_csv(&summarize_hop_stats(&groups)?),
            };
            std::fs::write(&out, csv).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::GenInstance {
            group,
            nodes,
            arcs,
            demands,
            routes,
            seed,
            out,
        } => {
            let inst = generate_instance(&GeneratorConfig::new(group, nodes, arcs, demands, routes, seed))?;
            std::fs::write(&out, serialize_instance(&inst)).with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(())
}
