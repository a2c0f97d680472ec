//! loewner-lab: sample lattice interfaces, convert curves to and from
//! Loewner driving functions, and run the crossing-condition experiments.
//!
//! Every verb is deterministic in (config, base seed): reruns and
//! different worker counts produce byte-identical artifacts. Output
//! schemas are documented in docs/formats.md.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "loewner-lab", version, about)]
struct Cli {
    /// JSON config file; explicit flags override config fields.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Worker pool size (or LOEWNER_LAB_WORKERS; default 1).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Sample an ensemble of interfaces to NDJSON.
    Sample(commands::SampleArgs),
    /// Solve the Loewner ODE: driving CSV -> trace curve NDJSON.
    Trace(commands::TraceArgs),
    /// Zipper: curve NDJSON -> driving CSV.
    ExtractDriving(commands::ExtractArgs),
    /// Run the unforced-crossing condition harness; exit 2 on FAIL.
    CheckCondition(commands::CheckArgs),
    /// Half-plane capacity of a shape or sampled curves.
    Capacity(commands::CapacityArgs),
    /// Six-arm event frequency over an ensemble.
    SixArm(commands::SixArmArgs),
    /// Kappa estimation from extracted or synthetic drivings.
    Kappa(commands::KappaArgs),
    /// Coupled-noise continuity experiment in kappa.
    Continuity(commands::ContinuityArgs),
    /// Count-additive merge of report CSV shards.
    MergeReports(commands::MergeArgs),
    /// Write a domain spec JSON file.
    GenDomain(commands::GenDomainArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = loewner_lab::runner::worker_count(cli.workers);
    let out = match &cli.verb {
        Verb::Sample(a) => commands::sample(a, cli.config.as_deref(), workers),
        Verb::Trace(a) => commands::trace(a, cli.config.as_deref()),
        Verb::ExtractDriving(a) => commands::extract(a, cli.config.as_deref()),
        Verb::CheckCondition(a) => commands::check_condition(a, cli.config.as_deref(), workers),
        Verb::Capacity(a) => commands::capacity(a, cli.config.as_deref()),
        Verb::SixArm(a) => commands::six_arm(a, cli.config.as_deref(), workers),
        Verb::Kappa(a) => commands::kappa(a, cli.config.as_deref(), workers),
        Verb::Continuity(a) => commands::continuity(a, cli.config.as_deref()),
        Verb::MergeReports(a) => commands::merge_reports(a, cli.config.as_deref()),
        Verb::GenDomain(a) => commands::gen_domain(a, cli.config.as_deref()),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
