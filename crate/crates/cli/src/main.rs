mod commands;
mod config;
mod manifest;
mod report;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "netresponse",
    version,
    about = "Multiscale solver for optimal infection response on weighted networks",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random instances (graph + attribute file pairs)
    Generate(commands::generate::GenerateArgs),
    /// Simulate an outbreak and write the resulting attribute file
    Simulate(commands::simulate::SimulateArgs),
    /// Run the multiscale solver on an instance
    Solve(commands::solve::SolveArgs),
    /// Run the iterated-local-search baseline on an instance
    Baseline(commands::baseline::BaselineArgs),
    /// Compare the multiscale solver against a reference on an instance set
    Compare(commands::compare::CompareArgs),
    /// Dump coarsening-hierarchy diagnostics as CSV
    Hierarchy(commands::hierarchy::HierarchyArgs),
}

/// How a completed command ended.
pub enum Outcome {
    Done,
    /// Work finished but a time budget truncated solve quality.
    BudgetExhausted,
}

fn main() {
    let cli = Cli::parse();
    init_thread_pool();
    let result = match cli.command {
        Command::Generate(args) => commands::generate::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Solve(args) => commands::solve::run(args),
        Command::Baseline(args) => commands::baseline::run(args),
        Command::Compare(args) => commands::compare::run(args),
        Command::Hierarchy(args) => commands::hierarchy::run(args),
    };
    match result {
        Ok(Outcome::Done) => {}
        Ok(Outcome::BudgetExhausted) => {
            eprintln!("warning: time budget exhausted; outputs reflect the best solution found");
            std::process::exit(4);
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(exit_code_for(&err));
        }
    }
}

/// Thread count comes from the environment; everything else is flags/config.
fn init_thread_pool() {
    if let Ok(value) = std::env::var("NETRESPONSE_THREADS") {
        match value.parse::<usize>() {
            Ok(threads) if threads >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring invalid NETRESPONSE_THREADS={value}"),
        }
    }
}

/// 2 = usage (clap), 3 = input/output, 4 = budget, 1 = everything else.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<netresponse::Error>() {
            if matches!(e, netresponse::Error::Io { .. } | netresponse::Error::Parse { .. }) {
                return 3;
            }
        }
    }
    1
}
