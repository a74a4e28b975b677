use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use widematch::scenario::SCHEMA_HELP;
use widematch::{plot, Job, Overrides};
use widematch_core::pipeline::Analysis;

/// Rate-optimal wideband matching for small-antenna transmitters.
#[derive(Debug, Parser)]
#[command(version, after_long_help = SCHEMA_HELP)]
struct Cli {
    /// In-band grid size (default 2001, or the scenario's run.grid_points).
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Relative constraint tolerance (default 1e-6).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Bundle directory (default: the scenario's output.dir, else out/<name>).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seed for the ladder restarts (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive the Bode-Fano constraints and write constraints.csv.
    Constraints { scenario: PathBuf },
    /// Run every requested strategy and write the full bundle.
    Optimize { scenario: PathBuf },
    /// Solve for the optimum and fit an LC ladder to it.
    FitLadder {
        scenario: PathBuf,
        /// Number of L-C stages (default: the scenario's run.ladder_order).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Achievable rate versus bandwidth; writes sweep.csv.
    Sweep { scenario: PathBuf },
    /// Render SVG plots for the tables in a bundle directory.
    Plots { bundle_dir: PathBuf },
}

fn print_rates(a: &Analysis) {
    for (s, r) in &a.rates {
        println!("{:>16}  {:.6e} bit/s", s.name(), r);
    }
    if let Some(l) = &a.ladder {
        println!("ladder order {} rate ratio {:.4}", l.network.order(), l.report.rate_ratio);
    }
}

fn run(cli: Cli) -> widematch::Result<()> {
    let mut ov = Overrides {
        grid_points: cli.grid_points,
        tol: cli.tol,
        out_dir: cli.out_dir,
        seed: cli.seed,
        ladder_order: None,
    };
    match cli.command {
        Command::Constraints { scenario } => {
            let job = Job::load(&scenario, &ov)?;
            for (i, c) in job.constraints()?.iter().enumerate() {
                println!("{i}  {:<22} bound {:.6e}", c.kind.label(), c.bound);
            }
            println!("wrote {}", job.out_dir.display());
        }
        Command::Optimize { scenario } => {
            let job = Job::load(&scenario, &ov)?;
            print_rates(&job.optimize()?);
            println!("wrote {}", job.out_dir.display());
        }
        Command::FitLadder { scenario, order } => {
            ov.ladder_order = order;
            let job = Job::load(&scenario, &ov)?;
            print_rates(&job.fit_ladder()?);
            println!("wrote {}", job.out_dir.display());
        }
        Command::Sweep { scenario } => {
            let job = Job::load(&scenario, &ov)?;
            for r in job.sweep()? {
                println!("{:.3e} Hz {:>16}  {:.6e} bit/s", r.bandwidth_hz, r.strategy.name(), r.rate_bps);
            }
            println!("wrote {}", job.out_dir.display());
        }
        Command::Plots { bundle_dir } => {
            for p in plot::emit_plots(&bundle_dir)? {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
