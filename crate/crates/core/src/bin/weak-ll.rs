use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use weak_ll::experiment;

#[derive(Parser)]
#[command(version, about = "Weak convergence experiments for local linearization schemes")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (overrides WEAK_LL_OUT and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weak error study over the plan's step sizes for every scheme.
    RunConvergence { config: PathBuf },
    /// One sample path of the first scheme.
    RunTrajectory {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Scheme variants and their preconditions.
    ListSchemes,
}

fn run(cli: Cli) -> weak_ll::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| weak_ll::Error::Config(e.to_string()))?;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::RunConvergence { config } => {
            let (reports, files) = experiment::run_convergence(&config, out)?;
            for r in &reports {
                for row in r.summary_rows() {
                    println!("{row}");
                }
            }
            for f in files {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::RunTrajectory { config, seed, h } => {
            for f in experiment::run_trajectory(&config, seed, h, out)? {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::ListSchemes => print!("{}", experiment::list_schemes()),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
