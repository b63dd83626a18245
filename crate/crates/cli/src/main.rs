use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use blockvqe_cli::results::{format_float, write_rows};
use blockvqe_cli::{run_sweep, verify, RunConfig, RunOptions};
use clap::{Parser, Subcommand};

/// Block VQE sweeps of the Hubbard ring.
#[derive(Debug, Parser)]
#[command(name = "blockvqe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for results files.
    #[arg(long, global = true, default_value = ".")]
    output: PathBuf,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the U sweep and write `<stem>.csv`.
    Run {
        config: PathBuf,
        /// Write wall_time = 0 so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
        /// Also write `<stem>.log.json` with optimizer traces.
        #[arg(long)]
        log: bool,
    },
    /// Run the invariant checks for a config.
    Verify { config: PathBuf },
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "results".into(), |s| s.to_string_lossy().into_owned())
}

fn run(cli: &Cli, config: &Path, no_timing: bool, log: bool) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let out = run_sweep(
        &cfg,
        RunOptions {
            seed: cli.seed,
            no_timing,
        },
    )?;
    fs::create_dir_all(&cli.output).with_context(|| format!("creating {}", cli.output.display()))?;
    let csv_path = cli.output.join(format!("{}.csv", stem(config)));
    let file = fs::File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    write_rows(io::BufWriter::new(file), &out.rows)?;
    if log {
        let log_path = cli.output.join(format!("{}.log.json", stem(config)));
        let file = fs::File::create(&log_path).with_context(|| format!("creating {}", log_path.display()))?;
        serde_json::to_writer(io::BufWriter::new(file), &out.points)?;
    }

    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{:>6} {:>17} {:>17} {:>17} {:>10}", "U", "E_vqe", "E_exact", "E_meanfield", "converged")?;
    for r in &out.rows {
        writeln!(
            stdout,
            "{:>6} {:>17} {:>17} {:>17} {:>10}",
            r.u,
            format_float(r.e_vqe),
            format_float(r.e_exact),
            format_float(r.e_meanfield),
            r.converged
        )?;
    }
    writeln!(stdout, "wrote {}", csv_path.display())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Run { config, no_timing, log } => run(&cli, config, *no_timing, *log).map(|()| true),
        Command::Verify { config } => RunConfig::load(config).and_then(|cfg| verify(&cfg)).map(|checks| {
            for c in &checks {
                println!("{c}");
            }
            checks.iter().all(|c| c.passed)
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
