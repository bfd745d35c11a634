use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use doorflow::commands::{cmd_analyze, cmd_simulate, cmd_sweep, events_path_for, load_config};
use doorflow::ingest::{ColumnRef, IngestSpec};
use doorflow::stats::Transform;
use doorflow::{Error, Individualism};

#[derive(Parser)]
#[command(name = "doorflow", version, about = "Door-bottleneck counterflow simulator and stylized-fact analyzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded simulation and write `time_s,rho,frac_a` plus an events CSV.
    Simulate {
        /// JSON config; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Events CSV (`time_s,agent_id,event`); defaults to `<out stem>.events.csv`.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Compute the stylized-fact report of one CSV column.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Column name, or zero-based index.
        #[arg(long)]
        column: String,
        /// Analyze the natural log of the column (prices).
        #[arg(long)]
        log: bool,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
        #[arg(long)]
        report: PathBuf,
    },
    /// Sweep the individualistic parameter T over several seeds.
    ///
    /// Summary columns, in order: T, seed, regime, episodes, saturated_share,
    /// rho_mean_in, rho_mean_out, hurst_abs_r, acf_abs_r_10, acf_abs_r_100,
    /// error. Seeds are seed-base + run index for every T.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated values; `inf` allowed.
        #[arg(long = "T", value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 3)]
        runs: usize,
        #[arg(long = "seed-base", default_value_t = 0)]
        seed_base: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            out,
            events,
        } => {
            let mut cfg = load_config(config.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let events = events.unwrap_or_else(|| events_path_for(&out));
            let run = cmd_simulate(&cfg, &out, &events)?;
            eprintln!(
                "wrote {} samples to {} and {} events to {}",
                run.len(),
                out.display(),
                run.events.len(),
                events.display()
            );
        }
        Command::Analyze {
            input,
            column,
            log,
            delimiter,
            report,
        } => {
            if !delimiter.is_ascii() {
                return Err(Error::OutOfRange(format!("delimiter `{delimiter}` is not ASCII")));
            }
            let column: ColumnRef = column.parse().unwrap_or_else(|e| match e {});
            let spec = IngestSpec {
                path: input,
                column,
                transform: if log { Transform::Log } else { Transform::Identity },
                delimiter: delimiter as u8,
            };
            let r = cmd_analyze(&spec, &report)?;
            for e in &r.errors {
                eprintln!("warning: {}: {}", e.statistic, e.message);
            }
            eprintln!("wrote report for `{}` ({} points) to {}", r.label, r.n_points, report.display());
        }
        Command::Sweep {
            config,
            values,
            runs,
            seed_base,
            out,
        } => {
            let cfg = load_config(config.as_deref())?;
            let values = values
                .iter()
                .map(|v| v.parse::<Individualism>())
                .collect::<Result<Vec<_>, _>>()?;
            let rows = cmd_sweep(&cfg, &values, runs, seed_base, &out)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            eprintln!("wrote {} rows to {} ({failed} failed runs)", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
