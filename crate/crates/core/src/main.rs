use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fdnoma::outage::{Node, Scheme};
use fdnoma::scenario::{emit_csv, emit_plot_data, evaluate_point, load_config, run_sweep, write_csv, SweepTable};
use fdnoma::Error;

/// Outage probability sweeps for FD-NOMA, HD-NOMA and HD-OMA UAV links.
#[derive(Debug, Parser)]
#[command(name = "fdnoma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep transmit power over every scheme and node in the config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Also write gnuplot-style blocks, one per (scheme, node).
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Run the Monte Carlo oracle alongside the closed form.
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Truncation order of the outage series.
        #[arg(long)]
        ktr: Option<u32>,
        /// Exit with status 2 if any row fails to converge.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate the closed form at one operating point and print a CSV row.
    Point {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        scheme: Scheme,
        #[arg(long)]
        node: Node,
        #[arg(long, allow_hyphen_values = true)]
        pt: f64,
    },
}

enum Failure {
    Input(Error),
    NotConverged(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            plot_data,
            mc,
            samples,
            seed,
            ktr,
            strict,
        } => {
            let mut scenario = load_config(&config)?;
            let spec = &mut scenario.sweep;
            spec.with_mc |= mc;
            if let Some(n) = samples {
                spec.mc.num_samples = n;
            }
            if let Some(s) = seed {
                spec.mc.seed = s;
            }
            if let Some(k) = ktr {
                scenario.system.k_tr = k;
                scenario.system.validate()?;
            }
            let table = run_sweep(&scenario.system, &scenario.sweep)?;
            for row in table.rows.iter().filter(|r| r.failed()) {
                eprintln!(
                    "warning: {} {} at {} dB: {}",
                    row.scheme,
                    row.node,
                    row.pt_db,
                    row.error.as_deref().unwrap_or_default()
                );
            }
            emit_csv(&table, &out)?;
            if let Some(path) = plot_data {
                emit_plot_data(&table, path)?;
            }
            let bad = table.rows.iter().filter(|r| r.failed() || !r.converged).count();
            if bad > 0 {
                eprintln!("warning: {bad} row(s) did not converge");
                if strict {
                    return Err(Failure::NotConverged(bad));
                }
            }
            Ok(())
        }
        Command::Point {
            config,
            scheme,
            node,
            pt,
        } => {
            let scenario = load_config(&config)?;
            let row = evaluate_point(&scenario.system, scheme, node, pt, None);
            if let Some(e) = &row.error {
                return Err(Error::InvalidParameter(e.clone()).into());
            }
            let table = SweepTable { rows: vec![row] };
            let mut buf = Vec::new();
            write_csv(&table, &mut buf)?;
            let text = String::from_utf8(buf).expect("CSV is UTF-8");
            print!("{}", text.lines().nth(1).map(|l| format!("{l}\n")).unwrap_or_default());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged(n)) => {
            eprintln!("error: --strict and {n} row(s) did not converge");
            ExitCode::from(2)
        }
    }
}
