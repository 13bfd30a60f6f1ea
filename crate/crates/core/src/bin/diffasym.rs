use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diffasym::config::{ConfigError, ExperimentConfig};
use diffasym::experiment::{run, sweep, RunStatus, SweepParam};
use diffasym::metrics::{complexity_table, render_complexity_csv, render_complexity_table};
use diffasym::plot::render_svg_file;
use diffasym::report::bounds_report;
use diffasym::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "diffasym", version, about = "Asymmetric-cost diffusion adaptive filter simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML).
    config: PathBuf,
    /// Overrides `run.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::Args)]
struct Output {
    /// Directory for generated files.
    #[arg(long, env = "DIFFASYM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// File name stem; the config's stem by default.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured algorithm and write CSV, manifest and plot.
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        output: Output,
        /// Skip the SVG plot.
        #[arg(long)]
        no_plot: bool,
    },
    /// Repeat a run over values of `a`, `b` or `mu`.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_parser = ["a", "b", "mu"])]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        values: Vec<f64>,
    },
    /// Print mean-stability step-size limits for the configured algorithms.
    Bounds {
        #[command(flatten)]
        common: Common,
    },
    /// Write the topology of the first trial as an edge list.
    Topology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a result CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print per-iteration operation counts.
    Complexity {
        #[arg(long, default_value_t = 16)]
        taps: u64,
        #[arg(long, default_value_t = 20)]
        nodes: u64,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(c) => Failure::Config(c.to_string()),
            Error::InvalidParameter { .. } => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn load(common: &Common) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", common.config.display())))?;
    Ok(ExperimentConfig::parse(&text, common.seed)?)
}

fn stem(output: &Output, config: &Path) -> String {
    output.name.clone().unwrap_or_else(|| {
        config
            .file_stem()
            .map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned())
    })
}

fn print_written(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn execute(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Run {
            common,
            output,
            no_plot,
        } => {
            let config = load(&common)?;
            let out = run(&config)?;
            print_written(&out.write(&output.out_dir, &stem(&output, &common.config), !no_plot)?);
            for a in &out.manifest.algorithms {
                match a.steady_state_db {
                    Some(db) => println!(
                        "{:<10} steady-state {db:>9.3} dB  diverged {}/{}",
                        a.label,
                        a.diverged_trials,
                        config.run.monte_carlo
                    ),
                    None => println!("{:<10} diverged in every trial", a.label),
                }
            }
            Ok(if out.status() == RunStatus::Partial { EXIT_PARTIAL } else { 0 })
        }
        Command::Sweep {
            common,
            output,
            param,
            values,
        } => {
            let config = load(&common)?;
            let param: SweepParam = param.parse()?;
            let out = sweep(&config, param, &values)?;
            print_written(&out.write(&output.out_dir, &stem(&output, &common.config))?);
            for (label, value, db) in out.minimizers() {
                println!("{label}: lowest final MSD {db:.3} dB at {param} = {value}");
            }
            Ok(if out.any_partial() { EXIT_PARTIAL } else { 0 })
        }
        Command::Bounds { common } => {
            let config = load(&common)?;
            let report = bounds_report(&config.specs()?, &config.covariance_profile()?, &config.noise_model()?)?;
            print!("{}", report.render());
            Ok(0)
        }
        Command::Topology { common, out } => {
            let config = load(&common)?;
            let resolved = config.resolve()?;
            fs::write(&out, resolved.scenario.topology(0)?.to_edge_list())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Plot { csv, out } => {
            let svg = render_svg_file(&csv)?;
            fs::write(&out, svg)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Complexity { taps, nodes, csv } => {
            if taps == 0 || nodes == 0 {
                return Err(Failure::Config("taps and nodes must be at least 1".into()));
            }
            let rows = complexity_table(taps, nodes);
            print!("{}", render_complexity_table(&rows));
            if let Some(path) = csv {
                fs::write(&path, render_complexity_csv(&rows))?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
