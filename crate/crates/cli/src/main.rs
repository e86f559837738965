use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fillbound::filling::CycleBudget;
use fillbound_cli::commands::{self, BfrtArgs, FillArgs, Hf1Args};
use fillbound_cli::formats::write_atomic;
use fillbound_cli::generators::Shape;
use fillbound_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "fillbound", version, about = "Certified fillings of integer 1-cycles")]
struct Cli {
    /// Relative tolerance for geometric comparisons
    #[arg(long, global = true, default_value_t = fillbound::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeName {
    Octahedron,
    Icosphere,
    TetraBoundary,
    Prism,
    Disk,
    Capsule,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated space file
    Gen {
        #[arg(long, value_enum)]
        shape: ShapeName,
        /// Subdivision level (icosphere)
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Vertices per ring (prism, disk, capsule)
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Number of rings along the axis (prism, capsule)
        #[arg(long, default_value_t = 2)]
        levels: usize,
        /// Concentric rings (disk)
        #[arg(long, default_value_t = 3)]
        rings: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fill a 1-cycle through the cover pipeline
    Fill {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        /// Cover radius
        #[arg(long)]
        radius: f64,
        /// Report destination (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the filling 2-chain
        #[arg(long)]
        chain_out: Option<PathBuf>,
        /// Include per-stage wall-clock seconds in the report
        #[arg(long)]
        timing: bool,
    },
    /// Estimate the filling-function profile
    Hf1 {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        l_max: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long, default_value_t = CycleBudget::default().max_edges)]
        max_edges: usize,
        #[arg(long, default_value_t = CycleBudget::default().max_cycles)]
        max_cycles: usize,
        /// Give every edge length 1 and every face area 1
        #[arg(long)]
        unit_weights: bool,
        /// JSON profile destination (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV columns l, hf_estimate, fit
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the small-solution bound on random solvable systems
    BfrtCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        m_max: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        ma_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn shape(name: ShapeName, level: u32, n: usize, levels: usize, rings: usize) -> Shape {
    match name {
        ShapeName::Octahedron => Shape::Octahedron,
        ShapeName::Icosphere => Shape::Icosphere { level },
        ShapeName::TetraBoundary => Shape::TetraBoundary,
        ShapeName::Prism => Shape::Prism { n, levels },
        ShapeName::Disk => Shape::Disk { n, rings },
        ShapeName::Capsule => Shape::Capsule { n, levels },
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    fillbound::set_tolerance(cli.tolerance)?;
    let pool = commands::thread_pool()?;
    pool.install(|| match cli.command {
        Command::Gen { shape: name, level, n, levels, rings, scale, out } => {
            let text = commands::gen(shape(name, level, n, levels, rings), scale)?;
            emit(out.as_ref(), &text)?;
            Ok(0)
        }
        Command::Fill { space, cycle, radius, out, chain_out, timing } => {
            let (text, code) = commands::fill(&FillArgs { space, cycle, radius, chain_out, timing });
            emit(out.as_ref(), &text)?;
            Ok(code)
        }
        Command::Hf1 { space, l_max, steps, max_edges, max_cycles, unit_weights, out, csv } => {
            let report = commands::hf1(&Hf1Args {
                space,
                l_max,
                steps,
                budget: CycleBudget { max_edges, max_cycles },
                unit_weights,
            })?;
            if let Some(p) = &csv {
                write_atomic(p, &report.csv())?;
            }
            emit(out.as_ref(), &commands::to_pretty(&report))?;
            Ok(0)
        }
        Command::BfrtCheck { trials, m_max, n_max, ma_max, seed, out } => {
            let summary = commands::bfrt_check(BfrtArgs { trials, m_max, n_max, ma_max, seed })?;
            emit(out.as_ref(), &commands::to_pretty(&summary))?;
            Ok(if summary.violations == 0 { 0 } else { 1 })
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fillbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
