//! Command-line front end: scenario-driven simulation, planner comparison,
//! closed-form tables, grid reports, trace export, and the window sweep.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use searchsim::config::ScenarioConfig;
use searchsim::planner::PlannerKind;
use searchsim::report;
use searchsim::sim;
use searchsim::Result;

#[derive(Parser)]
#[command(
    name = "searchsim",
    version,
    about = "Probabilistic grid-search simulator for aerial target search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario's planner over Monte Carlo trials.
    Simulate {
        /// Scenario TOML file.
        scenario: PathBuf,
        /// Override the scenario's planner (zigzag | naive | windowing).
        #[arg(long)]
        planner: Option<String>,
        /// Override the windowing planner's window side length.
        #[arg(long)]
        window: Option<usize>,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Emit CSV instead of a text table.
        #[arg(long)]
        csv: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several planners on identical trial seeds and tabulate them.
    Compare {
        scenario: PathBuf,
        /// Comma-separated planners; the first is the ratio baseline.
        #[arg(long, value_delimiter = ',', default_value = "zigzag,naive,windowing")]
        planners: Vec<String>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form detection-time figures for the scenario's simplified
    /// (probability-ordered) analog.
    Analytic {
        scenario: PathBuf,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the area decomposition (text), the waypoint list (--csv), or
    /// the initial probability map (--map, as row,col,p CSV).
    Decompose {
        scenario: PathBuf,
        #[arg(long)]
        csv: bool,
        #[arg(long, conflicts_with = "csv")]
        map: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk the planner under forced non-detections and export the visited
    /// cells as t,row,col CSV.
    EmitPath {
        scenario: PathBuf,
        /// Steps to walk; defaults to the cell count.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        planner: Option<String>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep window sizes (and optionally grid layouts) against the zigzag
    /// baseline.
    Sweep {
        scenario: PathBuf,
        /// Comma-separated window side lengths, e.g. 2,3,4.
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<usize>,
        /// Comma-separated grid layouts as ROWSxCOLS, e.g. 8x8,10x16.
        #[arg(long, value_delimiter = ',')]
        grids: Vec<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            scenario,
            planner,
            window,
            trials,
            seed,
            csv,
            out,
        } => {
            let cfg = load(&scenario, planner.as_deref(), window, trials, seed)?;
            let scenario = cfg.build()?;
            let stats = vec![sim::run_monte_carlo(&scenario)];
            let text = if csv {
                report::stats_csv(&stats)
            } else {
                report::stats_table(&stats)
            };
            emit(out.as_deref(), &text)
        }
        Command::Compare {
            scenario,
            planners,
            window,
            trials,
            seed,
            csv,
            out,
        } => {
            let cfg = load(&scenario, None, window, trials, seed)?;
            let kinds = planners
                .iter()
                .map(|p| p.parse::<PlannerKind>())
                .collect::<Result<Vec<_>>>()?;
            let stats = sim::compare_planners(&cfg.build()?, &kinds)?;
            let text = if csv {
                report::stats_csv(&stats)
            } else {
                report::stats_table(&stats)
            };
            emit(out.as_deref(), &text)
        }
        Command::Analytic { scenario, csv, out } => {
            let cfg = load(&scenario, None, None, None, None)?;
            let simplified = cfg.build()?.simplified()?;
            let text = if csv {
                report::analytic_csv(&simplified)
            } else {
                report::analytic_table(&simplified)
            };
            emit(out.as_deref(), &text)
        }
        Command::Decompose {
            scenario,
            csv,
            map,
            out,
        } => {
            let cfg = load(&scenario, None, None, None, None)?;
            let built = cfg.build()?;
            let text = if map {
                report::map_csv(&built.initial_map)
            } else if csv {
                report::waypoints_csv(&built.grid)
            } else {
                report::grid_table(&built.grid)
            };
            emit(out.as_deref(), &text)
        }
        Command::EmitPath {
            scenario,
            steps,
            planner,
            window,
            out,
        } => {
            let cfg = load(&scenario, planner.as_deref(), window, None, None)?;
            let built = cfg.build()?;
            let steps = steps.unwrap_or(built.grid.cell_count() as u64);
            let trace = sim::emit_trace(&built, steps)?;
            emit(out.as_deref(), &report::trace_csv(&built.grid, &trace))
        }
        Command::Sweep {
            scenario,
            windows,
            grids,
            trials,
            seed,
            csv,
            out,
        } => {
            let cfg = load(&scenario, None, None, trials, seed)?;
            let grids = grids
                .iter()
                .map(|g| parse_grid(g))
                .collect::<Result<Vec<_>>>()?;
            let rows = sim::sweep(&cfg, &windows, &grids)?;
            let text = if csv {
                report::sweep_csv(&rows)
            } else {
                report::sweep_table(&rows)
            };
            emit(out.as_deref(), &text)
        }
    }
}

/// Load a scenario file and layer the overrides: file < environment < CLI.
fn load(
    path: &Path,
    planner: Option<&str>,
    window: Option<usize>,
    trials: Option<u64>,
    seed: Option<u64>,
) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::load(path)?;
    cfg.apply_env_overrides()?;
    if let Some(p) = planner {
        cfg.set_planner(p.parse()?);
    }
    if let Some(w) = window {
        cfg.set_window(w);
    }
    if let Some(n) = trials {
        cfg.set_n_trials(n);
    }
    if let Some(s) = seed {
        cfg.set_base_seed(s);
    }
    Ok(cfg)
}

fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| {
            searchsim::Error::InvalidScenario(format!(
                "grid layout must be ROWSxCOLS, got '{text}'"
            ))
        })
    };
    match text.split_once('x') {
        Some((rows, cols)) => Ok((parse(rows.trim())?, parse(cols.trim())?)),
        None => Err(searchsim::Error::InvalidScenario(format!(
            "grid layout must be ROWSxCOLS, got '{text}'"
        ))),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
