use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mamqa::experiment::{objective_scatter, scatter_to_csv, DEFAULT_OMEGA_GRID, DEFAULT_SAMPLES};
use mamqa::results::{self, PlanRecord};
use mamqa::{
    classify_supported, compute_metrics, enumerate_pareto, generate_instance, run_campaign, AnnealSchedule, Error,
    Execution, ExperimentPlan, ProblemInstance, Topology,
};

#[derive(Parser)]
#[command(name = "mamqa", version, about = "Mid-anneal measurement sampling for multi-objective Ising problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a two-objective conflict instance.
    Gen {
        #[arg(long)]
        n: usize,
        /// `complete` or a comma-separated edge list such as `0-1,1-2`.
        #[arg(long, default_value = "complete")]
        topology: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Exhaustively enumerate the Pareto front and flag supported points.
    Enumerate {
        #[arg(long)]
        instance: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Run a weight × timing sampling campaign into a results directory.
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        /// `s,A,B` table; the linear schedule A = 1 − s, B = s when omitted.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Comma-separated measurement times; 0, 0.1, …, 1 when omitted.
        #[arg(long, value_delimiter = ',')]
        timings: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Recompute metrics from the timing files of a results directory.
    Metrics {
        /// Results directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print plot-ready CSV from a results directory.
    ExportPlot {
        /// Results directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        kind: PlotKind,
        /// Required for `objective-scatter`.
        #[arg(long)]
        timing: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    MetricsVsS,
    ObjectiveScatter,
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Argument(_) => 2,
        Error::Capacity { .. } => 3,
        Error::OutputExists(_) => 4,
        Error::MissingInput(_) => 5,
        _ => 1,
    }
}

fn write_output(path: Option<&Path>, force: bool, contents: &str) -> mamqa::Result<()> {
    match path {
        Some(p) => {
            if p.exists() && !force {
                return Err(Error::OutputExists(p.to_path_buf()));
            }
            fs::write(p, contents)?;
        }
        None => io::stdout().lock().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn load_instance(path: &Path) -> mamqa::Result<ProblemInstance> {
    if !path.is_file() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    ProblemInstance::from_json(io::BufReader::new(fs::File::open(path)?))
}

fn run(cli: Cli) -> mamqa::Result<()> {
    match cli.command {
        Command::Gen {
            n,
            topology,
            seed,
            out,
            force,
        } => {
            let inst = generate_instance(n, &Topology::parse(&topology)?, seed)?;
            write_output(out.as_deref(), force, &inst.to_json())
        }
        Command::Enumerate { instance, out, force } => {
            let inst = load_instance(&instance)?;
            let front = classify_supported(&enumerate_pareto(&inst)?)?;
            let mut buf = Vec::new();
            front.write_csv(inst.n(), &mut buf)?;
            write_output(out.as_deref(), force, &String::from_utf8_lossy(&buf))
        }
        Command::Sweep {
            instance,
            schedule,
            timings,
            grid,
            samples,
            seed,
            out,
            force,
        } => {
            if out.exists() && !force {
                return Err(Error::OutputExists(out));
            }
            let inst = load_instance(&instance)?;
            let (sched, source) = match &schedule {
                Some(path) => {
                    if !path.is_file() {
                        return Err(Error::MissingInput(path.clone()));
                    }
                    let s = AnnealSchedule::from_csv(fs::File::open(path)?)?;
                    (s, path.display().to_string())
                }
                None => (AnnealSchedule::linear(), "default".to_string()),
            };
            for w in sched.warnings() {
                eprintln!("warning: {w}");
            }
            let mut plan = ExperimentPlan::new(inst, sched)
                .with_grid(grid)
                .with_samples(samples)
                .with_seed(seed);
            if let Some(t) = timings {
                plan = plan.with_timings(t);
            }
            plan.validate()?;
            let campaign = run_campaign(&plan, Execution::Parallel)?;
            let record = PlanRecord::new(&plan, &instance.display().to_string(), &source);
            results::write_results_dir(&out, &record, &campaign, force)
        }
        Command::Metrics { out } => {
            let curve = compute_metrics(&results::read_timings(&out)?)?;
            write_output(None, false, &curve.to_csv())
        }
        Command::ExportPlot { out, kind, timing } => match kind {
            PlotKind::MetricsVsS => {
                let curve = results::read_metrics(&out)?;
                write_output(None, false, &curve.to_csv())
            }
            PlotKind::ObjectiveScatter => {
                let s = timing.ok_or_else(|| Error::Argument("objective-scatter needs --timing".into()))?;
                let set = results::read_timing(&out, s)?;
                let front = results::read_front(&out)?;
                write_output(None, false, &scatter_to_csv(&objective_scatter(&set, &front)))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
