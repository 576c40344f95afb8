use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cavitywalk::commands::{analysis_report, analyze_events, simulate_ideal, simulate_physical};
use cavitywalk::config::RunConfig;
use cavitywalk::detector::{read_events, write_events};
use cavitywalk::error::{Error, Result};
use cavitywalk::report::{compare_reports, Report};

#[derive(Parser)]
#[command(version, about = "Time-bin quantum walks in coupled fiber cavities")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    steps: Option<u32>,
    /// Output file (standard output when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the simulation
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write ideal per-step distributions
    SimulateIdeal {
        /// Distributions seen by a tap on the output cavity
        #[arg(long)]
        output_tap: bool,
    },
    /// Simulate the apparatus and write a detection-event file
    SimulatePhysical,
    /// Turn an event file into a report
    Analyze { events: PathBuf },
    /// Per-step fidelity between two reports
    Compare { a: PathBuf, b: PathBuf },
}

fn load_config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.run.seed = s;
    }
    if let Some(t) = c.trials {
        cfg.run.trials = t;
    }
    if let Some(n) = c.steps {
        cfg.run.steps = n;
    }
    if let Some(t) = c.threads {
        cfg.run.threads = Some(t);
    }
    if let Some(o) = &c.out {
        cfg.run.out = Some(o.display().to_string());
    }
    Ok(cfg)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io {
        context: format!("opening {}", path.display()),
        source: e,
    })
}

fn emit(cfg: &RunConfig, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cfg.run.out {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| Error::Io {
                context: format!("creating {p}"),
                source: e,
            })?;
            write(&mut f)
        }
        None => write(&mut std::io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.common)?;
    match cli.command {
        Command::SimulateIdeal { output_tap } => {
            let report = simulate_ideal(&cfg, output_tap)?;
            emit(&cfg, |w| report.write(w))
        }
        Command::SimulatePhysical => {
            let run = simulate_physical(&cfg)?;
            eprintln!(
                "events: {} total, {} in step {}",
                run.events.len(),
                run.final_step_events(cfg.run.window_halfwidth_ps),
                cfg.run.steps
            );
            emit(&cfg, |w| write_events(&run.events, w))
        }
        Command::Analyze { events } => {
            let stream = read_events(open(&events)?)?;
            let analysis = analyze_events(&stream, &cfg)?;
            if let Some((n, f)) = analysis.fidelity.min() {
                eprintln!("minimum fidelity {f:.5} at step {n}");
            }
            let report = analysis_report(&analysis, &cfg);
            emit(&cfg, |w| report.write(w))
        }
        Command::Compare { a, b } => {
            let a = Report::read(open(&a)?)?;
            let b = Report::read(open(&b)?)?;
            let series = compare_reports(&a, &b)?;
            emit(&cfg, |w| {
                let ctx = |e| Error::Io {
                    context: "writing comparison".into(),
                    source: e,
                };
                writeln!(w, "#fidelity N F").map_err(ctx)?;
                for (n, f) in &series.entries {
                    writeln!(w, "{n} {f}").map_err(ctx)?;
                }
                Ok(())
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
