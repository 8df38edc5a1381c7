use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use toda_cli::config::{Mode, PipelineConfig};
use toda_cli::pipeline::run_pipeline;

/// Loop-group machinery for the A₂⁽²⁾ Toda surface classes: Tzitzéica
/// solvers, Lax-pair diagnostics, extended-frame integration, the two
/// loop-group construction pipelines, and the real-form classification.
#[derive(Parser)]
#[command(name = "toda", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON pipeline configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for summaries and meshes.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the loop truncation degree.
    #[arg(long)]
    trunc: Option<i32>,
    /// Scale every gate tolerance by this factor.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for the per-node splits (does not change results).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the geometry's Tzitzéica equation on the configured grid.
    Solve(RunArgs),
    /// Check twisting, reality and zero-curvature of the Lax pair built
    /// from solved data.
    LaxCheck(RunArgs),
    /// Solve, integrate the extended frame, extract and validate the
    /// surface.
    Integrate(RunArgs),
    /// Run the loop-group construction pipeline from a potential.
    Dpw(RunArgs),
    /// Search for canonical real-form involutions.
    Classify(RunArgs),
}

fn run(mode: Mode, args: &RunArgs) -> Result<bool, toda_cli::CliError> {
    let mut cfg = PipelineConfig::from_file(&args.config)?;
    if cfg.mode != mode {
        return Err(toda_cli::CliError::Config(format!(
            "mode: config says {:?} but the {:?} subcommand was invoked",
            cfg.mode, mode
        )));
    }
    if let Some(t) = args.trunc {
        cfg.trunc = t;
    }
    if let Some(s) = args.tol {
        if s <= 0.0 {
            return Err(toda_cli::CliError::Config("tol: must be positive".into()));
        }
        cfg.tolerances.gate_scale = s;
    }
    if let Some(n) = args.threads {
        cfg.threads = n.max(1);
    }
    let start = Instant::now();
    let summary = run_pipeline(&cfg, &args.out)?;
    // Timing stays on stderr: summaries must be byte-identical across runs.
    eprintln!("toda: {:?} finished in {:.3?}", cfg.mode, start.elapsed());
    for g in &summary.gates {
        eprintln!(
            "  gate {}: {:.3e} (tol {:.3e}) {}",
            g.name,
            g.value,
            g.tol,
            if g.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(summary.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Solve(a) => (Mode::Solve, a),
        Command::LaxCheck(a) => (Mode::LaxCheck, a),
        Command::Integrate(a) => (Mode::Integrate, a),
        Command::Dpw(a) => (Mode::Dpw, a),
        Command::Classify(a) => (Mode::Classify, a),
    };
    match run(mode, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("toda: gated tolerances failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("toda: {e}");
            ExitCode::from(2)
        }
    }
}
