//! abflux: analyze the constrained dynamics of a flux geometry, verify its
//! spectra numerically, and simulate the flux-modulation channel.
//!
//! Exit codes: 0 success, 2 configuration error, 3 ambiguous region,
//! 4 numerical failure.

mod config;

use abflux_core::acceptance;
use abflux_core::channel::{encode, transmit, FluxAlphabet, SymbolVerdict};
use abflux_core::constraint::{classify_default, FirstOrderLagrangian};
use abflux_core::field::ReceiverRegion;
use abflux_core::lab::{
    convergence_study, gauge_invariance_check, ConvergenceOpts, ConvergenceRow, Grid2D,
};
use abflux_core::reduced::config_warnings;
use abflux_core::{CoreError, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::RunConfig;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "abflux", version, about = "Aharonov-Bohm flux toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dirac analysis of the receiver region: constraints, constraint
    /// matrix, classification, Dirac bracket.
    Analyze(RunArgs),
    /// Analytic vs finite-difference spectra with the convergence protocol
    /// and the gauge-invariance deviation.
    Spectrum(RunArgs),
    /// Run the flux-modulation channel and report per-frame readouts.
    Transmit(RunArgs),
    /// Run the full acceptance suite and print one line per criterion.
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for output files (stdout only when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Overrides both the analysis sampling seed and the channel seed.
    #[arg(long)]
    seed: Option<u64>,
}

/// Output destination after merging flags with the config's output section;
/// flags win.
struct ResolvedIo {
    out: Option<PathBuf>,
    format: OutputFormat,
}

fn resolve_io(args: &RunArgs, run: &RunConfig) -> Result<ResolvedIo> {
    let config_format = run.output.as_ref().and_then(|o| o.format.as_deref());
    let format = match (args.format, config_format) {
        (Some(f), _) => f,
        (None, Some("json")) | (None, None) => OutputFormat::Json,
        (None, Some("csv")) => OutputFormat::Csv,
        (None, Some(other)) => {
            return Err(CoreError::ConfigInvariant(format!(
                "output.format must be json or csv, got {other}"
            )))
        }
    };
    let out = args.out.clone().or_else(|| {
        run.output
            .as_ref()
            .and_then(|o| o.dir.as_ref().map(PathBuf::from))
    });
    Ok(ResolvedIo { out, format })
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

fn main() {
    // ABFLUX_THREADS caps internal parallelism (channel frames, matvecs)
    if let Ok(threads) = std::env::var("ABFLUX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Transmit(args) => cmd_transmit(&args),
        Command::Verify => cmd_verify(),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::InvalidInput(_) | CoreError::ConfigInvariant(_) => 2,
        CoreError::AmbiguousRegion(_) => 3,
        CoreError::SingularPoint(_)
        | CoreError::DegenerateRefusal(_)
        | CoreError::DegenerateTrap(_)
        | CoreError::Numerical(_)
        | CoreError::InternalConsistency(_) => 4,
    }
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CoreError::ConfigInvariant(format!("cannot read {}: {e}", args.config.display()))
    })?;
    let config = RunConfig::from_json(&text)?;
    for w in config_warnings(&config.field_configuration()?) {
        eprintln!("warning: {w}");
    }
    Ok(config)
}

fn write_output(dir: &Option<PathBuf>, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| {
            CoreError::ConfigInvariant(format!("cannot create {}: {e}", dir.display()))
        })?;
        let path: &Path = dir;
        std::fs::write(path.join(name), contents).map_err(|e| {
            CoreError::ConfigInvariant(format!("cannot write {name}: {e}"))
        })?;
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CoreError::Numerical(format!("serialization failed: {e}")))
}

fn cmd_analyze(args: &RunArgs) -> Result<i32> {
    let run = load_config(args)?;
    let io = resolve_io(args, &run)?;
    let world = run.field_configuration()?;
    let seed = args.seed.unwrap_or(run.seed);
    let lagr = match world.receiver_region {
        ReceiverRegion::InsideSpectator => FirstOrderLagrangian::reduced_circle_ii(&world)?,
        ReceiverRegion::InterveningRegion => FirstOrderLagrangian::reduced_region_iii(&world, 0.0)?,
    };
    let report = classify_default(&lagr, 64, seed)?;
    match io.format {
        OutputFormat::Json => {
            let text = to_json(&report)?;
            println!("{text}");
            write_output(&io.out, "analyze.json", &text)?;
        }
        OutputFormat::Csv => {
            let mut csv = String::from("x1,x2,c12\n");
            for s in &report.samples {
                csv.push_str(&format!("{},{},{}\n", s.point.x1, s.point.x2, s.c12));
            }
            print!("{csv}");
            eprintln!(
                "classification: {:?}; dirac_x1_x2: {:?}",
                report.classification, report.dirac_x1_x2
            );
            write_output(&io.out, "analyze.csv", &csv)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SpectrumRow {
    n: u32,
    analytic: f64,
    numeric: f64,
    rel_error: f64,
    delta: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumReport {
    rows: Vec<SpectrumRow>,
    convergence: Vec<ConvergenceRow>,
    gauge_deviation: Option<f64>,
    warnings: Vec<String>,
}

fn cmd_spectrum(args: &RunArgs) -> Result<i32> {
    let run = load_config(args)?;
    let io = resolve_io(args, &run)?;
    let world = run.field_configuration()?;
    let grid_spec = run.grid.ok_or_else(|| {
        CoreError::ConfigInvariant("spectrum needs a grid section in the config".into())
    })?;

    let table = convergence_study(
        &world,
        &ConvergenceOpts {
            base_h: grid_spec.spacing,
            refinements: grid_spec.refinements,
            n_levels: grid_spec.levels,
            level_rule: run.level_rule(&world),
            eig_tol: grid_spec.eig_tol,
        },
    )?;

    let k = &world.constants;
    let omega_eff = k.omega(world.total_field_at(world.receiver_point()));
    let finest = table.finest_levels(grid_spec.levels);
    let h_min = table.rows.iter().map(|r| r.h).fold(f64::INFINITY, f64::min);
    let rows: Vec<SpectrumRow> = finest
        .iter()
        .enumerate()
        .map(|(n, &numeric)| {
            let analytic = k.hbar * omega_eff * (n as f64 + 0.5);
            SpectrumRow {
                n: n as u32,
                analytic,
                numeric,
                rel_error: (numeric - analytic).abs() / analytic.abs().max(1e-300),
                delta: table
                    .rows
                    .iter()
                    .find(|r| r.h == h_min && r.level == n as u32)
                    .and_then(|r| r.delta),
            }
        })
        .collect();

    let gauge_deviation = if grid_spec.levels > 0 {
        let fine_h = grid_spec.spacing / (1u32 << grid_spec.refinements) as f64;
        let grid = Grid2D::disk(world.spectator.center, world.spectator.radius, fine_h)?;
        Some(gauge_invariance_check(
            &world,
            &grid,
            grid_spec.levels,
            grid_spec.gauge_eig_tol,
        )?)
    } else {
        None
    };

    let report = SpectrumReport {
        rows,
        convergence: table.rows.clone(),
        gauge_deviation,
        warnings: table.warnings.clone(),
    };
    match io.format {
        OutputFormat::Json => {
            let text = to_json(&report)?;
            println!("{text}");
            write_output(&io.out, "spectrum.json", &text)?;
        }
        OutputFormat::Csv => {
            let mut csv = String::from("n,analytic,numeric,rel_error,delta\n");
            for r in &report.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.n,
                    r.analytic,
                    r.numeric,
                    r.rel_error,
                    r.delta.map(|d| d.to_string()).unwrap_or_default()
                ));
            }
            let mut conv = String::from("h,level,energy,delta\n");
            for r in &report.convergence {
                conv.push_str(&format!(
                    "{},{},{},{}\n",
                    r.h,
                    r.level,
                    r.energy,
                    r.delta.map(|d| d.to_string()).unwrap_or_default()
                ));
            }
            print!("{csv}");
            if let Some(dev) = report.gauge_deviation {
                eprintln!("gauge_deviation: {dev}");
            }
            write_output(&io.out, "spectrum.csv", &csv)?;
            write_output(&io.out, "convergence.csv", &conv)?;
        }
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(0)
}

fn cmd_transmit(args: &RunArgs) -> Result<i32> {
    let run = load_config(args)?;
    let io = resolve_io(args, &run)?;
    let world = run.field_configuration()?;
    let channel = run.channel.as_ref().ok_or_else(|| {
        CoreError::ConfigInvariant("transmit needs a channel section in the config".into())
    })?;
    let alphabet = FluxAlphabet::new(channel.alphabet.clone())?;
    let message = run.message(&alphabet)?;
    let schedule = encode(&message, &alphabet)?;
    let noise = run.noise_model();
    let opts = run.channel_opts(args.seed)?;
    let report = transmit(&schedule, &world, &noise, &opts)?;

    eprintln!(
        "SER = {}; E0 jitter stddev = {}; frames = {}{}",
        report.symbol_error_rate,
        report.e0_jitter_stddev,
        report.frames.len(),
        if report.blind_area { "; BlindArea" } else { "" }
    );

    match io.format {
        OutputFormat::Json => {
            let text = to_json(&report)?;
            println!("{text}");
            write_output(&io.out, "transmit.json", &text)?;
        }
        OutputFormat::Csv => {
            let mut csv = String::from("index,flux,j_readout,e0_readout,symbol_out\n");
            for f in &report.frames {
                let verdict = match f.symbol_out {
                    SymbolVerdict::Decoded(s) => s.to_string(),
                    SymbolVerdict::NoSignal => "no_signal".into(),
                    SymbolVerdict::NotYetArrived => "not_yet_arrived".into(),
                };
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    f.index,
                    f.flux,
                    f.j_readout.map(|v| v.to_string()).unwrap_or_default(),
                    f.e0_readout.map(|v| v.to_string()).unwrap_or_default(),
                    verdict
                ));
            }
            print!("{csv}");
            write_output(&io.out, "frames.csv", &csv)?;
        }
    }
    Ok(0)
}

fn cmd_verify() -> Result<i32> {
    let results = acceptance::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        println!("all {} criteria passed", results.len());
        Ok(0)
    } else {
        Ok(4)
    }
}
