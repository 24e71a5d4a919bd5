//! `tax-ising` command-line driver.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tax_ising::output::{self, RunManifest};
use tax_ising::{experiment, Error, ModelParams};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tax-ising",
    version,
    about = "Ising-model simulation of tax evasion with audits and punishment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one time series and write `sweep,evasion_fraction,magnetization`.
    Run(RunArgs),
    /// Simulate audit probabilities 0.00..=1.00 and write `p_a,sweep,evasion_fraction`.
    Grid(GridArgs),
    /// Print the flip-probability table.
    Table(TableArgs),
    /// Compare a long heat-bath run with exact enumeration on a small lattice.
    Verify(VerifyArgs),
    /// Estimate the long-run evasion level from independent replicates.
    Equilibrium(EquilibriumArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Social temperature in units of J/k_B.
    #[arg(long)]
    temperature: f64,
    /// Punishment length k in sweeps.
    #[arg(long)]
    punishment: u32,
    /// Lattice side length L.
    #[arg(long, default_value_t = ModelParams::DEFAULT_SIDE)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Audit probability p_a in [0, 1].
    #[arg(long)]
    audit_prob: f64,
    #[arg(long)]
    sweeps: usize,
    /// Output CSV; a `.manifest` sidecar is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    sweeps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a whitespace-separated p_a × sweep matrix here.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_delimiter = ',', default_values_t = output::DEFAULT_TABLE_TEMPERATURES)]
    temperatures: Vec<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Side length, 2 to 4.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 2.5)]
    temperature: f64,
    #[arg(long, default_value_t = 1_000_000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct EquilibriumArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    audit_prob: f64,
    #[arg(long, default_value_t = 8000)]
    burn_in: usize,
    #[arg(long, default_value_t = 2000)]
    measure: usize,
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Io(io::Error),
    Verification(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig { field, reason } => {
                Failure::Config(format!("--{} {reason}", flag_name(field)))
            }
            other => Failure::Config(other.to_string()),
        }
    }
}

fn flag_name(field: &str) -> &str {
    match field {
        "audit_probability" => "audit-prob",
        "side_length" => "size",
        "punishment_length" => "punishment",
        "burn_in" => "burn-in",
        other => other,
    }
}

fn params_from(
    common: &CommonArgs,
    audit_prob: f64,
    sweeps: usize,
) -> Result<ModelParams, Failure> {
    let p = ModelParams::baseline(common.temperature)
        .with_enforcement(audit_prob, common.punishment)
        .with_side_length(common.size)
        .with_seed(common.seed)
        .with_sweeps(sweeps);
    p.validate()?;
    Ok(p)
}

fn configure_threads(threads: usize) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Config(format!("--threads: {e}")))
}

/// Opens `path` or stdout.
fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Manifest goes next to the file, or to stderr when writing to stdout.
fn emit_manifest(manifest: &RunManifest, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".manifest");
            manifest.write(BufWriter::new(File::create(PathBuf::from(name))?))
        }
        None => manifest.write(io::stderr().lock()),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let params = params_from(&args.common, args.audit_prob, args.sweeps)?;
    let start = Instant::now();
    let series = experiment::run_series(&params)?;
    let secs = start.elapsed().as_secs_f64();
    output::write_series_csv(sink(args.out.as_deref())?, &series)?;

    let mut manifest = RunManifest::new("run");
    manifest.with_params(&params).with_timing(
        secs,
        (params.sweeps * params.side_length * params.side_length) as u64,
    );
    emit_manifest(&manifest, args.out.as_deref())?;
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<(), Failure> {
    let base = params_from(&args.common, 0.0, args.sweeps)?;
    configure_threads(args.threads)?;
    let start = Instant::now();
    let grid = experiment::run_grid(&base)?;
    let secs = start.elapsed().as_secs_f64();
    output::write_grid_csv(sink(args.out.as_deref())?, &grid)?;
    if let Some(path) = &args.matrix {
        output::write_grid_matrix(BufWriter::new(File::create(path)?), &grid)?;
    }

    let mut manifest = RunManifest::new("grid");
    manifest.with_params(&base);
    manifest.push(
        "audit_probability",
        "0.00..=1.00 step 0.01 (overrides the value above)",
    );
    manifest.push(
        "row_seeds",
        grid.seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let updates = experiment::GRID_ROWS * base.sweeps * base.side_length * base.side_length;
    manifest.with_timing(secs, updates as u64);
    emit_manifest(&manifest, args.out.as_deref())?;
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let table = output::format_probability_table(&args.temperatures)?;
    let mut out = io::stdout().lock();
    out.write_all(table.as_bytes())?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if !(2..=4).contains(&args.size) {
        return Err(Failure::Config(format!(
            "--size must be 2, 3 or 4, got {}",
            args.size
        )));
    }
    let cmp = experiment::compare_with_oracle(args.size, args.temperature, args.sweeps, args.seed)?;
    let report = output::format_oracle_report(&cmp, 3.0);
    io::stdout().lock().write_all(report.as_bytes())?;
    if cmp.agrees_within(3.0) {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "simulated energy {} differs from exact {} by more than 3 standard errors ({})",
            cmp.simulated_energy, cmp.exact_energy, cmp.std_error
        )))
    }
}

fn cmd_equilibrium(args: EquilibriumArgs) -> Result<(), Failure> {
    let params = params_from(&args.common, args.audit_prob, args.burn_in + args.measure)?;
    configure_threads(args.threads)?;
    let start = Instant::now();
    let est = experiment::estimate_equilibrium(&params, args.burn_in, args.measure, args.seeds)?;
    let secs = start.elapsed().as_secs_f64();
    output::write_equilibrium_csv(sink(args.out.as_deref())?, &params, &est)?;

    let mut manifest = RunManifest::new("equilibrium");
    manifest.with_params(&params);
    manifest.push(
        "replicate_seeds",
        est.replicate_seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let updates = args.seeds * params.sweeps * params.side_length * params.side_length;
    manifest.with_timing(secs, updates as u64);
    emit_manifest(&manifest, args.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Equilibrium(a) => cmd_equilibrium(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
