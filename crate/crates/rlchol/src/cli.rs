//! The `rlchol` command line.
//!
//! Reports are printed as `key: value` lines. Exit status is 0 on success,
//! 1 on a usage error and 2 on a numerical or I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rlchol_core::{
    residual, Analysis, AnalysisOptions, FactorPanels, HostBackend, OffloadConfig,
    SymmetricSparseMatrix, TransferLedger, Variant,
};

use crate::bench::{parse_methods, read_timings_file, run_bench, write_timings, BenchConfig};
use crate::error::{Error, Result};
use crate::io::{read_matrix_market, read_permutation, read_vector, write_vector};
use crate::profile::{performance_profile, write_profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rlchol", version, about = "Right-looking supernodal sparse Cholesky")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the symbolic analysis and report its statistics.
    Analyze(AnalyzeArgs),
    /// Factor a matrix and report accuracy and device traffic.
    Factor(FactorArgs),
    /// Factor a matrix and solve one right-hand side.
    Solve(SolveArgs),
    /// Time several methods on several matrices.
    Bench(BenchArgs),
    /// Turn a timing CSV into performance-profile breakpoints.
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Symmetric Matrix Market file.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Fill-reducing ordering file (new 1-based position of each index);
    /// minimum degree when absent.
    #[arg(long)]
    pub perm: Option<PathBuf>,
    /// Supernode merge budget as a fraction of nnz(L).
    #[arg(long, default_value_t = 0.25)]
    pub merge_cap: f64,
    /// Skip partition refinement.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rl,
    Rlb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Host,
    Simdev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Streamed,
    Aggregated,
}

#[derive(Debug, Args)]
pub struct OffloadArgs {
    /// Smallest supernode size (width x length) offloaded by RL.
    #[arg(long, default_value_t = 600_000)]
    pub rl_threshold: usize,
    /// Smallest supernode size offloaded by RLB.
    #[arg(long, default_value_t = 750_000)]
    pub rlb_threshold: usize,
    /// Simulated device memory in bytes; unlimited when absent.
    #[arg(long)]
    pub device_memory: Option<usize>,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Rlb)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Host)]
    pub backend: BackendArg,
    /// RLB offload schedule.
    #[arg(long, value_enum, default_value_t = VariantArg::Streamed)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub offload: OffloadArgs,
    /// Write the device transfer ledger as CSV.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Right-hand side, one value per line; `A * ones` when absent.
    #[arg(long)]
    pub rhs: Option<PathBuf>,
    /// Where to write the solution.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Matrix Market files; the file stem names each matrix.
    #[arg(long = "matrix", required = true, num_args = 1..)]
    pub matrices: Vec<PathBuf>,
    /// Comma-separated methods: rl, rlb, rl-simdev, rlb-aggregated, rlb-streamed.
    #[arg(long, default_value = "rl,rlb")]
    pub methods: String,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0.25)]
    pub merge_cap: f64,
    #[command(flatten)]
    pub offload: OffloadArgs,
    /// Timing CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Timing CSV with columns matrix, method, seconds, status.
    #[arg(long)]
    pub timings: PathBuf,
    /// Profile CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_matrix(path: &Path) -> Result<SymmetricSparseMatrix> {
    read_matrix_market(BufReader::new(File::open(path)?))
}

fn analyse(args: &PipelineArgs) -> Result<(SymmetricSparseMatrix, Analysis)> {
    let a = load_matrix(&args.matrix)?;
    if !(args.merge_cap >= 0.0 && args.merge_cap.is_finite()) {
        return Err(Error::Validation("merge cap must be a nonnegative number".into()));
    }
    let ordering = match &args.perm {
        Some(p) => Some(read_permutation(&std::fs::read_to_string(p)?, a.n())?),
        None => None,
    };
    let options = AnalysisOptions {
        ordering,
        merge_cap: args.merge_cap,
        refine: !args.no_refine,
    };
    let analysis = Analysis::new(&a, &options)?;
    Ok((a, analysis))
}

fn offload_config(args: &NumericArgs) -> OffloadConfig {
    let variant = match (args.method, args.variant) {
        (MethodArg::Rl, _) => Variant::Rl,
        (MethodArg::Rlb, VariantArg::Streamed) => Variant::RlbStreamed,
        (MethodArg::Rlb, VariantArg::Aggregated) => Variant::RlbAggregated,
    };
    OffloadConfig {
        rl_threshold: args.offload.rl_threshold,
        rlb_threshold: args.offload.rlb_threshold,
        variant,
        device_memory_limit: args.offload.device_memory,
    }
}

struct Factored {
    factor: FactorPanels,
    ledger: Option<TransferLedger>,
    offloaded: usize,
    peak_update_bytes: usize,
    seconds: f64,
}

fn factor(analysis: &Analysis, args: &NumericArgs) -> Result<Factored> {
    let start = Instant::now();
    let mut out = match args.backend {
        BackendArg::Host => {
            let mut host = HostBackend::new();
            let factor = match args.method {
                MethodArg::Rl => analysis.factor_rl(&mut host)?,
                MethodArg::Rlb => analysis.factor_rlb(&mut host)?,
            };
            Factored {
                factor,
                ledger: None,
                offloaded: 0,
                peak_update_bytes: 0,
                seconds: 0.0,
            }
        }
        BackendArg::Simdev => {
            let run = analysis.factor_offloaded(&offload_config(args))?;
            Factored {
                factor: run.factor,
                offloaded: run.offloaded.len(),
                peak_update_bytes: run.peak_update_bytes,
                ledger: Some(run.ledger),
                seconds: 0.0,
            }
        }
    };
    out.seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &args.ledger {
        let csv = out.ledger.as_ref().map(TransferLedger::to_csv).unwrap_or_else(|| {
            TransferLedger::new().to_csv()
        });
        std::fs::write(path, csv)?;
    }
    Ok(out)
}

fn report_factor(out: &mut dyn Write, args: &NumericArgs, f: &Factored, a: &Analysis) -> Result<()> {
    let method = match args.method {
        MethodArg::Rl => "rl",
        MethodArg::Rlb => "rlb",
    };
    writeln!(out, "method: {method}")?;
    match (args.backend, f.ledger.as_ref()) {
        (BackendArg::Simdev, Some(ledger)) => {
            writeln!(out, "backend: simdev")?;
            writeln!(out, "schedule: {}", offload_config(args).variant.as_str())?;
            let summary = ledger.summary();
            writeln!(out, "offloaded_supernodes: {}", f.offloaded)?;
            writeln!(out, "h2d_transfers: {}", summary.h2d.count)?;
            writeln!(out, "h2d_bytes: {}", summary.h2d.bytes)?;
            writeln!(out, "d2h_transfers: {}", summary.d2h.count)?;
            writeln!(out, "d2h_bytes: {}", summary.d2h.bytes)?;
            writeln!(out, "device_kernels: {}", summary.kernels.count)?;
            writeln!(out, "peak_update_bytes: {}", f.peak_update_bytes)?;
        }
        _ => writeln!(out, "backend: host")?,
    }
    writeln!(out, "n: {}", a.stats.n)?;
    writeln!(out, "supernodes: {}", a.stats.supernodes)?;
    writeln!(out, "factor_seconds: {:.6}", f.seconds)?;
    let err = f.factor.reconstruction_error(&a.matrix)?;
    writeln!(out, "reconstruction_error: {err:.3e}")?;
    Ok(())
}

fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let (_, analysis) = analyse(&args.pipeline)?;
    let s = analysis.stats;
    let ordering = if args.pipeline.perm.is_some() { "file" } else { "minimum-degree" };
    writeln!(out, "n: {}", s.n)?;
    writeln!(out, "nnz_a: {}", s.nnz_a)?;
    writeln!(out, "ordering: {ordering}")?;
    writeln!(out, "factor_nnz: {}", s.nnz_l)?;
    writeln!(out, "supernodes_before_merge: {}", s.fundamental_supernodes)?;
    writeln!(out, "supernodes_after_merge: {}", s.supernodes)?;
    writeln!(out, "factor_storage: {}", s.storage)?;
    writeln!(out, "storage_growth_percent: {:.2}", 100.0 * s.storage_growth)?;
    writeln!(out, "blocks_before_refine: {}", s.blocks_before_refine)?;
    writeln!(out, "blocks_after_refine: {}", s.blocks)?;
    writeln!(out, "rl_workspace_entries: {}", s.workspace_capacity)?;
    Ok(())
}

fn run_factor(args: &FactorArgs, out: &mut dyn Write) -> Result<()> {
    let (_, analysis) = analyse(&args.pipeline)?;
    let f = factor(&analysis, &args.numeric)?;
    report_factor(out, &args.numeric, &f, &analysis)
}

fn run_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<()> {
    let (a, analysis) = analyse(&args.pipeline)?;
    let (b, exact) = match &args.rhs {
        Some(path) => (read_vector(&std::fs::read_to_string(path)?)?, None),
        None => (a.mul_vec(&vec![1.0; a.n()])?, Some(1.0)),
    };
    let f = factor(&analysis, &args.numeric)?;
    let x = analysis.solve(&f.factor, &b)?;
    report_factor(out, &args.numeric, &f, &analysis)?;
    writeln!(out, "backward_error: {:.3e}", residual(&a, &x, &b)?)?;
    if let Some(v) = exact {
        let err = x.iter().map(|xi| (xi - v).abs()).fold(0.0, f64::max);
        writeln!(out, "max_abs_error: {err:.3e}")?;
    }
    if let Some(path) = &args.out {
        write_vector(&x, BufWriter::new(File::create(path)?))?;
        writeln!(out, "solution: {}", path.display())?;
    }
    Ok(())
}

fn run_bench_cmd(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let methods = parse_methods(&args.methods)?;
    if args.repeats == 0 {
        return Err(Error::Validation("repeats must be at least 1".into()));
    }
    let matrices = args
        .matrices
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            load_matrix(p).map(|a| (name, a))
        })
        .collect::<Result<Vec<_>>>()?;
    let config = BenchConfig {
        repeats: args.repeats,
        analysis: AnalysisOptions {
            merge_cap: args.merge_cap,
            ..AnalysisOptions::default()
        },
        offload: OffloadConfig {
            rl_threshold: args.offload.rl_threshold,
            rlb_threshold: args.offload.rlb_threshold,
            device_memory_limit: args.offload.device_memory,
            ..OffloadConfig::default()
        },
    };
    let rows = run_bench(&matrices, &methods, &config);
    match &args.out {
        Some(path) => {
            write_timings(&rows, BufWriter::new(File::create(path)?))?;
            let failed = rows.iter().filter(|r| r.seconds.is_none()).count();
            writeln!(out, "rows: {}", rows.len())?;
            writeln!(out, "failed: {failed}")?;
            writeln!(out, "timings: {}", path.display())?;
        }
        None => write_timings(&rows, out)?,
    }
    Ok(())
}

fn run_profile(args: &ProfileArgs, out: &mut dyn Write) -> Result<()> {
    let points = performance_profile(&read_timings_file(&args.timings)?)?;
    match &args.out {
        Some(path) => {
            write_profile(&points, BufWriter::new(File::create(path)?))?;
            writeln!(out, "breakpoints: {}", points.len())?;
            writeln!(out, "profile: {}", path.display())?;
        }
        None => write_profile(&points, out)?,
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => run_analyze(a, out),
        Command::Factor(a) => run_factor(a, out),
        Command::Solve(a) => run_solve(a, out),
        Command::Bench(a) => run_bench_cmd(a, out),
        Command::Profile(a) => run_profile(a, out),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}
