use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nmc::container::ScalarWidth;
use nmc::MethodId;
use nmc_cli::bench::{self, BenchSpec};
use nmc_cli::commands::{self, CompressArgs};
use nmc_cli::{exit, CliError};

/// Image compression through truncated symmetric and skew-symmetric spectra.
#[derive(Parser)]
#[command(name = "nmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM image into an NMC1 container.
    Compress {
        input: PathBuf,
        output: PathBuf,
        /// 1 symmetric, 2 skew-symmetric, 3 both parts, 4 SVD.
        #[arg(long)]
        method: MethodId,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Square block size; omit to treat a square image as one block.
        #[arg(long)]
        block: Option<usize>,
        /// Store scalars as f64 instead of f32.
        #[arg(long)]
        f64: bool,
    },
    /// Decode a container into a binary PGM.
    Decompress { input: PathBuf, output: PathBuf },
    /// Print MSE and PSNR between two images of the same size.
    Metrics { original: PathBuf, reconstructed: PathBuf },
    /// Print a container header.
    Inspect { input: PathBuf },
    /// Write PSNR and compression-ratio CSV tables for a set of images.
    Bench {
        #[arg(required = true)]
        images: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values = ["1", "2", "3", "4"])]
        methods: Vec<MethodId>,
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        k: Vec<u32>,
        #[arg(long)]
        block: Option<usize>,
        #[arg(long)]
        f64: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Add a wall-clock seconds column to the PSNR tables.
        #[arg(long)]
        timing: bool,
    },
}

fn scalar_width(f64: bool) -> ScalarWidth {
    if f64 {
        ScalarWidth::F64
    } else {
        ScalarWidth::F32
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("NMC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("NMC_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("NMC_THREADS: {e}")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Compress { input, output, method, k, block, f64 } => {
            let args = CompressArgs {
                input: &input,
                output: &output,
                method,
                k: k as usize,
                block_size: block.unwrap_or(0),
                scalar_width: scalar_width(f64),
            };
            commands::compress(&args, &mut out)?;
        }
        Command::Decompress { input, output } => {
            commands::decompress(&input, &output)?;
        }
        Command::Metrics { original, reconstructed } => {
            commands::metrics(&original, &reconstructed, &mut out)?;
        }
        Command::Inspect { input } => {
            commands::inspect(&input, &mut out)?;
        }
        Command::Bench { images, mut methods, k, block, f64, out_dir, timing } => {
            methods.sort();
            methods.dedup();
            let mut spec = BenchSpec::new(images, out_dir);
            spec.methods = methods;
            if !k.is_empty() {
                spec.ks = k.into_iter().map(|k| k as usize).collect();
            }
            spec.block_size = block.unwrap_or(0);
            spec.scalar_width = scalar_width(f64);
            spec.timing = timing;
            let outcome = bench::run(&spec, &mut io::stderr())?;
            if let Some((_, e)) = outcome.failures.first() {
                return Ok(e.exit_code());
            }
        }
    }
    out.flush().map_err(CliError::io("<stdout>"))?;
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nmc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
