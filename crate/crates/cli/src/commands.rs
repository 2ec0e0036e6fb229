use std::fs;
use std::io::Write;
use std::path::Path;

use nmc::codec::{self, element_count};
use nmc::container::{self, ScalarWidth};
use nmc::imageio::{self, ImageMatrix, PgmFlavor};
use nmc::metrics::{self, format_db};
use nmc::MethodId;

use crate::error::CliError;

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(CliError::io(path))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(CliError::io(path))
}

pub fn read_image(path: &Path) -> CliResult<ImageMatrix> {
    imageio::read_pgm(&read_file(path)?).map_err(CliError::core(path.display().to_string()))
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>")(e)
}

#[derive(Clone, Debug)]
pub struct CompressArgs<'a> {
    pub input: &'a Path,
    pub output: &'a Path,
    pub method: MethodId,
    pub k: usize,
    /// 0 compresses the whole (square) image as one block.
    pub block_size: usize,
    pub scalar_width: ScalarWidth,
}

/// Ratios printed by `compress`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompressSummary {
    pub cr_elements: f64,
    pub cr_bytes: f64,
    pub original_bytes: usize,
    pub compressed_bytes: usize,
}

pub fn compress(args: &CompressArgs<'_>, out: &mut dyn Write) -> CliResult<CompressSummary> {
    let image = read_image(args.input)?;
    if args.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let grid = codec::compress(&image, args.method, args.k, args.block_size).map_err(CliError::core("compress"))?;
    let bytes = container::serialize(&grid, args.scalar_width).map_err(CliError::core("serialize"))?;
    write_file(args.output, &bytes)?;

    let n = grid.layout.order();
    let stored = grid.layout.block_count() * element_count(args.method, n, args.k).map_err(CliError::core("compress"))?;
    let original_bytes = image.pixels().len();
    let summary = CompressSummary {
        cr_elements: original_bytes as f64 / stored as f64,
        cr_bytes: metrics::cr_bytes(original_bytes, bytes.len()).map_err(CliError::core("compress"))?,
        original_bytes,
        compressed_bytes: bytes.len(),
    };
    writeln!(out, "method: {}", args.method).map_err(out_err)?;
    writeln!(out, "k: {}", args.k).map_err(out_err)?;
    writeln!(out, "blocks: {} of order {}", grid.layout.block_count(), n).map_err(out_err)?;
    writeln!(out, "CR (elements): {:.4}", summary.cr_elements).map_err(out_err)?;
    writeln!(out, "CR (bytes): {:.4} ({} -> {} bytes)", summary.cr_bytes, original_bytes, bytes.len()).map_err(out_err)?;
    Ok(summary)
}

pub fn decompress(input: &Path, output: &Path) -> CliResult<ImageMatrix> {
    let context = input.display().to_string();
    let grid = container::deserialize(&read_file(input)?).map_err(CliError::core(context.clone()))?;
    let image = codec::decompress(&grid).map_err(CliError::core(context))?;
    write_file(output, &imageio::write_pgm(&image, PgmFlavor::P5))?;
    Ok(image)
}

pub fn metrics(original: &Path, reconstructed: &Path, out: &mut dyn Write) -> CliResult<(f64, f64)> {
    let a = read_image(original)?;
    let b = read_image(reconstructed)?;
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(CliError::Usage(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let mse = metrics::mse(&a, &b).map_err(CliError::core("metrics"))?;
    let psnr = metrics::psnr_from_mse(mse);
    writeln!(out, "MSE: {mse:.4}").map_err(out_err)?;
    writeln!(out, "PSNR: {}", format_db(psnr)).map_err(out_err)?;
    Ok((mse, psnr))
}

pub fn inspect(input: &Path, out: &mut dyn Write) -> CliResult<container::ContainerHeader> {
    let bytes = read_file(input)?;
    let header = container::inspect(&bytes).map_err(CliError::core(input.display().to_string()))?;
    let layout = header.layout().map_err(CliError::core("inspect"))?;
    writeln!(out, "version: {}", header.version).map_err(out_err)?;
    writeln!(out, "method: {}", header.method).map_err(out_err)?;
    writeln!(out, "k: {}", header.k).map_err(out_err)?;
    writeln!(out, "image: {}x{}", header.width, header.height).map_err(out_err)?;
    if header.blocked {
        let (rows, cols) = layout.grid();
        writeln!(out, "blocks: {cols}x{rows} of size {}", header.block_size).map_err(out_err)?;
    } else {
        writeln!(out, "blocks: whole image").map_err(out_err)?;
    }
    writeln!(out, "scalar width: {} bytes", header.scalar_width.bytes()).map_err(out_err)?;
    match header.total_len() {
        Some(expected) => writeln!(out, "length: {} bytes (expected {expected})", bytes.len()),
        None => writeln!(out, "length: {} bytes (expected size overflows)", bytes.len()),
    }
    .map_err(out_err)?;
    Ok(header)
}
