//! Table regeneration: PSNR per image over a k grid, and compression ratios.
//!
//! Each image is decomposed once; every (method, k) cell then truncates the
//! shared spectra, goes through the container and back, and is scored against
//! the original. Cells run in parallel but are assembled in grid order, so the
//! CSV text depends only on the inputs and flags.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nmc::codec::{self, BlockLayout};
use nmc::container::{self, ScalarWidth};
use nmc::metrics;
use nmc::MethodId;
use rayon::prelude::*;

use crate::commands::{read_image, write_file, CliResult};
use crate::error::CliError;

pub const DEFAULT_KS: [usize; 8] = [10, 20, 30, 40, 50, 75, 100, 150];
pub const CSV_HEADER: &str = "k,method1,method2,method3,method4";

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub images: Vec<PathBuf>,
    pub methods: Vec<MethodId>,
    pub ks: Vec<usize>,
    pub block_size: usize,
    pub scalar_width: ScalarWidth,
    pub out_dir: PathBuf,
    pub timing: bool,
}

impl BenchSpec {
    pub fn new(images: Vec<PathBuf>, out_dir: PathBuf) -> Self {
        BenchSpec {
            images,
            methods: MethodId::ALL.to_vec(),
            ks: DEFAULT_KS.to_vec(),
            block_size: 0,
            scalar_width: ScalarWidth::default(),
            out_dir,
            timing: false,
        }
    }
}

/// PSNR table for one image. `psnr[row][method code - 1]` is `None` for
/// methods that were not requested.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageTable {
    pub image: PathBuf,
    pub order: usize,
    pub ks: Vec<usize>,
    pub psnr: Vec<[Option<f64>; 4]>,
    /// Wall-clock seconds per row, when timing was requested.
    pub seconds: Option<Vec<f64>>,
    pub analysis_seconds: f64,
}

impl ImageTable {
    pub fn get(&self, k: usize, method: MethodId) -> Option<f64> {
        let row = self.ks.iter().position(|&x| x == k)?;
        self.psnr[row][usize::from(method.code()) - 1]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        if self.seconds.is_some() {
            s.push_str(",seconds");
        }
        s.push('\n');
        for (row, &k) in self.ks.iter().enumerate() {
            write!(s, "{k}").unwrap();
            for cell in self.psnr[row] {
                s.push(',');
                if let Some(db) = cell {
                    s.push_str(&metrics::format_db(db));
                }
            }
            if let Some(seconds) = &self.seconds {
                write!(s, ",{:.3}", seconds[row]).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Element compression ratios of n×n blocks over the k grid, all four methods.
pub fn cr_csv(n: usize, ks: &[usize]) -> CliResult<String> {
    let mut s = format!("{CSV_HEADER}\n");
    for &k in ks {
        write!(s, "{k}").unwrap();
        for method in MethodId::ALL {
            let cr = metrics::cr_elements(method, n, k).map_err(CliError::core(format!("CR for n {n}, k {k}")))?;
            write!(s, ",{cr:.4}").unwrap();
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn bench_image(path: &Path, spec: &BenchSpec) -> CliResult<ImageTable> {
    let image = read_image(path)?;
    let layout = BlockLayout::new(image.width(), image.height(), spec.block_size)
        .map_err(CliError::core(path.display().to_string()))?;
    let n = layout.order();
    if let Some(&k) = spec.ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(CliError::Usage(format!("{}: k = {k} outside 1..={n}", path.display())));
    }

    let started = Instant::now();
    let analysis = codec::analyze(&image, spec.block_size, &spec.methods)
        .map_err(CliError::core(format!("{}: decomposition", path.display())))?;
    let analysis_seconds = started.elapsed().as_secs_f64();

    let cell = |k: usize, method: MethodId| -> CliResult<f64> {
        let context = || format!("{}: method {method}, k {k}", path.display());
        let grid = analysis.encode(method, k).map_err(CliError::core(context()))?;
        let bytes = container::serialize(&grid, spec.scalar_width).map_err(CliError::core(context()))?;
        let decoded = container::deserialize(&bytes)
            .and_then(|g| codec::decompress(&g))
            .map_err(CliError::core(context()))?;
        metrics::psnr(&image, &decoded).map_err(CliError::core(context()))
    };

    let rows = spec
        .ks
        .par_iter()
        .map(|&k| {
            let started = Instant::now();
            let mut row = [None; 4];
            for &method in &spec.methods {
                row[usize::from(method.code()) - 1] = Some(cell(k, method)?);
            }
            Ok((row, started.elapsed().as_secs_f64()))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let (psnr, seconds): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(ImageTable {
        image: path.to_path_buf(),
        order: n,
        ks: spec.ks.clone(),
        psnr,
        seconds: spec.timing.then_some(seconds),
        analysis_seconds,
    })
}

#[derive(Debug, Default)]
pub struct BenchOutcome {
    pub tables: Vec<ImageTable>,
    pub failures: Vec<(PathBuf, CliError)>,
    pub written: Vec<PathBuf>,
}

fn log_err(e: std::io::Error) -> CliError {
    CliError::io("<log>")(e)
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "image".to_string(), |s| s.to_string_lossy().into_owned())
}

/// Runs every image, writing `psnr_<stem>.csv` per image and `cr.csv` (one
/// `cr_n<order>.csv` per block order if the images differ). A failing image
/// is logged and skipped.
pub fn run(spec: &BenchSpec, log: &mut dyn Write) -> CliResult<BenchOutcome> {
    if spec.images.is_empty() {
        return Err(CliError::Usage("bench needs at least one image".into()));
    }
    if spec.methods.is_empty() || spec.ks.is_empty() {
        return Err(CliError::Usage("bench needs at least one method and one k".into()));
    }
    std::fs::create_dir_all(&spec.out_dir).map_err(CliError::io(&spec.out_dir))?;

    let mut outcome = BenchOutcome::default();
    for path in &spec.images {
        match bench_image(path, spec) {
            Ok(table) => {
                let out = spec.out_dir.join(format!("psnr_{}.csv", stem(path)));
                write_file(&out, table.to_csv().as_bytes())?;
                writeln!(
                    log,
                    "{}: order {}, decomposed in {:.2} s -> {}",
                    path.display(),
                    table.order,
                    table.analysis_seconds,
                    out.display()
                )
                .map_err(log_err)?;
                outcome.written.push(out);
                outcome.tables.push(table);
            }
            Err(e) => {
                writeln!(log, "{}: failed: {e}", path.display()).map_err(log_err)?;
                outcome.failures.push((path.clone(), e));
            }
        }
    }

    let orders: BTreeSet<usize> = outcome.tables.iter().map(|t| t.order).collect();
    for &n in &orders {
        let name = if orders.len() == 1 { "cr.csv".to_string() } else { format!("cr_n{n}.csv") };
        let out = spec.out_dir.join(name);
        write_file(&out, cr_csv(n, &spec.ks)?.as_bytes())?;
        writeln!(log, "compression ratios for order {n} -> {}", out.display()).map_err(log_err)?;
        outcome.written.push(out);
    }
    Ok(outcome)
}
