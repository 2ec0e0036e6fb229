use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nmc::imageio::{read_pgm, write_pgm, ImageMatrix, PgmFlavor};
use nmc::metrics;
use nmc_cli::bench::{self, BenchSpec};
use nmc_cli::exit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn nmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmc")).args(args).output().expect("spawn nmc")
}

fn code(out: &Output) -> u8 {
    out.status.code().expect("exit code") as u8
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn smooth_image(w: usize, h: usize, seed: u64) -> ImageMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b): (f64, f64) = (rng.gen_range(3.0..9.0), rng.gen_range(3.0..9.0));
    let pixels = (0..w * h)
        .map(|i| {
            let (r, c) = ((i / w) as f64, (i % w) as f64);
            let v = 128.0 + 90.0 * (r / a).sin() * (c / b).cos() + rng.gen_range(-12.0..12.0);
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    ImageMatrix::new(w, h, pixels).unwrap()
}

fn save(dir: &TempDir, name: &str, img: &ImageMatrix) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, write_pgm(img, PgmFlavor::P5)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn round_trip_matches_library_metrics() {
    let dir = TempDir::new().unwrap();
    let img = smooth_image(48, 48, 1);
    let input = save(&dir, "in.pgm", &img);
    let packed = dir.path().join("in.nmc");
    let output = dir.path().join("out.pgm");
    for method in ["1", "2", "3", "4"] {
        let out = nmc(&["compress", s(&input), s(&packed), "--method", method, "--k", "6"]);
        assert_eq!(code(&out), exit::OK, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(code(&nmc(&["decompress", s(&packed), s(&output)])), exit::OK);

        let decoded = read_pgm(&std::fs::read(&output).unwrap()).unwrap();
        let expected = metrics::format_db(metrics::psnr(&img, &decoded).unwrap());
        let report = stdout(&nmc(&["metrics", s(&input), s(&output)]));
        assert!(report.contains(&format!("PSNR: {expected}\n")), "{report}");
    }
}

#[test]
fn compress_prints_ratios_and_inspect_reads_header() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "in.pgm", &smooth_image(40, 40, 2));
    let packed = dir.path().join("in.nmc");
    let out = nmc(&["compress", s(&input), s(&packed), "--method", "3", "--k", "5"]);
    let text = stdout(&out);
    // 1600 / (2·5·41)
    assert!(text.contains("CR (elements): 3.9024\n"), "{text}");
    let size = std::fs::metadata(&packed).unwrap().len();
    assert!(text.contains(&format!("CR (bytes): {:.4}", 1600.0 / size as f64)), "{text}");

    let info = stdout(&nmc(&["inspect", s(&packed)]));
    assert!(info.contains("method: 3\n") && info.contains("k: 5\n"), "{info}");
    assert!(info.contains("image: 40x40\n"), "{info}");
}

#[test]
fn full_rank_is_lossless() {
    let dir = TempDir::new().unwrap();
    let img = smooth_image(24, 24, 3);
    let input = save(&dir, "in.pgm", &img);
    let packed = dir.path().join("in.nmc");
    let output = dir.path().join("out.pgm");
    for method in ["1", "2", "3", "4"] {
        nmc(&["compress", s(&input), s(&packed), "--method", method, "--k", "24", "--f64"]);
        assert_eq!(code(&nmc(&["decompress", s(&packed), s(&output)])), exit::OK);
        assert_eq!(read_pgm(&std::fs::read(&output).unwrap()).unwrap(), img, "method {method}");
    }
}

#[test]
fn blocked_mode_accepts_non_square_images() {
    let dir = TempDir::new().unwrap();
    let img = smooth_image(37, 21, 4);
    let input = save(&dir, "in.pgm", &img);
    let packed = dir.path().join("in.nmc");
    let output = dir.path().join("out.pgm");

    let out = nmc(&["compress", s(&input), s(&packed), "--method", "4", "--k", "3"]);
    assert_eq!(code(&out), exit::USAGE);

    let out = nmc(&["compress", s(&input), s(&packed), "--method", "4", "--k", "8", "--block", "8"]);
    assert_eq!(code(&out), exit::OK);
    nmc(&["decompress", s(&packed), s(&output)]);
    assert_eq!(read_pgm(&std::fs::read(&output).unwrap()).unwrap(), img);
}

#[test]
fn exit_codes_are_distinct() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "in.pgm", &smooth_image(16, 16, 5));
    let packed = dir.path().join("in.nmc");
    let output = dir.path().join("out.pgm");

    assert_eq!(code(&nmc(&["compress", s(&input), s(&packed), "--method", "3", "--k", "0"])), exit::USAGE);
    assert_eq!(code(&nmc(&["compress", s(&input), s(&packed), "--method", "5", "--k", "2"])), exit::USAGE);
    assert_eq!(code(&nmc(&["compress", s(&input), s(&packed), "--method", "3", "--k", "17"])), exit::USAGE);
    assert_eq!(code(&nmc(&["compress", s(&input), s(&packed), "--method", "3", "--k", "4"])), exit::OK);

    let mut bytes = std::fs::read(&packed).unwrap();
    bytes[40] ^= 0x10;
    let corrupt = dir.path().join("corrupt.nmc");
    std::fs::write(&corrupt, &bytes).unwrap();
    assert_eq!(code(&nmc(&["decompress", s(&corrupt), s(&output)])), exit::CRC);

    std::fs::write(&corrupt, b"NOPE and then some").unwrap();
    assert_eq!(code(&nmc(&["decompress", s(&corrupt), s(&output)])), exit::FORMAT);
    let missing = dir.path().join("missing.nmc");
    assert_eq!(code(&nmc(&["decompress", s(&missing), s(&output)])), exit::IO);
    assert_eq!(code(&nmc(&["bench"])), exit::USAGE);
}

#[test]
fn metrics_reports() {
    let dir = TempDir::new().unwrap();
    let a = ImageMatrix::new(4, 4, vec![100; 16]).unwrap();
    let b = ImageMatrix::new(4, 4, vec![101; 16]).unwrap();
    let c = ImageMatrix::new(4, 2, vec![100; 8]).unwrap();
    let (pa, pb, pc) = (save(&dir, "a.pgm", &a), save(&dir, "b.pgm", &b), save(&dir, "c.pgm", &c));
    assert_eq!(stdout(&nmc(&["metrics", s(&pa), s(&pa)])), "MSE: 0.0000\nPSNR: inf\n");
    assert_eq!(stdout(&nmc(&["metrics", s(&pa), s(&pb)])), "MSE: 1.0000\nPSNR: 48.1308\n");
    assert_eq!(code(&nmc(&["metrics", s(&pa), s(&pc)])), exit::USAGE);
}

#[test]
fn cr_table_for_order_512() {
    let expected = "\
k,method1,method2,method3,method4
10,1.9283,1.9211,25.5501,25.5750
20,1.8582,1.8515,12.7750,12.7875
30,1.7930,1.7867,8.5167,8.5250
40,1.7322,1.7264,6.3875,6.3938
50,1.6754,1.6699,5.1100,5.1150
75,1.5485,1.5438,3.4067,3.4100
100,1.4394,1.4354,2.5550,2.5575
150,1.2617,1.2586,1.7033,1.7050
";
    assert_eq!(bench::cr_csv(512, &bench::DEFAULT_KS).unwrap(), expected);
}

#[test]
fn bench_is_deterministic_and_skips_bad_images() {
    let dir = TempDir::new().unwrap();
    let good = save(&dir, "good.pgm", &smooth_image(32, 32, 6));
    let wide = save(&dir, "wide.pgm", &smooth_image(32, 20, 7));
    let run = |out: &str| {
        let mut spec = BenchSpec::new(vec![good.clone(), wide.clone()], dir.path().join(out));
        spec.ks = vec![2, 8, 32];
        let mut log = Vec::new();
        let outcome = bench::run(&spec, &mut log).unwrap();
        assert_eq!(outcome.tables.len(), 1);
        assert_eq!(outcome.failures.len(), 1);
        assert_eq!(outcome.failures[0].1.exit_code(), exit::USAGE);
        let psnr = std::fs::read_to_string(dir.path().join(out).join("psnr_good.csv")).unwrap();
        let cr = std::fs::read_to_string(dir.path().join(out).join("cr.csv")).unwrap();
        (psnr, cr)
    };
    let (psnr, cr) = run("first");
    assert_eq!((psnr.clone(), cr.clone()), run("second"));

    let rows: Vec<&str> = psnr.lines().collect();
    assert_eq!(rows[0], "k,method1,method2,method3,method4");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3], "32,inf,inf,inf,inf", "f32 storage still rounds back at full rank");
    assert_eq!(cr.lines().next(), Some("k,method1,method2,method3,method4"));
}

#[test]
fn bench_leaves_unrequested_methods_empty() {
    let dir = TempDir::new().unwrap();
    let img = save(&dir, "img.pgm", &smooth_image(16, 16, 8));
    let mut spec = BenchSpec::new(vec![img], dir.path().join("out"));
    spec.methods = vec![nmc::MethodId::Skew, nmc::MethodId::Svd];
    spec.ks = vec![4];
    let outcome = bench::run(&spec, &mut Vec::new()).unwrap();
    let line = outcome.tables[0].to_csv().lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells.len(), 5);
    assert!(cells[1].is_empty() && cells[3].is_empty());
    assert!(!cells[2].is_empty() && !cells[4].is_empty());
}

#[test]
fn bench_rejects_empty_image_list() {
    let dir = TempDir::new().unwrap();
    let spec = BenchSpec::new(Vec::new(), dir.path().to_path_buf());
    assert_eq!(bench::run(&spec, &mut Vec::new()).unwrap_err().exit_code(), exit::USAGE);
}
