use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use tfsqueeze::mwt::mwt;
use tfsqueeze::tfr::{read_signal_csv_file, read_tfr_file, TfrPayload};
use tfsqueeze::wavelet::{make_scale_grid, WaveletSpec, Weight};

fn tfsqueeze(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfsqueeze"))
        .current_dir(dir)
        .env_remove("TFSQUEEZE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tfsqueeze(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn dirac(dir: &Path) -> PathBuf {
    ok(
        dir,
        &[
            "gen", "dirac", "--t0", "0.5", "--fs", "200", "--len", "200", "--out", "d.csv",
        ],
    );
    dir.join("d.csv")
}

#[test]
fn dirac_wtsst_lands_in_column_100() {
    let dir = TempDir::new().unwrap();
    dirac(dir.path());
    let stdout = ok(
        dir.path(),
        &["transform", "wtsst", "--input", "d.csv", "--out", "d.tfr"],
    );
    assert!(stdout.contains("conservation residual"));
    let data = read_tfr_file(dir.path().join("d.tfr")).unwrap();
    assert_eq!((data.rows, data.cols), (100, 200));
    let mags = data.magnitudes();
    let total: f64 = mags.iter().map(|m| m * m).sum();
    let col: f64 = (0..data.rows)
        .map(|k| mags[k * data.cols + 100].powi(2))
        .sum();
    assert!(col / total > 0.999, "column 100 holds {}", col / total);
}

#[test]
fn thread_count_never_changes_output_bytes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "twomode", "--fs", "512", "--len", "512", "--snr-db", "10", "--seed", "3",
            "--out", "x.csv",
        ],
    );
    for method in ["wtsst", "wtmsst", "rm"] {
        ok(
            d,
            &[
                "--threads",
                "1",
                "transform",
                method,
                "--input",
                "x.csv",
                "--out",
                "one.tfr",
            ],
        );
        ok(
            d,
            &[
                "transform",
                method,
                "--threads",
                "8",
                "--input",
                "x.csv",
                "--out",
                "eight.tfr",
            ],
        );
        let env = Command::new(env!("CARGO_BIN_EXE_tfsqueeze"))
            .current_dir(d)
            .env("TFSQUEEZE_THREADS", "3")
            .args(["transform", method, "--input", "x.csv", "--out", "env.tfr"])
            .output()
            .unwrap();
        assert!(env.status.success());
        let one = std::fs::read(d.join("one.tfr")).unwrap();
        assert_eq!(one, std::fs::read(d.join("eight.tfr")).unwrap(), "{method}");
        assert_eq!(one, std::fs::read(d.join("env.tfr")).unwrap(), "{method}");
    }
}

#[test]
fn mwt_file_reads_back_to_the_in_memory_matrix() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "chirp", "--fs", "200", "--len", "256", "--beta1", "-0.6", "--beta2", "-0.001",
            "--out", "c.csv",
        ],
    );
    ok(
        d,
        &[
            "transform",
            "mwt",
            "--input",
            "c.csv",
            "--out",
            "c.tfr",
            "--k-min",
            "4",
        ],
    );
    let x = read_signal_csv_file(d.join("c.csv")).unwrap();
    let spec = WaveletSpec::default();
    let grid = make_scale_grid(x.len(), x.sample_rate_hz(), &spec, 4).unwrap();
    let w = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
    let back = read_tfr_file(d.join("c.tfr"))
        .unwrap()
        .into_matrix(&spec, None)
        .unwrap();
    assert_eq!(back, w);
}

#[test]
fn rm_is_stored_as_real_energy() {
    let dir = TempDir::new().unwrap();
    dirac(dir.path());
    ok(
        dir.path(),
        &["transform", "rm", "--input", "d.csv", "--out", "r.tfr"],
    );
    let data = read_tfr_file(dir.path().join("r.tfr")).unwrap();
    match data.payload {
        TfrPayload::Real(v) => assert!(v.iter().all(|&e| e >= 0.0)),
        TfrPayload::Complex(_) => panic!("rm should be written as a real matrix"),
    }
}

#[test]
fn reconstruction_is_written_and_scored() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen",
            "chirp",
            "--fs",
            "200",
            "--len",
            "512",
            "--beta1",
            "-1.2",
            "--beta2",
            "-0.0005",
            "--amp-center-hz",
            "40",
            "--amp-width-hz",
            "8",
            "--out",
            "c.csv",
        ],
    );
    let stdout = ok(
        d,
        &[
            "transform",
            "wtmsst",
            "--iters",
            "4",
            "--input",
            "c.csv",
            "--out",
            "s.tfr",
            "--reconstruct",
            "y.csv",
        ],
    );
    assert!(stdout.contains("rel_l2"));
    let report = ok(
        d,
        &[
            "metrics",
            "recon-error",
            "--reference",
            "c.csv",
            "--input",
            "y.csv",
        ],
    );
    let rel: f64 = report
        .split_whitespace()
        .nth(2)
        .and_then(|v| v.trim_end_matches(',').parse().ok())
        .expect("rel_l2 value");
    assert!(rel < 2e-2, "rel_l2 = {rel}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    dirac(d);

    let missing_fs = tfsqueeze(
        d,
        &[
            "gen", "dirac", "--t0", "0.5", "--len", "200", "--out", "x.csv",
        ],
    );
    assert_eq!(code(&missing_fs), 2);

    let bad_t0 = tfsqueeze(
        d,
        &[
            "gen", "dirac", "--t0", "3", "--fs", "200", "--len", "200", "--out", "x.csv",
        ],
    );
    assert_eq!(code(&bad_t0), 2);

    let exp = tfsqueeze(
        d,
        &[
            "transform",
            "wtmsst",
            "--iters",
            "10",
            "--iter-mode",
            "exp",
            "--input",
            "d.csv",
            "--out",
            "x.tfr",
        ],
    );
    assert_eq!(code(&exp), 2);
    assert!(String::from_utf8_lossy(&exp.stderr).contains("linear"));
    assert!(!d.join("x.tfr").exists());

    let exp8 = tfsqueeze(
        d,
        &[
            "transform",
            "wtmsst",
            "--iters",
            "8",
            "--iter-mode",
            "exp",
            "--input",
            "d.csv",
            "--out",
            "x.tfr",
        ],
    );
    assert_eq!(code(&exp8), 0);

    let no_input = tfsqueeze(
        d,
        &[
            "transform",
            "wtsst",
            "--input",
            "nope.csv",
            "--out",
            "x.tfr",
        ],
    );
    assert_eq!(code(&no_input), 1);

    let k_min = tfsqueeze(
        d,
        &[
            "transform",
            "mwt",
            "--input",
            "d.csv",
            "--out",
            "x.tfr",
            "--k-min",
            "100",
        ],
    );
    assert_eq!(code(&k_min), 2);

    let zero_threads = tfsqueeze(
        d,
        &[
            "--threads",
            "0",
            "transform",
            "mwt",
            "--input",
            "d.csv",
            "--out",
            "x.tfr",
        ],
    );
    assert_eq!(code(&zero_threads), 2);

    std::fs::write(d.join("empty.tfr"), b"").unwrap();
    let empty = tfsqueeze(
        d,
        &[
            "metrics",
            "entropy",
            "--input",
            "empty.tfr",
            "--out",
            "e.csv",
        ],
    );
    assert_eq!(code(&empty), 1);

    ok(
        d,
        &["transform", "mwt", "--input", "d.csv", "--out", "w.tfr"],
    );
    let mut bytes = std::fs::read(d.join("w.tfr")).unwrap();
    bytes[28] = 9;
    std::fs::write(d.join("bad.tfr"), &bytes).unwrap();
    let corrupt = tfsqueeze(d, &["render", "--input", "bad.tfr", "--out", "x.png"]);
    assert_eq!(code(&corrupt), 1);
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("kind"));

    let short = tfsqueeze(
        d,
        &[
            "metrics",
            "recon-error",
            "--reference",
            "d.csv",
            "--input",
            "empty.tfr",
        ],
    );
    assert_eq!(code(&short), 1);

    assert_eq!(code(&tfsqueeze(d, &["frobnicate"])), 2);
    assert_eq!(code(&tfsqueeze(d, &["--help"])), 0);
}

#[test]
fn help_lists_defaults() {
    let dir = TempDir::new().unwrap();
    let transform = ok(dir.path(), &["transform", "--help"]);
    for needle in [
        "[default: 6]",
        "[default: 1]",
        "[default: 0.001]",
        "[default: relative]",
    ] {
        assert!(transform.contains(needle), "missing {needle}");
    }
    let entropy = ok(dir.path(), &["metrics", "entropy", "--help"]);
    assert!(entropy.contains("[default: 3]"));
}

#[test]
fn dirac_render_is_a_vertical_line() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    dirac(d);
    // below 8 Hz the window is longer than the 1 s record and wraps around
    ok(
        d,
        &[
            "transform",
            "wtsst",
            "--input",
            "d.csv",
            "--out",
            "d.tfr",
            "--k-min",
            "8",
        ],
    );
    ok(
        d,
        &[
            "render",
            "--input",
            "d.tfr",
            "--out",
            "d.png",
            "--colormap",
            "gray",
        ],
    );
    let file = std::fs::File::open(d.join("d.png")).unwrap();
    let mut reader = png::Decoder::new(file).read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).unwrap();
    assert_eq!((info.width, info.height), (200, 93));
    let text = &reader.info().uncompressed_latin1_text;
    assert!(text
        .iter()
        .any(|t| t.keyword == "y_axis" && t.text.contains("Hz")));
    let width = info.width as usize;
    let (mut band, mut total) = (0.0, 0.0);
    for (i, px) in buf[..info.buffer_size()].chunks(3).enumerate() {
        let v = px[0] as f64;
        total += v;
        if (i % width).abs_diff(100) <= 1 {
            band += v;
        }
    }
    assert!(band / total > 0.999, "band holds {}", band / total);

    ok(
        d,
        &[
            "render",
            "--input",
            "d.tfr",
            "--out",
            "log.png",
            "--scale",
            "log",
            "--colormap",
            "hot",
        ],
    );
}

#[test]
fn entropy_single_and_sweep() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    dirac(d);
    ok(
        d,
        &["transform", "wtsst", "--input", "d.csv", "--out", "d.tfr"],
    );
    ok(
        d,
        &[
            "metrics", "entropy", "--input", "d.tfr", "--out", "one.csv", "--label", "wtsst",
        ],
    );
    let one = std::fs::read_to_string(d.join("one.csv")).unwrap();
    assert!(one.starts_with("method,snr_db,alpha,entropy\nwtsst,,3,"));

    ok(
        d,
        &[
            "metrics",
            "entropy",
            "--sweep-snr",
            "10,20",
            "--trials",
            "2",
            "--seed",
            "7",
            "--len",
            "256",
            "--iters",
            "4",
            "--out",
            "sweep.csv",
        ],
    );
    let sweep = std::fs::read_to_string(d.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = sweep.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[3].starts_with("wtmsst(N=4),10,3,"));
}

#[test]
fn snr_ranges() {
    use tfsqueeze::cli::parse_snr_list;
    assert_eq!(
        parse_snr_list("1:30").unwrap(),
        vec![1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    );
    assert_eq!(parse_snr_list("0:20:10").unwrap(), vec![0.0, 10.0, 20.0]);
    assert_eq!(
        parse_snr_list("1,5,10,20,30").unwrap(),
        vec![1.0, 5.0, 10.0, 20.0, 30.0]
    );
    assert_eq!(parse_snr_list("-5:0").unwrap(), vec![-5.0, 0.0]);
    assert!(parse_snr_list("30:1").is_err());
    assert!(parse_snr_list("a,b").is_err());
}

#[test]
fn tfes_on_a_pulse_train() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gen = ok(
        d,
        &[
            "gen",
            "pulses",
            "--period-ms",
            "9.3",
            "--fs",
            "25600",
            "--len",
            "4096",
            "--out",
            "p.csv",
        ],
    );
    assert!(gen.contains("pulses"));
    ok(
        d,
        &[
            "transform",
            "wtmsst",
            "--iters",
            "4",
            "--k-min",
            "100",
            "--k-max",
            "400",
            "--input",
            "p.csv",
            "--out",
            "p.tfr",
        ],
    );
    let report = ok(
        d,
        &[
            "metrics",
            "tfes",
            "--input",
            "p.tfr",
            "--k-min",
            "100",
            "--out",
            "tfes.csv",
            "--intervals",
            "iv.csv",
        ],
    );
    assert!(report.contains("best row"));
    let tfes = std::fs::read_to_string(d.join("tfes.csv")).unwrap();
    assert_eq!(tfes.lines().count(), 1 + 301);
    let iv = std::fs::read_to_string(d.join("iv.csv")).unwrap();
    let intervals: Vec<f64> = iv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(!intervals.is_empty());
    for v in intervals {
        assert!((v * 25600.0 - 238.0).abs() <= 1.0, "interval {v}");
    }
}
