mod common;

use std::path::Path;
use std::process::{Command, Output};

use zetacorr::report::{parse_corr_csv, CorrCheckpoint};

fn zetacorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetacorr"))
        .args(args)
        .env_remove("ZETACORR_DATA_DIR")
        .output()
        .expect("spawn zetacorr")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn corr_small_run() {
    let out = stdout(&zetacorr(&["corr", "--kind", "mobius", "--n-max", "1000", "--stride", "100"]));
    let rows = parse_corr_csv(&out).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.raw_sum < 0.0));
    assert_eq!(rows[9].n_or_t, 1000.0);
}

#[test]
fn exit_statuses() {
    assert_eq!(zetacorr(&["corr", "--n-max", "1"]).status.code(), Some(2));
    assert_eq!(zetacorr(&["corr", "--n-max", "100", "--stride", "0"]).status.code(), Some(2));
    assert_eq!(zetacorr(&["zerosums"]).status.code(), Some(2));
    assert_eq!(zetacorr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zetacorr(&["zerosums", "--zeros", "/nonexistent/zeros.csv"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "index,gamma,zeta_prime_re,zeta_prime_im\n1,14.134725141734694,0.0,0.0\n").unwrap();
    assert_eq!(zetacorr(&["zerosums", "--zeros", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn constants_listing() {
    let out = stdout(&zetacorr(&["constants"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "name,value");
    assert_eq!(lines.len(), 5);
    let value = |name: &str| -> f64 {
        lines.iter().find(|l| l.starts_with(name)).unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((value("minus_three_over_pi_sq") + 0.303_963_6).abs() < 1e-7);
    assert!((value("liouville_bias_const") + 0.2655).abs() < 1e-4);
}

#[test]
fn json_output_mirrors_csv() {
    let csv = stdout(&zetacorr(&["corr", "--kind", "liouville", "--n-max", "5000", "--stride", "1000"]));
    let json = stdout(&zetacorr(&["corr", "--kind", "liouville", "--n-max", "5000", "--stride", "1000", "--format", "json"]));
    let rows = parse_corr_csv(&csv).unwrap();
    let objs: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), objs.len());
    for (r, o) in rows.iter().zip(&objs) {
        assert_eq!(o["n"].as_f64().unwrap(), r.n_or_t);
        assert_eq!(o["raw_sum"].as_f64().unwrap(), r.raw_sum);
        assert_eq!(o["normalized"].as_f64().unwrap(), r.normalized);
        assert_eq!(o["reference_line"].as_f64(), r.reference_line);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = |t: &'static str| ["corr", "--kind", "mobius", "--n-max", "3000000", "--stride", "100000", "--threads", t];
    let one = stdout(&zetacorr(&args("1")));
    let eight = stdout(&zetacorr(&args("8")));
    assert_eq!(one, eight);
    let zs = common::zero_fixture(2000);
    let zs = zs.to_str().unwrap();
    let a = stdout(&zetacorr(&["zerosums", "--zeros", zs, "--stride", "250", "--threads", "1"]));
    let b = stdout(&zetacorr(&["zerosums", "--zeros", zs, "--stride", "250", "--threads", "8"]));
    assert_eq!(a, b);
}

fn checkpoint_n(path: &Path) -> u64 {
    CorrCheckpoint::load(path).unwrap().n
}

#[test]
fn resume_from_checkpoint_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("run.json");
    let cp = cp.to_str().unwrap();
    let full = stdout(&zetacorr(&["corr", "--kind", "liouville", "--n-max", "3000000", "--stride", "50000"]));
    let first = stdout(&zetacorr(&[
        "corr", "--kind", "liouville", "--n-max", "1000000", "--stride", "50000", "--checkpoint", cp,
    ]));
    assert_eq!(checkpoint_n(Path::new(cp)), 1_000_000);
    assert!(full.starts_with(&first));
    let resumed = stdout(&zetacorr(&[
        "corr", "--kind", "liouville", "--n-max", "3000000", "--stride", "50000", "--checkpoint", cp, "--resume",
    ]));
    assert_eq!(resumed, full);
    assert_eq!(checkpoint_n(Path::new(cp)), 3_000_000);
    // a different stride must not silently reuse the state
    let clash = zetacorr(&[
        "corr", "--kind", "liouville", "--n-max", "3000000", "--stride", "1000", "--checkpoint", cp, "--resume",
    ]);
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn zerosums_and_reconstruct_from_data_dir() {
    let path = common::zero_fixture(2000);
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(&path, dir.path().join("zeros.csv")).unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_zetacorr"))
            .args(args)
            .env("ZETACORR_DATA_DIR", dir.path())
            .output()
            .unwrap()
    };
    let out = stdout(&run(&["zerosums", "--stride", "500"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,count,sum_A,sum_B,sum_C,J_minus_1");
    assert_eq!(lines.len(), 1 + 4);
    let counts: Vec<u64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(counts, [500, 1000, 1500, 2000]);
    assert!(lines[1..].iter().all(|l| !l.split(',').nth(3).unwrap().is_empty()));
    let skipped = stdout(&run(&["zerosums", "--stride", "500", "--skip-sum-b"]));
    assert!(skipped.lines().skip(1).all(|l| l.split(',').nth(3).unwrap().is_empty()));

    let out = stdout(&run(&["reconstruct", "--n-max", "20"]));
    for line in out.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[2].round(), f[1], "{line}");
    }
}

#[test]
fn selftest_passes() {
    let out = stdout(&zetacorr(&["selftest"]));
    assert!(out.starts_with("suite,passed,failed\n"));
    for line in out.lines().skip(1) {
        assert!(line.ends_with(",0"), "{line}");
    }
}

#[test]
fn out_file_and_sieve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu.csv");
    let o = zetacorr(&["sieve", "--kind", "mobius", "--n-max", "10000", "--stride", "10000", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "n,value,summatory\n10000,0,-23\n");
}
