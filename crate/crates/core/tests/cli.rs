use std::path::Path;
use std::process::{Command, Output};

use siderand::timing_csv::read_timings;
use siderand::{condition, Timer, TimingSeries};

fn siderand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siderand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_csv(dir: &Path, name: &str, values: &[u64], crlf: bool) -> String {
    let eol = if crlf { "\r\n" } else { "\n" };
    let text: String = values.iter().map(|v| format!("{v}{eol}")).collect();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

/// 256 lines, 51 of them the same value (19.9%), the rest distinct.
fn twenty_percent_series() -> Vec<u64> {
    let mut v: Vec<u64> = (0..205).map(|i| 10_000 + i * 13).collect();
    for i in 0..51 {
        v.insert(i * 5, 777);
    }
    v
}

#[test]
fn collect_writes_sample_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = siderand(&[
        "collect",
        "--samples",
        "4",
        "--scale",
        "1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let values = read_timings(std::fs::read(&out).unwrap().as_slice()).unwrap();
    assert_eq!(values.len(), 4);
}

#[test]
fn collect_microsecond_values() {
    let o = siderand(&[
        "collect",
        "--samples",
        "16",
        "--scale",
        "200000",
        "--timer",
        "us",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let values = read_timings(o.stdout.as_slice()).unwrap();
    assert_eq!(values.len(), 16);
    assert!(values.iter().all(|v| v % 1000 == 0));
}

#[test]
fn analyze_twenty_percent() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_csv(dir.path(), "mfv20.csv", &twenty_percent_series(), false);
    let o = siderand(&["analyze", "--in", &csv, "--label", "synthetic"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("synthetic"));
    assert!(text.contains("19.92188%"), "{text}");

    let o = siderand(&["analyze", "--in", &csv, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let bits = v["entropy_bits"].as_f64().unwrap();
    assert!(((bits - 594.4) / 594.4).abs() < 0.005, "{bits}");
    assert_eq!(v["meets_floor"], true);
    assert_eq!(v["label"], "mfv20");
}

#[test]
fn analyze_constant_series_fails_floor() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_csv(dir.path(), "flat.csv", &[1234; 256], true);
    let o = siderand(&["analyze", "--in", &csv]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("0.00"));
    assert!(text.contains("BELOW FLOOR"));
}

#[test]
fn analyze_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "12\n13\nfourteen\n").unwrap();
    let o = siderand(&["analyze", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let o = siderand(&["analyze", "--in", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn seed_replay_is_deterministic_and_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let values = twenty_percent_series();
    let csv = write_csv(dir.path(), "s.csv", &values, true);
    let a = siderand(&["seed", "--from-csv", &csv]);
    let b = siderand(&["seed", "--from-csv", &csv]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let hex = String::from_utf8(a.stdout).unwrap();
    let expected =
        condition(&TimingSeries::replayed(values, Timer::ProcessCpuNanoseconds).unwrap())
            .unwrap()
            .to_hex();
    assert_eq!(hex.trim_end(), expected);
    assert_eq!(hex.trim_end().len(), 64);
}

#[test]
fn seed_floor_gate() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write_csv(dir.path(), "flat.csv", &[5; 256], false);
    let o = siderand(&["seed", "--from-csv", &csv]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = siderand(&["seed", "--from-csv", &csv, "--force"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim_end().len(), 64);
}

#[test]
fn live_seed() {
    let o = siderand(&["seed", "--samples", "256", "--scale", "200000"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let hex = String::from_utf8(o.stdout).unwrap();
    assert_eq!(hex.trim_end().len(), 64);
    assert!(hex
        .trim_end()
        .bytes()
        .all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()));
}

#[test]
fn random_with_fixed_seed() {
    let zeros = "0".repeat(64);
    let o = siderand(&["random", "--bytes", "32", "--seed-hex", &zeros]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        hex::encode(&o.stdout),
        "dc95c078a2408989ad48a21492842087530f8afbc74536b9a963b4f1c4cb738b"
    );
    let o = siderand(&["random", "--bytes", "0", "--seed-hex", &zeros]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let a = siderand(&[
        "random",
        "--bytes",
        "100000",
        "--seed-hex",
        &"ab".repeat(32),
    ]);
    let b = siderand(&[
        "random",
        "--bytes",
        "100000",
        "--seed-hex",
        &"ab".repeat(32),
    ]);
    assert_eq!(a.stdout.len(), 100_000);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn random_requires_bytes() {
    let o = siderand(&["random", "--seed-hex", &"0".repeat(64)]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn calibrate_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    // 20 of 100 lines share one value: MFV exactly 20%.
    let mut values: Vec<u64> = (1..=80).collect();
    values.extend([500; 20]);
    let csv = write_csv(dir.path(), "c.csv", &values, false);
    let o = siderand(&["calibrate", "--in", &csv, "--floor", "256"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "221");
    assert!(String::from_utf8_lossy(&o.stderr).contains("20.00000%"));

    let o = siderand(&["calibrate", "--in", &csv, "--floor", "0"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "1");

    let flat = write_csv(dir.path(), "flat.csv", &[9; 50], false);
    let o = siderand(&["calibrate", "--in", &flat]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn calibrate_live() {
    let o = siderand(&["calibrate", "--samples", "128", "--scale", "100000"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let n: u64 = String::from_utf8(o.stdout).unwrap().trim().parse().unwrap();
    assert!(n >= 1);
}
