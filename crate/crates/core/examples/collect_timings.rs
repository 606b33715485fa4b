//! Time the workload loop and look at the raw series.
//!
//! ```text
//! cargo run --release --example collect_timings -- [samples] [scale]
//! ```

use siderand::{collect, detect_timer_resolution, CollectorConfig, Timer};

fn main() -> Result<(), siderand::Error> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(256);
    let scale = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(5_000_000);

    for timer in [Timer::ProcessCpuNanoseconds, Timer::WallMicroseconds] {
        match detect_timer_resolution(timer) {
            Ok(ns) => println!("{timer} clock: resolution {ns} ns"),
            Err(e) => println!("{timer} clock: {e}"),
        }
    }

    let config = CollectorConfig {
        samples,
        scale,
        ..CollectorConfig::default()
    };
    let series = collect(&config)?;
    let durations: Vec<u64> = series.durations().collect();
    let min = durations.iter().min().unwrap();
    let max = durations.iter().max().unwrap();
    println!(
        "{} samples of {scale} additions in {:.2?}; min {min} ns, max {max} ns",
        series.len(),
        series.elapsed().unwrap_or_default()
    );
    println!(
        "first eight, in collection order: {:?}",
        &durations[..durations.len().min(8)]
    );
    for w in series.warnings() {
        println!("warning: {w}");
    }
    Ok(())
}
