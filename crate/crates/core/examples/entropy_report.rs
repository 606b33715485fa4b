//! Estimate the MFV min-entropy of a live run and print it next to rows
//! rebuilt from published MFV percentages.
//!
//! ```text
//! cargo run --release --example entropy_report
//! ```

use siderand::report::render_table;
use siderand::{
    build_report, collect, frequency_distribution, min_entropy_estimate, CollectorConfig,
    EntropyEstimate, RunReport, Timer, TimingSeries, DEFAULT_FLOOR_BITS,
};

const PUBLISHED: [(&str, Timer, f64, f64); 4] = [
    (
        "Cortex A53 (RPi 3)",
        Timer::ProcessCpuNanoseconds,
        1.29154,
        13.00,
    ),
    (
        "Cortex A53 (RPi 3)",
        Timer::WallMicroseconds,
        14.22320,
        13.00,
    ),
    ("i7 7700K", Timer::ProcessCpuNanoseconds, 0.00049, 2.80),
    ("i7 7700K", Timer::WallMicroseconds, 0.15527, 2.80),
];

fn main() -> Result<(), siderand::Error> {
    let mut rows: Vec<RunReport> = Vec::new();
    for (label, timer, mfv_percent, seconds) in PUBLISHED {
        let estimate = EntropyEstimate::from_mfv_fraction(mfv_percent / 100.0, 256, 0)?;
        // Only the timer of the placeholder series matters here.
        let placeholder = TimingSeries::replayed([0], timer)?;
        rows.push(build_report(
            &placeholder,
            &estimate,
            seconds,
            label,
            DEFAULT_FLOOR_BITS,
        ));
    }

    for timer in [Timer::ProcessCpuNanoseconds, Timer::WallMicroseconds] {
        let series = collect(&CollectorConfig {
            timer,
            ..CollectorConfig::default()
        })?;
        let table = frequency_distribution(&series)?;
        let estimate = min_entropy_estimate(&table);
        let elapsed = series.elapsed().unwrap_or_default().as_secs_f64();
        rows.push(build_report(
            &series,
            &estimate,
            elapsed,
            &siderand::cli::host_cpu_label(),
            DEFAULT_FLOOR_BITS,
        ));
    }

    print!("{}", render_table(&rows));
    Ok(())
}
