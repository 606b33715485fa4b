//! Save a series as CSV, read it back (CRLF files from the original C
//! collector work too) and audit it offline.
//!
//! ```text
//! cargo run --release --example replay_csv -- [path]
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};

use siderand::timing_csv::{read_timings, write_timings};
use siderand::{collect, condition, frequency_distribution, CollectorConfig, Timer, TimingSeries};

fn main() -> Result<(), siderand::Error> {
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("siderand-replay.csv"));

    let series = collect(&CollectorConfig {
        scale: 1_000_000,
        ..CollectorConfig::default()
    })?;
    write_timings(BufWriter::new(File::create(&path)?), series.durations())?;
    println!("wrote {} samples to {}", series.len(), path.display());

    let durations = read_timings(BufReader::new(File::open(&path)?))?;
    let replayed = TimingSeries::replayed(durations, Timer::ProcessCpuNanoseconds)?;
    assert_eq!(condition(&replayed)?, condition(&series)?);

    let table = frequency_distribution(&replayed)?;
    println!("{} unique values; five most common:", table.unique_values());
    let mut by_count: Vec<(u64, u64)> = table.iter().collect();
    by_count.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (value, count) in by_count.into_iter().take(5) {
        println!("  {value:>12} ns  x{count}");
    }
    println!("replayed seed matches the live one");
    Ok(())
}
