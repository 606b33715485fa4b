//! Find how few samples a machine needs, then collect only that many.
//!
//! ```text
//! cargo run --release --example calibrate -- [floor bits]
//! ```

use siderand::{
    calibrate_samples, collect, frequency_distribution, min_entropy_estimate, CollectorConfig,
    DEFAULT_FLOOR_BITS,
};

fn main() -> Result<(), siderand::Error> {
    let floor = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_FLOOR_BITS);

    let probe = collect(&CollectorConfig::default())?;
    let estimate = min_entropy_estimate(&frequency_distribution(&probe)?);
    let samples = match calibrate_samples(estimate.mfv_fraction, floor) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("cannot calibrate: {e}");
            std::process::exit(1);
        }
    };
    println!(
        "probe: MFV {:.5}%, {:.2} bits in {:.2?}; recommended samples for {floor} bits: {samples}",
        estimate.mfv_percent(),
        estimate.total_bits,
        probe.elapsed().unwrap_or_default()
    );

    let tuned = collect(&CollectorConfig {
        samples: samples as usize,
        ..CollectorConfig::default()
    })?;
    let tuned_estimate = min_entropy_estimate(&frequency_distribution(&tuned)?);
    println!(
        "tuned run: {} samples, {:.2} bits in {:.2?}",
        tuned.len(),
        tuned_estimate.total_bits,
        tuned.elapsed().unwrap_or_default()
    );
    Ok(())
}
