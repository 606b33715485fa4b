//! Collect a series and condition it into a 256-bit seed, refusing when the
//! MFV estimate misses the floor.
//!
//! ```text
//! cargo run --release --example condition_seed
//! ```

use siderand::{
    collect, condition, frequency_distribution, meets_entropy_floor, min_entropy_estimate,
    serialize_series, CollectorConfig, DEFAULT_FLOOR_BITS,
};

fn main() -> Result<(), siderand::Error> {
    let series = collect(&CollectorConfig::default())?;
    let estimate = min_entropy_estimate(&frequency_distribution(&series)?);
    println!(
        "MFV {:.5}% -> {:.2} bits over {} samples",
        estimate.mfv_percent(),
        estimate.total_bits,
        estimate.sample_count
    );
    if !meets_entropy_floor(&estimate, DEFAULT_FLOOR_BITS) {
        eprintln!("below the {DEFAULT_FLOOR_BITS} bit floor; not producing a seed");
        std::process::exit(1);
    }

    println!(
        "hashing {} serialized bytes",
        serialize_series(&series)?.len()
    );
    let seed = condition(&series)?;
    println!("{seed:?} (Debug never shows the bytes)");
    println!("{}", seed.to_hex());
    Ok(())
}
