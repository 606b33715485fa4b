//! Frequency distributions and the most-frequent-value (MFV) min-entropy bound.
//!
//! If the most common duration occupies a fraction `p` of a series, no value
//! can be more likely than `p`, so each sample carries at least
//! `log2(1 / p)` bits and a series of `n` samples at least `n * log2(1 / p)`.

use std::collections::BTreeMap;

use crate::collector::{Timer, TimingSeries};
use crate::error::{Error, Result};

/// Entropy a seed must carry before it is considered usable.
pub const DEFAULT_FLOOR_BITS: f64 = 256.0;

/// [`calibrate_samples`] targets this multiple of the floor so that drift in
/// the MFV between runs does not drop a shortened run below the floor.
pub const CALIBRATION_SAFETY_MARGIN: f64 = 2.0;

/// Exact occurrence counts of each distinct duration, keyed in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn from_durations(durations: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total = 0u64;
        for d in durations {
            *counts.entry(d).or_insert(0u64) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::EmptySeries);
        }
        Ok(Self { counts, total })
    }

    /// Builds a table from explicit counts. Every count must be at least one.
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((value, _)) = counts.iter().find(|(_, &c)| c == 0) {
            return Err(Error::InvalidArgument {
                what: "frequency table",
                reason: format!("value {value} has a zero count"),
            });
        }
        let total = counts.values().sum();
        Ok(Self { counts, total })
    }

    /// `(duration, count)` pairs in ascending duration order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn count(&self, duration: u64) -> u64 {
        self.counts.get(&duration).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn unique_values(&self) -> usize {
        self.counts.len()
    }

    /// Count of the most frequent value. Ties do not matter.
    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

pub fn frequency_distribution(series: &TimingSeries) -> Result<FrequencyTable> {
    FrequencyTable::from_durations(series.durations())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    /// Share of the series taken by its most frequent value, in (0, 1].
    pub mfv_fraction: f64,
    /// Equiprobable states guaranteed by the MFV, `1 / mfv_fraction`.
    pub states: f64,
    pub bits_per_sample: f64,
    pub total_bits: f64,
    pub sample_count: u64,
    pub unique_values: u64,
}

impl EntropyEstimate {
    /// Estimate from an already known MFV fraction, e.g. a published one.
    pub fn from_mfv_fraction(
        mfv_fraction: f64,
        sample_count: u64,
        unique_values: u64,
    ) -> Result<Self> {
        if !(mfv_fraction > 0.0 && mfv_fraction <= 1.0) {
            return Err(Error::InvalidArgument {
                what: "mfv fraction",
                reason: format!("{mfv_fraction} is outside (0, 1]"),
            });
        }
        if sample_count == 0 {
            return Err(Error::EmptySeries);
        }
        Ok(Self::from_parts(
            mfv_fraction,
            1.0 / mfv_fraction,
            sample_count,
            unique_values,
        ))
    }

    fn from_parts(mfv_fraction: f64, states: f64, sample_count: u64, unique_values: u64) -> Self {
        let bits_per_sample = states.log2();
        Self {
            mfv_fraction,
            states,
            bits_per_sample,
            total_bits: bits_per_sample * sample_count as f64,
            sample_count,
            unique_values,
        }
    }

    pub fn mfv_percent(&self) -> f64 {
        self.mfv_fraction * 100.0
    }
}

/// MFV estimate computed from exact integer counts.
pub fn min_entropy_estimate(table: &FrequencyTable) -> EntropyEstimate {
    let max = table.max_count();
    let total = table.total();
    // total / max rather than 1 / (max / total): exact when every value is distinct.
    EntropyEstimate::from_parts(
        max as f64 / total as f64,
        total as f64 / max as f64,
        total,
        table.unique_values() as u64,
    )
}

/// Inclusive comparison against the floor.
pub fn meets_entropy_floor(estimate: &EntropyEstimate, floor_bits: f64) -> bool {
    estimate.total_bits >= floor_bits
}

/// Smallest sample count whose MFV bound reaches the floor times
/// [`CALIBRATION_SAFETY_MARGIN`], never less than one.
pub fn calibrate_samples(observed_mfv_fraction: f64, floor_bits: f64) -> Result<u64> {
    if observed_mfv_fraction >= 1.0 {
        return Err(Error::DegenerateDistribution {
            mfv_fraction: observed_mfv_fraction,
        });
    }
    if observed_mfv_fraction.is_nan() || observed_mfv_fraction <= 0.0 {
        return Err(Error::InvalidArgument {
            what: "mfv fraction",
            reason: format!("{observed_mfv_fraction} is not positive"),
        });
    }
    if !floor_bits.is_finite() || floor_bits < 0.0 {
        return Err(Error::InvalidArgument {
            what: "floor",
            reason: format!("{floor_bits} is not a non-negative number of bits"),
        });
    }
    let bits = (1.0 / observed_mfv_fraction).log2();
    let target = floor_bits * CALIBRATION_SAFETY_MARGIN;
    let mut n = ((target / bits).ceil() as u64).max(1);
    // The division may land one off either way; settle on exact products.
    while n > 1 && (n - 1) as f64 * bits >= target {
        n -= 1;
    }
    while (n as f64) * bits < target {
        n += 1;
    }
    Ok(n)
}

/// One row in the style of a benchmark results table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub cpu_label: String,
    pub timer: Timer,
    /// Full precision; rounded only when rendered.
    pub mfv_percent: f64,
    pub total_bits: f64,
    pub avg_run_seconds: f64,
    pub unique_values: u64,
    pub sample_count: u64,
    pub floor_bits: f64,
    pub meets_floor: bool,
    /// Protocol deviations such as a refused priority boost.
    pub warnings: Vec<String>,
}

pub fn build_report(
    series: &TimingSeries,
    estimate: &EntropyEstimate,
    elapsed_seconds: f64,
    cpu_label: &str,
    floor_bits: f64,
) -> RunReport {
    RunReport {
        cpu_label: cpu_label.to_owned(),
        timer: series.timer(),
        mfv_percent: estimate.mfv_percent(),
        total_bits: estimate.total_bits,
        avg_run_seconds: elapsed_seconds,
        unique_values: estimate.unique_values,
        sample_count: estimate.sample_count,
        floor_bits,
        meets_floor: meets_entropy_floor(estimate, floor_bits),
        warnings: series.warnings(),
    }
}
