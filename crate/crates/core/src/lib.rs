//! Entropy from the timing jitter of a trivial CPU workload.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. [`collector`] times `scale` iterations of one addition, `samples`
//!    times, with a per-process CPU clock. The ordered runtimes are the raw
//!    entropy.
//! 2. [`analysis`] counts how often each runtime occurs and bounds the
//!    min-entropy by the most frequent value (MFV): a value seen in a fraction
//!    `p` of samples leaves at least `log2(1/p)` bits per sample.
//! 3. [`conditioning`] hashes the ordered series with SHA-256 into a
//!    [`Seed256`].
//! 4. [`generator`] expands a seed into an unbounded AES-256-CTR stream with
//!    fast key erasure.
//!
//! ```no_run
//! use siderand::{collect, condition, frequency_distribution, min_entropy_estimate};
//! use siderand::{CollectorConfig, StreamState, DEFAULT_FLOOR_BITS};
//!
//! let series = collect(&CollectorConfig::default())?;
//! let estimate = min_entropy_estimate(&frequency_distribution(&series)?);
//! assert!(estimate.total_bits >= DEFAULT_FLOOR_BITS);
//!
//! let seed = condition(&series)?;
//! let mut stream = StreamState::new(&seed);
//! let key_material = stream.fill(64);
//! # let _ = key_material;
//! # Ok::<(), siderand::Error>(())
//! ```
//!
//! The `siderand` binary wraps the same steps; see [`cli`].

pub mod analysis;
pub mod cli;
pub mod collector;
pub mod conditioning;
mod error;
pub mod generator;
pub mod report;
pub mod timing_csv;

pub use analysis::{
    build_report, calibrate_samples, frequency_distribution, meets_entropy_floor,
    min_entropy_estimate, EntropyEstimate, FrequencyTable, RunReport, DEFAULT_FLOOR_BITS,
};
pub use collector::{
    collect, detect_timer_resolution, CollectorConfig, PriorityStatus, Timer, TimingSample,
    TimingSeries,
};
pub use conditioning::{condition, serialize_series, Seed256};
pub use error::{Error, Result};
pub use generator::{Aes256Counter, CounterCipher, StreamState};
