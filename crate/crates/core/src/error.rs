use std::io;

use thiserror::Error;

use crate::collector::Timer;

/// Errors produced by collection, analysis, conditioning and CSV handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the {timer} clock is not available on this platform")]
    ClockUnavailable { timer: Timer },

    /// The clock never advanced during probing, or advanced in steps coarser
    /// than the accepted floor for its kind.
    #[error("the {timer} clock is too coarse ({})", describe_resolution(*.resolution_ns))]
    CoarseTimer {
        timer: Timer,
        resolution_ns: Option<u64>,
    },

    #[error("timing series is empty")]
    EmptySeries,

    #[error("most frequent value fraction {mfv_fraction} yields no entropy per sample")]
    DegenerateDistribution { mfv_fraction: f64 },

    #[error("invalid {what}: {reason}")]
    InvalidArgument { what: &'static str, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn describe_resolution(resolution_ns: Option<u64>) -> String {
    match resolution_ns {
        Some(ns) => format!("observed resolution {ns} ns"),
        None => "no tick observed while probing".to_owned(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
