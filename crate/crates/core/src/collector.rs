//! Timed trivial-workload collection.
//!
//! Each measurement times `scale` iterations of a single wrapping addition of
//! two fixed operands. The runtime of that loop jitters from run to run, and
//! the ordered sequence of runtimes is the raw entropy.
//!
//! Durations are always stored as integer nanoseconds. The microsecond clock
//! is scaled by 1,000 at capture, so every sample it produces is a multiple of
//! 1,000.

use std::fmt;
use std::hint::black_box;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of consecutive clock readings taken when measuring resolution.
pub const RESOLUTION_PROBES: usize = 10_000;

/// Coarsest accepted resolution for the nanosecond CPU-time clock.
pub const MAX_NANOSECOND_RESOLUTION_NS: u64 = 1_000;

/// Millisecond-granular clocks are rejected; the microsecond clock must tick
/// strictly faster than this.
pub const MILLISECOND_NS: u64 = 1_000_000;

pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_SCALE: u64 = 5_000_000;
pub const DEFAULT_OPERAND_A: u32 = 2_585_566_630;
pub const DEFAULT_OPERAND_B: u32 = 576_722_363;

/// Which clock times the workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Timer {
    /// Per-process CPU time with nanosecond reporting (`CLOCK_PROCESS_CPUTIME_ID`).
    ProcessCpuNanoseconds,
    /// The C `clock()` process timer, microsecond granular on modern Linux.
    WallMicroseconds,
}

impl Timer {
    /// Short form used on the command line and in machine-readable reports.
    pub fn short_name(self) -> &'static str {
        match self {
            Timer::ProcessCpuNanoseconds => "ns",
            Timer::WallMicroseconds => "us",
        }
    }

    /// Column text used in rendered reports.
    pub fn precision_label(self) -> &'static str {
        match self {
            Timer::ProcessCpuNanoseconds => "Nanosecond",
            Timer::WallMicroseconds => "Microsecond",
        }
    }

    fn max_accepted_resolution_ns(self) -> u64 {
        match self {
            Timer::ProcessCpuNanoseconds => MAX_NANOSECOND_RESOLUTION_NS,
            Timer::WallMicroseconds => MILLISECOND_NS - 1,
        }
    }
}

impl fmt::Display for Timer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timer::ProcessCpuNanoseconds => f.write_str("nanosecond process CPU-time"),
            Timer::WallMicroseconds => f.write_str("microsecond clock()"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectorConfig {
    /// Number of timing measurements.
    pub samples: usize,
    /// Workload iterations per measurement.
    pub scale: u64,
    pub timer: Timer,
    /// Ask for the highest scheduling priority (nice -20) before collecting.
    pub boost_priority: bool,
    pub operand_a: u32,
    pub operand_b: u32,
}

impl Default for CollectorConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            scale: DEFAULT_SCALE,
            timer: Timer::ProcessCpuNanoseconds,
            boost_priority: false,
            operand_a: DEFAULT_OPERAND_A,
            operand_b: DEFAULT_OPERAND_B,
        }
    }
}

impl CollectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument {
                what: "samples",
                reason: "must be at least 1".into(),
            });
        }
        if self.scale == 0 {
            return Err(Error::InvalidArgument {
                what: "scale",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// One workload runtime in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimingSample(u64);

impl TimingSample {
    pub const fn from_nanos(nanos: u64) -> Self {
        Self(nanos)
    }

    pub const fn nanos(self) -> u64 {
        self.0
    }
}

/// Outcome of the optional scheduling-priority request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityStatus {
    NotRequested,
    Raised,
    /// The request failed with the given OS error code; collection went ahead
    /// at normal priority.
    Denied {
        errno: i32,
    },
}

/// An ordered, immutable series of workload runtimes.
///
/// The series keeps collection order. Nothing in this crate ever sorts it.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingSeries {
    samples: Vec<TimingSample>,
    config: CollectorConfig,
    timer_resolution_ns: Option<u64>,
    priority: PriorityStatus,
    concurrent_collection: bool,
    elapsed: Option<Duration>,
}

impl TimingSeries {
    /// Rebuilds a series from previously recorded durations, e.g. a CSV file.
    ///
    /// The resulting series carries a default config with `samples` set to the
    /// number of durations and no measured resolution.
    pub fn replayed(durations: impl IntoIterator<Item = u64>, timer: Timer) -> Result<Self> {
        let samples: Vec<TimingSample> = durations
            .into_iter()
            .map(TimingSample::from_nanos)
            .collect();
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        let config = CollectorConfig {
            samples: samples.len(),
            timer,
            ..CollectorConfig::default()
        };
        Ok(Self {
            samples,
            config,
            timer_resolution_ns: None,
            priority: PriorityStatus::NotRequested,
            concurrent_collection: false,
            elapsed: None,
        })
    }

    pub fn samples(&self) -> &[TimingSample] {
        &self.samples
    }

    pub fn durations(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        self.samples.iter().map(|s| s.nanos())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn config(&self) -> &CollectorConfig {
        &self.config
    }

    pub fn timer(&self) -> Timer {
        self.config.timer
    }

    /// Measured clock granularity; `None` for replayed series.
    pub fn timer_resolution_ns(&self) -> Option<u64> {
        self.timer_resolution_ns
    }

    pub fn priority(&self) -> PriorityStatus {
        self.priority
    }

    /// Set when another collection ran in this process at the same time.
    pub fn concurrent_collection(&self) -> bool {
        self.concurrent_collection
    }

    /// Wall-clock time the collection took; `None` for replayed series.
    pub fn elapsed(&self) -> Option<Duration> {
        self.elapsed
    }

    /// Sum of all recorded durations in seconds.
    pub fn measured_seconds(&self) -> f64 {
        self.durations().map(|d| d as f64).sum::<f64>() / 1e9
    }

    /// Protocol deviations worth surfacing in a report.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let PriorityStatus::Denied { errno } = self.priority {
            out.push(format!(
                "priority boost failed (os error {errno}); collected at normal priority"
            ));
        }
        if self.concurrent_collection {
            out.push("another collection ran concurrently in this process".to_owned());
        }
        out
    }
}

/// A monotone clock readable in nanoseconds.
pub trait Clock {
    fn timer(&self) -> Timer;

    fn now_ns(&self) -> Result<u64>;
}

/// `clock_gettime(CLOCK_PROCESS_CPUTIME_ID)`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ProcessCpuClock;

/// C `clock()`, converted to nanoseconds.
#[derive(Debug, Default, Clone, Copy)]
pub struct ProcessTickClock;

#[cfg(unix)]
mod sys {
    // POSIX (XSI) fixes CLOCKS_PER_SEC at one million.
    pub const CLOCKS_PER_SEC: u64 = 1_000_000;

    extern "C" {
        pub fn clock() -> libc::clock_t;
    }
}

impl Clock for ProcessCpuClock {
    fn timer(&self) -> Timer {
        Timer::ProcessCpuNanoseconds
    }

    #[cfg(unix)]
    fn now_ns(&self) -> Result<u64> {
        let mut ts = libc::timespec {
            tv_sec: 0,
            tv_nsec: 0,
        };
        // SAFETY: `ts` is a valid, writable timespec.
        let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
        if rc != 0 {
            return Err(Error::ClockUnavailable {
                timer: self.timer(),
            });
        }
        Ok(ts.tv_sec as u64 * 1_000_000_000 + ts.tv_nsec as u64)
    }

    #[cfg(not(unix))]
    fn now_ns(&self) -> Result<u64> {
        Err(Error::ClockUnavailable {
            timer: self.timer(),
        })
    }
}

impl Clock for ProcessTickClock {
    fn timer(&self) -> Timer {
        Timer::WallMicroseconds
    }

    #[cfg(unix)]
    fn now_ns(&self) -> Result<u64> {
        // SAFETY: clock() has no preconditions.
        let ticks = unsafe { sys::clock() };
        if ticks == -1 as libc::clock_t {
            return Err(Error::ClockUnavailable {
                timer: self.timer(),
            });
        }
        Ok(ticks as u64 * (1_000_000_000 / sys::CLOCKS_PER_SEC))
    }

    #[cfg(not(unix))]
    fn now_ns(&self) -> Result<u64> {
        Err(Error::ClockUnavailable {
            timer: self.timer(),
        })
    }
}

/// Smallest nonzero step between consecutive readings of `clock` over
/// `probes` readings.
pub fn probe_resolution<C: Clock + ?Sized>(clock: &C, probes: usize) -> Result<u64> {
    let mut prev = clock.now_ns()?;
    let mut smallest: Option<u64> = None;
    for _ in 0..probes {
        let now = clock.now_ns()?;
        if now > prev {
            let step = now - prev;
            smallest = Some(smallest.map_or(step, |s| s.min(step)));
        }
        prev = now;
    }
    smallest.ok_or(Error::CoarseTimer {
        timer: clock.timer(),
        resolution_ns: None,
    })
}

pub fn detect_timer_resolution(timer: Timer) -> Result<u64> {
    match timer {
        Timer::ProcessCpuNanoseconds => probe_resolution(&ProcessCpuClock, RESOLUTION_PROBES),
        Timer::WallMicroseconds => probe_resolution(&ProcessTickClock, RESOLUTION_PROBES),
    }
}

/// Runs the timed workload loop with the clock selected by `config.timer`.
pub fn collect(config: &CollectorConfig) -> Result<TimingSeries> {
    match config.timer {
        Timer::ProcessCpuNanoseconds => collect_with_clock(config, &ProcessCpuClock),
        Timer::WallMicroseconds => collect_with_clock(config, &ProcessTickClock),
    }
}

/// Like [`collect`], timing with an explicit clock. `config.timer` is
/// replaced by the clock's own timer kind in the returned series.
pub fn collect_with_clock<C: Clock + ?Sized>(
    config: &CollectorConfig,
    clock: &C,
) -> Result<TimingSeries> {
    config.validate()?;
    let timer = clock.timer();
    let resolution = probe_resolution(clock, RESOLUTION_PROBES)?;
    if resolution > timer.max_accepted_resolution_ns() {
        return Err(Error::CoarseTimer {
            timer,
            resolution_ns: Some(resolution),
        });
    }

    let priority = if config.boost_priority {
        raise_priority()
    } else {
        PriorityStatus::NotRequested
    };

    let guard = ActiveCollection::enter();
    let started = Instant::now();
    let mut samples = Vec::with_capacity(config.samples);
    for _ in 0..config.samples {
        let begin = clock.now_ns()?;
        run_workload(config.operand_a, config.operand_b, config.scale);
        let end = clock.now_ns()?;
        samples.push(TimingSample::from_nanos(end.saturating_sub(begin)));
    }
    let elapsed = started.elapsed();
    let concurrent_collection = guard.leave();

    Ok(TimingSeries {
        samples,
        config: CollectorConfig {
            timer,
            ..config.clone()
        },
        timer_resolution_ns: Some(resolution),
        priority,
        concurrent_collection,
        elapsed: Some(elapsed),
    })
}

/// `scale` repetitions of `a + b`. Every result goes through `black_box`, so
/// the optimizer can neither drop nor hoist the loop body.
#[inline(never)]
fn run_workload(a: u32, b: u32, scale: u64) {
    let mut total = 0u32;
    for _ in 0..scale {
        total = black_box(black_box(a).wrapping_add(b));
    }
    black_box(total);
}

#[cfg(unix)]
fn raise_priority() -> PriorityStatus {
    // SAFETY: setpriority only reads its scalar arguments.
    let rc = unsafe { libc::setpriority(libc::PRIO_PROCESS as _, 0, -20) };
    if rc == 0 {
        PriorityStatus::Raised
    } else {
        let errno = std::io::Error::last_os_error().raw_os_error().unwrap_or(0);
        PriorityStatus::Denied { errno }
    }
}

#[cfg(not(unix))]
fn raise_priority() -> PriorityStatus {
    PriorityStatus::Denied { errno: 0 }
}

static ACTIVE: AtomicUsize = AtomicUsize::new(0);
static STARTED: AtomicU64 = AtomicU64::new(0);

/// Tracks overlapping collections within the process.
struct ActiveCollection {
    ticket: u64,
    overlapped_on_entry: bool,
    left: bool,
}

impl ActiveCollection {
    fn enter() -> Self {
        let ticket = STARTED.fetch_add(1, Ordering::SeqCst) + 1;
        let overlapped_on_entry = ACTIVE.fetch_add(1, Ordering::SeqCst) > 0;
        Self {
            ticket,
            overlapped_on_entry,
            left: false,
        }
    }

    /// Returns true if any other collection overlapped this one.
    fn leave(mut self) -> bool {
        let started_since = STARTED.load(Ordering::SeqCst) != self.ticket;
        self.left = true;
        ACTIVE.fetch_sub(1, Ordering::SeqCst);
        self.overlapped_on_entry || started_since
    }
}

impl Drop for ActiveCollection {
    fn drop(&mut self) {
        if !self.left {
            ACTIVE.fetch_sub(1, Ordering::SeqCst);
        }
    }
}
