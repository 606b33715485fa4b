use siderand::collector::{collect, detect_timer_resolution, CollectorConfig, Timer};

fn small(samples: usize, scale: u64, timer: Timer) -> CollectorConfig {
    CollectorConfig {
        samples,
        scale,
        timer,
        ..CollectorConfig::default()
    }
}

#[test]
fn nanosecond_clock_resolution() {
    let r = detect_timer_resolution(Timer::ProcessCpuNanoseconds).unwrap();
    assert!(r > 0 && r <= 1_000, "resolution {r} ns");
}

#[test]
fn microsecond_clock_quantizes_to_microseconds() {
    let r = detect_timer_resolution(Timer::WallMicroseconds).unwrap();
    assert_eq!(r % 1_000, 0, "resolution {r} ns");
}

#[test]
fn output_length_matches_samples() {
    for samples in [1, 2, 256, 1024] {
        let series = collect(&small(samples, 100, Timer::ProcessCpuNanoseconds)).unwrap();
        assert_eq!(series.len(), samples);
        assert_eq!(series.config().samples, samples);
    }
}

#[test]
fn microsecond_durations_divisible_by_1000() {
    let series = collect(&small(64, 200_000, Timer::WallMicroseconds)).unwrap();
    assert_eq!(series.timer(), Timer::WallMicroseconds);
    assert!(series.durations().all(|d| d % 1_000 == 0));
}

#[test]
fn config_is_not_mutated() {
    let config = small(8, 1_000, Timer::ProcessCpuNanoseconds);
    let before = config.clone();
    let series = collect(&config).unwrap();
    assert_eq!(config, before);
    assert_eq!(series.config(), &before);
}

#[test]
fn work_grows_with_scale() {
    let mean = |scale: u64| {
        let series = collect(&small(20, scale, Timer::ProcessCpuNanoseconds)).unwrap();
        series.durations().sum::<u64>() as f64 / series.len() as f64
    };
    let short = mean(1_000_000);
    let long = mean(10_000_000);
    assert!(long > short, "10M mean {long} ns vs 1M mean {short} ns");
}

#[test]
fn paired_collections_differ() {
    let config = small(256, 100_000, Timer::ProcessCpuNanoseconds);
    for _ in 0..10 {
        let a = collect(&config).unwrap();
        let b = collect(&config).unwrap();
        assert_ne!(
            a.durations().collect::<Vec<_>>(),
            b.durations().collect::<Vec<_>>()
        );
    }
}

#[test]
fn concurrent_collections_are_flagged() {
    let config = small(200, 200_000, Timer::ProcessCpuNanoseconds);
    let handles: Vec<_> = (0..2)
        .map(|_| {
            let c = config.clone();
            std::thread::spawn(move || collect(&c).unwrap())
        })
        .collect();
    let series: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(series.iter().any(|s| s.concurrent_collection()));
    assert!(series
        .iter()
        .filter(|s| s.concurrent_collection())
        .all(|s| s.warnings().iter().any(|w| w.contains("concurrently"))));
}
