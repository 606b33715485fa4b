use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siderand::analysis::{frequency_distribution, min_entropy_estimate, FrequencyTable};
use siderand::{Timer, TimingSeries};

/// O(n^2) counter: for each position, count equal values if it is the first
/// occurrence.
fn naive_counts(values: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if values[..i].contains(v) {
            continue;
        }
        let c = values.iter().filter(|w| *w == v).count() as u64;
        out.push((*v, c));
    }
    out.sort_unstable();
    out
}

fn table_pairs(values: &[u64]) -> Vec<(u64, u64)> {
    let series =
        TimingSeries::replayed(values.iter().copied(), Timer::ProcessCpuNanoseconds).unwrap();
    frequency_distribution(&series).unwrap().iter().collect()
}

#[test]
fn seeded_ten_thousand_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let values: Vec<u64> = (0..10_000).map(|_| rng.gen_range(1..=2_000)).collect();
    assert_eq!(table_pairs(&values), naive_counts(&values));
}

proptest! {
    #[test]
    fn matches_naive_counter(values in prop::collection::vec(1u64..=50, 1..=1_000)) {
        prop_assert_eq!(table_pairs(&values), naive_counts(&values));
    }

    #[test]
    fn counts_sum_to_total(values in prop::collection::vec(any::<u64>(), 1..300)) {
        let t = FrequencyTable::from_durations(values.iter().copied()).unwrap();
        prop_assert_eq!(t.iter().map(|(_, c)| c).sum::<u64>(), t.total());
        prop_assert!(t.iter().all(|(_, c)| c >= 1));
        let e = min_entropy_estimate(&t);
        prop_assert_eq!(e.unique_values as usize, t.unique_values());
        prop_assert!(e.unique_values <= e.sample_count);
        prop_assert_eq!(e.total_bits, e.bits_per_sample * e.sample_count as f64);
    }

    #[test]
    fn scaling_counts_keeps_mfv(
        counts in prop::collection::btree_map(any::<u64>(), 1u64..100, 1..50),
        k in 1u64..20,
    ) {
        let base = min_entropy_estimate(&FrequencyTable::from_counts(counts.clone()).unwrap());
        let scaled: BTreeMap<u64, u64> = counts.into_iter().map(|(v, c)| (v, c * k)).collect();
        let scaled = min_entropy_estimate(&FrequencyTable::from_counts(scaled).unwrap());
        prop_assert!((base.mfv_fraction - scaled.mfv_fraction).abs() < 1e-15);
        prop_assert!((base.bits_per_sample - scaled.bits_per_sample).abs() < 1e-12);
    }

    #[test]
    fn lower_mfv_never_lowers_entropy(n in 2u64..2_000, a in 1u64..2_000, b in 1u64..2_000) {
        let (lo, hi) = (a.min(b).min(n), a.max(b).min(n));
        let est = |max: u64| {
            let mut counts = BTreeMap::from([(0u64, max)]);
            for v in 1..=(n - max) {
                counts.insert(v, 1);
            }
            min_entropy_estimate(&FrequencyTable::from_counts(counts).unwrap())
        };
        prop_assert!(est(lo).total_bits >= est(hi).total_bits);
    }

    #[test]
    fn all_distinct_gives_n_log2_n(n in 1usize..2_000) {
        let values: Vec<u64> = (0..n as u64).map(|v| v * 7 + 3).collect();
        let t = FrequencyTable::from_durations(values).unwrap();
        let e = min_entropy_estimate(&t);
        prop_assert_eq!(e.total_bits, n as f64 * (n as f64).log2());
    }
}
