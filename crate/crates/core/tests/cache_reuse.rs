//! The permutation-invariant cache is shared across phases of one fit:
//! entries written during BUILD are replayed for free during SWAP.

use bandit_kmedoids::{fit, generate_synthetic, Algorithm, BanditConfig, Instrumentation, Metric};

#[test]
fn cache_entries_survive_across_phases() {
    let data = generate_synthetic(3, 60, 2, 2.5, 6).unwrap();
    let k = 3;
    // Same seed twice: once stopping after BUILD, once running the swap
    // loop. The build prefixes are identical, so every extra hit in the
    // full run happened during the swap phase.
    let build_only_config = BanditConfig {
        seed: 5,
        max_swaps: Some(0),
        ..BanditConfig::default()
    };
    let instr = Instrumentation::new();
    let build_only = fit(
        &data,
        Metric::L2,
        k,
        Algorithm::BpPlusPlus,
        &build_only_config,
        &instr,
    )
    .unwrap();
    let full_config = BanditConfig {
        seed: 5,
        ..BanditConfig::default()
    };
    let instr = Instrumentation::new();
    let full = fit(
        &data,
        Metric::L2,
        k,
        Algorithm::BpPlusPlus,
        &full_config,
        &instr,
    )
    .unwrap();

    assert_eq!(full.build_distance_count, build_only.build_distance_count);
    let swap_hits = full.cache_hits - build_only.cache_hits;
    assert!(swap_hits > 0, "swap phase never reused a cached entry");
    // In a cached fit every billed distance is a cache miss, so the two
    // counters must agree phase by phase.
    assert_eq!(
        full.swap_distance_count,
        full.cache_misses - build_only.cache_misses
    );
    assert_eq!(build_only.build_distance_count, build_only.cache_misses);
}
