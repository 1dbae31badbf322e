//! The exhaustive oracle's normalized distance count scales as a full
//! quadratic scan per iteration.

use bandit_kmedoids::{fit, generate_synthetic, Algorithm, BanditConfig, Instrumentation, Metric};

#[test]
fn pam_normalized_cost_sits_in_the_quadratic_band() {
    let mut checked = 0;
    for seed in 0..10 {
        let data = generate_synthetic(3, 100, 2, 3.0, seed).unwrap();
        let instr = Instrumentation::new();
        let r = fit(
            &data,
            Metric::L2,
            3,
            Algorithm::Pam,
            &BanditConfig::default(),
            &instr,
        )
        .unwrap();
        if r.swap_iterations >= 1 {
            let n2 = (r.n * r.n) as f64;
            assert!(
                r.normalized_distance_count >= n2 / 2.0 && r.normalized_distance_count <= 3.0 * n2,
                "seed {seed}: normalized count {} outside [{}, {}]",
                r.normalized_distance_count,
                n2 / 2.0,
                3.0 * n2
            );
            checked += 1;
        }
    }
    assert!(
        checked >= 1,
        "no seed produced a swap iteration; the band was never exercised"
    );
}
