//! Property tests for the invariants that hold on every input, not just
//! the worked examples: metric axioms, nearest/second bookkeeping, the
//! condensed swap delta against brute force, permutation and cache
//! behavior, CSV round trips, and elimination agreeing with exhaustive
//! search.

use proptest::prelude::*;

use bandit_kmedoids::{
    assign_nearest, cached_distance, clustering_loss, distance, load_csv, new_permutation,
    pam_swap_step, swap_delta, update_state_after_swap, write_csv, Dataset, Instrumentation,
    Metric, Phase, PicCache, NO_MEDOID,
};

const METRICS: [Metric; 4] = [Metric::L1, Metric::L2, Metric::SquaredL2, Metric::Cosine];

fn small_point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 1..6)
}

/// Rows with a shared dimension, enough points to pick medoids from.
fn dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (2usize..=5, 4usize..=max_n).prop_flat_map(|(dim, n)| {
        prop::collection::vec(prop::collection::vec(-50.0f64..50.0, dim), n)
            .prop_map(|rows| Dataset::from_rows(rows).unwrap())
    })
}

/// Distinct medoid indices for a dataset of n points.
fn medoids_for(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|j| j * n / k).collect()
}

proptest! {
    #[test]
    fn metrics_are_symmetric_and_zero_on_self(a in small_point(), b in small_point()) {
        let dim = a.len().min(b.len());
        let (a, b) = (&a[..dim], &b[..dim]);
        for m in METRICS {
            let ab = distance(m, a, b);
            prop_assert_eq!(ab.to_bits(), distance(m, b, a).to_bits());
            prop_assert!(ab >= 0.0);
        }
        // Cosine of the zero vector against itself is 1 by convention;
        // every other metric, and cosine on a nonzero point, gives 0.
        for m in [Metric::L1, Metric::L2, Metric::SquaredL2] {
            prop_assert_eq!(distance(m, a, a), 0.0);
        }
        if a.iter().any(|&x| x != 0.0) {
            prop_assert!(distance(Metric::Cosine, a, a).abs() < 1e-12);
        }
    }

    #[test]
    fn l1_and_l2_satisfy_the_triangle_inequality(
        a in prop::collection::vec(-100.0f64..100.0, 3),
        b in prop::collection::vec(-100.0f64..100.0, 3),
        c in prop::collection::vec(-100.0f64..100.0, 3),
    ) {
        for m in [Metric::L1, Metric::L2] {
            let direct = distance(m, &a, &c);
            let detour = distance(m, &a, &b) + distance(m, &b, &c);
            prop_assert!(direct <= detour + 1e-9, "{direct} > {detour}");
        }
    }

    #[test]
    fn nearest_bookkeeping_is_consistent(data in dataset(12), k in 2usize..=3) {
        let medoids = medoids_for(data.n(), k);
        let instr = Instrumentation::new();
        let state = assign_nearest(&data, Metric::L2, &medoids, Phase::Build, &instr).unwrap();
        let mut loss = 0.0;
        for s in 0..data.n() {
            let near = state.nearest[s];
            prop_assert!(near != NO_MEDOID && near < k);
            prop_assert!(state.d1[s] <= state.d2[s]);
            prop_assert_eq!(
                state.d1[s].to_bits(),
                distance(Metric::L2, data.row(medoids[near]), data.row(s)).to_bits()
            );
            if k > 1 {
                prop_assert!(state.second[s] != near);
                for j in 0..k {
                    let d = distance(Metric::L2, data.row(medoids[j]), data.row(s));
                    prop_assert!(d >= state.d1[s] || j == near);
                    prop_assert!(d >= state.d2[s] || j == near || j == state.second[s]);
                }
            }
            loss += state.d1[s];
        }
        prop_assert_eq!(state.loss().to_bits(), loss.to_bits());
        prop_assert_eq!(
            clustering_loss(&data, Metric::L2, &medoids).unwrap().to_bits(),
            loss.to_bits()
        );
    }

    #[test]
    fn condensed_swap_delta_matches_brute_force(
        data in dataset(10),
        k in 2usize..=3,
        candidate_salt in 0usize..7,
        m_salt in 0usize..5,
    ) {
        let medoids = medoids_for(data.n(), k);
        let m_pos = m_salt % k;
        let i = (candidate_salt * 3 + 1) % data.n();
        let instr = Instrumentation::new();
        let state = assign_nearest(&data, Metric::L2, &medoids, Phase::Build, &instr).unwrap();
        let mut swapped = medoids.clone();
        swapped[m_pos] = i;
        for s in 0..data.n() {
            let d_i = distance(Metric::L2, data.row(i), data.row(s));
            let after = swapped
                .iter()
                .map(|&m| distance(Metric::L2, data.row(m), data.row(s)))
                .fold(f64::INFINITY, f64::min);
            let brute = after - state.d1[s];
            let condensed = swap_delta(&state, m_pos, d_i, s);
            prop_assert!(
                (condensed - brute).abs() <= 1e-12 * (1.0 + brute.abs()),
                "point {s}: condensed {condensed} vs brute {brute}"
            );
        }
    }

    #[test]
    fn swapping_in_an_existing_medoid_never_helps_any_point(
        data in dataset(10),
        k in 2usize..=3,
        salt in 0usize..6,
    ) {
        let medoids = medoids_for(data.n(), k);
        let instr = Instrumentation::new();
        let state = assign_nearest(&data, Metric::L2, &medoids, Phase::Build, &instr).unwrap();
        let duplicate = medoids[salt % k];
        for m_pos in 0..k {
            for s in 0..data.n() {
                let d_i = distance(Metric::L2, data.row(duplicate), data.row(s));
                prop_assert!(swap_delta(&state, m_pos, d_i, s) >= 0.0);
            }
        }
    }

    #[test]
    fn incremental_swap_update_equals_a_fresh_assignment(
        data in dataset(10),
        k in 2usize..=3,
        candidate_salt in 0usize..7,
        m_salt in 0usize..5,
    ) {
        let medoids = medoids_for(data.n(), k);
        let m_pos = m_salt % k;
        let i = (candidate_salt * 5 + 2) % data.n();
        prop_assume!(!medoids.contains(&i));
        let instr = Instrumentation::new();
        let state = assign_nearest(&data, Metric::L2, &medoids, Phase::Build, &instr).unwrap();
        let updated = update_state_after_swap(&data, Metric::L2, &state, m_pos, i, &instr).unwrap();
        let fresh =
            assign_nearest(&data, Metric::L2, &updated.medoids, Phase::Build, &instr).unwrap();
        for s in 0..data.n() {
            prop_assert_eq!(updated.d1[s].to_bits(), fresh.d1[s].to_bits());
            prop_assert_eq!(updated.d2[s].to_bits(), fresh.d2[s].to_bits());
        }
        prop_assert_eq!(updated.loss().to_bits(), fresh.loss().to_bits());
    }

    #[test]
    fn accepted_pam_swaps_strictly_reduce_the_loss(data in dataset(12), k in 2usize..=3) {
        let medoids = medoids_for(data.n(), k);
        let instr = Instrumentation::new();
        let state = assign_nearest(&data, Metric::L2, &medoids, Phase::Build, &instr).unwrap();
        let before = state.loss();
        let (i, m_pos, delta) = pam_swap_step(&data, Metric::L2, &state, &instr);
        if delta < 0.0 {
            let mut swapped = state.medoids.clone();
            swapped[m_pos] = i;
            let after = clustering_loss(&data, Metric::L2, &swapped).unwrap();
            prop_assert!(after < before, "delta {delta} but loss {before} -> {after}");
        }
    }

    #[test]
    fn permutations_are_seeded_bijections(n in 1usize..200, seed in any::<u64>()) {
        let perm = new_permutation(n, seed).unwrap();
        let again = new_permutation(n, seed).unwrap();
        prop_assert_eq!(perm.order(), again.order());
        let mut seen = vec![false; n];
        for t in 0..n {
            let idx = perm.at(t);
            prop_assert!(idx < n && !seen[idx]);
            seen[idx] = true;
            prop_assert_eq!(perm.position_of(idx), t);
        }
    }

    #[test]
    fn cache_hits_return_exactly_the_direct_distance(
        data in dataset(10),
        width in 1usize..8,
        accesses in prop::collection::vec((0usize..10, 0usize..10), 1..40),
        seed in any::<u64>(),
    ) {
        let perm = new_permutation(data.n(), seed).unwrap();
        let cache = PicCache::new(data.n(), width, perm);
        let instr = Instrumentation::new();
        for (i, t) in accesses {
            let (i, t) = (i % data.n(), t % data.n());
            let got = cached_distance(&cache, &data, Metric::L2, i, t, Phase::Swap, &instr);
            let direct = distance(
                Metric::L2,
                data.row(i),
                data.row(cache.permutation().at(t)),
            );
            prop_assert_eq!(got.to_bits(), direct.to_bits());
        }
        let snap = instr.snapshot();
        prop_assert!(snap.cache_hits + snap.cache_misses >= snap.swap_distance_count);
    }

    #[test]
    fn csv_round_trips_bit_for_bit(data in dataset(10)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        write_csv(&data, &path).unwrap();
        let back = load_csv(&path, false).unwrap();
        prop_assert_eq!(back.n(), data.n());
        prop_assert_eq!(back.dim(), data.dim());
        for s in 0..data.n() {
            for c in 0..data.dim() {
                prop_assert_eq!(back.row(s)[c].to_bits(), data.row(s)[c].to_bits());
            }
        }
    }
}
