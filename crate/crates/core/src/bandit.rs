//! Bandit-accelerated BUILD and SWAP searches.
//!
//! Each candidate is a bandit arm whose unknown mean is its exact loss
//! change; sampling a reference point yields one reward. Successive
//! elimination with per-arm confidence radii discards arms that provably
//! cannot win, so the search usually touches a small fraction of the
//! `O(n)` references an exhaustive pass would. Sampling is without
//! replacement along a permutation, which keeps running means unbiased and
//! makes "consume everything" identical to exact evaluation.
//!
//! Three searches share the machinery:
//! - [`adaptive_search`]: generic single-column best-arm search, used for
//!   every BUILD step;
//! - [`banditpam_swap`]: SWAP over `n * k` independent `(point, medoid)`
//!   pair arms, the un-accelerated baseline that pays one distance lookup
//!   per surviving pair;
//! - [`banditpampp_swap`]: SWAP over `n` point arms, each carrying `k`
//!   virtual columns. One distance per reference per surviving point
//!   updates all columns: the owning column gets its own value, the other
//!   `k - 1` share one clamped value.

use crate::cache::DistanceSource;
use crate::dataset::Dataset;
use crate::error::Error;
use crate::exact::{build_objective, swap_delta, swap_objective};
use crate::instrument::{Instrumentation, Phase};
use crate::metric::Metric;

/// Tuning knobs for the bandit algorithms. `None` fields resolve to their
/// documented defaults at fit time.
#[derive(Debug, Clone)]
pub struct BanditConfig {
    /// Per-comparison failure probability. Default `1 / (k * n^3)`,
    /// clamped into `(0, 0.5)`.
    pub delta: Option<f64>,
    /// References drawn between elimination rounds. Default 100.
    pub batch_size: usize,
    /// Lower bound on every estimated arm scale, keeping radii positive
    /// for constant-reward arms.
    pub sigma_floor: f64,
    /// Swap budget `T`. Default `k`.
    pub max_swaps: Option<usize>,
    /// Permutation-cache width `W` for the algorithms that cache.
    pub cache_width: usize,
    pub seed: u64,
    /// Test hook: use this scale for every arm instead of estimating.
    /// `+inf` disables elimination entirely, forcing the exact fallback.
    pub sigma_override: Option<f64>,
}

impl Default for BanditConfig {
    fn default() -> BanditConfig {
        BanditConfig {
            delta: None,
            batch_size: 100,
            sigma_floor: 1e-9,
            max_swaps: None,
            cache_width: 1000,
            seed: 0,
            sigma_override: None,
        }
    }
}

/// Resolved per-search parameters.
#[derive(Debug, Clone)]
pub struct SearchParams {
    pub delta: f64,
    pub batch_size: usize,
    pub sigma_floor: f64,
    pub sigma_override: Option<f64>,
}

impl BanditConfig {
    /// Validate and resolve the search parameters for a `(k, n)` problem.
    pub fn search_params(&self, k: usize, n: usize) -> Result<SearchParams, Error> {
        if self.batch_size == 0 {
            return Err(Error::NotPositive { what: "batch_size" });
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::NotPositive {
                what: "sigma_floor",
            });
        }
        let max_delta = 0.5 - f64::EPSILON;
        let delta = match self.delta {
            Some(d) => {
                if !(d > 0.0 && d < 1.0) {
                    return Err(Error::InvalidDelta { delta: d });
                }
                d.min(max_delta)
            }
            None => (1.0 / (k as f64 * (n as f64).powi(3))).clamp(f64::MIN_POSITIVE, max_delta),
        };
        Ok(SearchParams {
            delta,
            batch_size: self.batch_size,
            sigma_floor: self.sigma_floor,
            sigma_override: self.sigma_override,
        })
    }
}

/// Confidence radius `sigma * sqrt(log(1/delta) / pulls)`.
///
/// An unpulled arm has an infinite radius. Panics if `delta` is outside
/// `(0, 1)`.
pub fn confidence_radius(sigma: f64, delta: f64, pulls: usize) -> f64 {
    assert!(
        delta > 0.0 && delta < 1.0,
        "delta must be in (0, 1), got {delta}"
    );
    if pulls == 0 {
        return f64::INFINITY;
    }
    sigma * ((1.0 / delta).ln() / pulls as f64).sqrt()
}

fn welford_push(mean: &mut f64, m2: &mut f64, count: f64, x: f64) {
    let delta = x - *mean;
    *mean += delta / count;
    *m2 += delta * (x - *mean);
}

/// Sample standard deviation (divisor `count - 1`) from a Welford
/// accumulator, floored. Fewer than two samples give the floor.
fn welford_sigma(m2: f64, count: usize, floor: f64) -> f64 {
    if count < 2 {
        return floor;
    }
    (m2 / (count as f64 - 1.0)).sqrt().max(floor)
}

/// Per-arm sample standard deviation of the first `batch` rewards,
/// floored at `sigma_floor`.
///
/// `reward(arm, q)` is the arm's reward at permutation position `q`;
/// positions are consumed in order, reference-major, exactly as the
/// searches themselves do, so the evaluations can double as the seed of
/// the arms' running means.
pub fn estimate_sigma(
    arms: &[usize],
    batch: usize,
    sigma_floor: f64,
    reward: &mut dyn FnMut(usize, usize) -> f64,
) -> Vec<f64> {
    let mut mean = vec![0.0; arms.len()];
    let mut m2 = vec![0.0; arms.len()];
    for q in 0..batch {
        for (slot, &arm) in arms.iter().enumerate() {
            welford_push(
                &mut mean[slot],
                &mut m2[slot],
                (q + 1) as f64,
                reward(arm, q),
            );
        }
    }
    (0..arms.len())
        .map(|slot| welford_sigma(m2[slot], batch, sigma_floor))
        .collect()
}

/// One elimination round: keep the arms whose optimistic value
/// (`stat - radius`) does not exceed the best pessimistic value
/// (`min(stat + radius)`). Indices in `active` stay in ascending order.
pub(crate) fn filter_active(active: &mut Vec<usize>, stat: &[f64], radius: &[f64]) {
    let mut threshold = f64::INFINITY;
    for &a in active.iter() {
        let ub = stat[a] + radius[a];
        if ub < threshold {
            threshold = ub;
        }
    }
    active.retain(|&a| stat[a] - radius[a] <= threshold);
}

/// Successive-elimination best-arm search over single-column arms.
///
/// `reward(arm, q)` returns the arm's reward at permutation position `q`
/// and is responsible for billing its own distance work. The first batch
/// both seeds the running means and estimates each arm's scale; no
/// evaluation is wasted. If the references are exhausted with several
/// survivors, `exact_total(arm)` settles them and the lowest-index
/// minimizer wins. A single-survivor exit returns that arm directly with
/// no evaluations beyond the sampling it already paid.
pub fn adaptive_search(
    arms: &[usize],
    n_refs: usize,
    params: &SearchParams,
    reward: &mut dyn FnMut(usize, usize) -> f64,
    exact_total: &mut dyn FnMut(usize) -> f64,
) -> usize {
    assert!(!arms.is_empty(), "adaptive_search needs at least one arm");
    let slots = arms.len();
    let mut sums = vec![0.0; slots];
    let mut mean = vec![0.0; slots];
    let mut m2 = vec![0.0; slots];
    let mut active: Vec<usize> = (0..slots).collect();

    let first = params.batch_size.min(n_refs);
    for q in 0..first {
        for &slot in &active {
            let x = reward(arms[slot], q);
            sums[slot] += x;
            welford_push(&mut mean[slot], &mut m2[slot], (q + 1) as f64, x);
        }
    }
    let mut t = first;
    let sigma: Vec<f64> = (0..slots)
        .map(|slot| match params.sigma_override {
            Some(s) => s,
            None => welford_sigma(m2[slot], first, params.sigma_floor),
        })
        .collect();

    let mut stat = vec![0.0; slots];
    let mut radius = vec![0.0; slots];
    loop {
        for &slot in &active {
            stat[slot] = sums[slot] / t as f64;
            radius[slot] = confidence_radius(sigma[slot], params.delta, t);
        }
        filter_active(&mut active, &stat, &radius);
        if active.len() <= 1 || t >= n_refs {
            break;
        }
        let batch = params.batch_size.min(n_refs - t);
        for q in t..t + batch {
            for &slot in &active {
                sums[slot] += reward(arms[slot], q);
            }
        }
        t += batch;
    }

    if active.len() == 1 {
        return arms[active[0]];
    }
    let mut best = active[0];
    let mut best_total = f64::INFINITY;
    for &slot in &active {
        let total = exact_total(arms[slot]);
        if total < best_total {
            best_total = total;
            best = slot;
        }
    }
    arms[best]
}

/// One bandit BUILD step: the non-medoid that most reduces the loss when
/// added to the current medoids, found by [`adaptive_search`].
///
/// `d1_so_far[s]` is the distance from `s` to its nearest current medoid
/// (`+inf` before the first step). The per-reference reward is the loss
/// change contribution `min(d(x, x_s) - d1_so_far[s], 0)`, reducing to the
/// plain distance while no medoid exists. The exact fallback scores
/// survivors with the same accumulation the exhaustive oracle uses, so on
/// a fallback exit the choice is bit-identical to the oracle's among the
/// survivors. All distance work is billed to the BUILD phase.
pub fn bandit_build_step(
    data: &Dataset,
    metric: Metric,
    source: &DistanceSource,
    d1_so_far: &[f64],
    medoids_so_far: &[usize],
    params: &SearchParams,
    instr: &Instrumentation,
) -> usize {
    let n = data.n();
    let arms: Vec<usize> = (0..n).filter(|i| !medoids_so_far.contains(i)).collect();
    let perm = source.permutation();
    adaptive_search(
        &arms,
        n,
        params,
        &mut |i, q| {
            let s = perm.at(q);
            let d = source.by_position(data, metric, i, q, Phase::Build, instr);
            let best = d1_so_far[s];
            if best.is_finite() {
                (d - best).min(0.0)
            } else {
                d
            }
        },
        &mut |i| {
            build_objective(n, d1_so_far, &mut |s| {
                source.by_point(data, metric, i, s, Phase::Build, instr)
            })
        },
    )
}

use crate::state::MedoidState;

/// SWAP search over `n * k` independent pair arms (the baseline without
/// virtual arms).
///
/// Per reference, every surviving pair performs its own distance lookup:
/// a point with `r` surviving medoid columns pays `r` lookups, which is
/// the `O(k)` overhead virtual arms remove. Each pair estimates its own
/// scale from its first-batch rewards. Returns the chosen
/// `(point, medoid position, mean delta)`; the delta is exact if the
/// search fell back to exact evaluation, otherwise it is the running
/// estimate.
pub fn banditpam_swap(
    data: &Dataset,
    metric: Metric,
    source: &DistanceSource,
    state: &MedoidState,
    params: &SearchParams,
    instr: &Instrumentation,
) -> (usize, usize, f64) {
    let n = data.n();
    let k = state.k();
    let perm = source.permutation();
    let slots = n * k;
    let mut sums = vec![0.0; slots];
    let mut mean = vec![0.0; slots];
    let mut m2 = vec![0.0; slots];
    let mut active: Vec<usize> = (0..slots).collect();

    let first = params.batch_size.min(n);
    for q in 0..first {
        let s = perm.at(q);
        for &p in &active {
            let (i, j) = (p / k, p % k);
            let d = source.by_position(data, metric, i, q, Phase::Swap, instr);
            let x = swap_delta(state, j, d, s);
            sums[p] += x;
            welford_push(&mut mean[p], &mut m2[p], (q + 1) as f64, x);
        }
    }
    let mut t = first;
    let sigma: Vec<f64> = (0..slots)
        .map(|p| match params.sigma_override {
            Some(s) => s,
            None => welford_sigma(m2[p], first, params.sigma_floor),
        })
        .collect();

    let mut stat = vec![0.0; slots];
    let mut radius = vec![0.0; slots];
    loop {
        for &p in &active {
            stat[p] = sums[p] / t as f64;
            radius[p] = confidence_radius(sigma[p], params.delta, t);
        }
        filter_active(&mut active, &stat, &radius);
        if active.len() <= 1 || t >= n {
            break;
        }
        let batch = params.batch_size.min(n - t);
        for q in t..t + batch {
            let s = perm.at(q);
            for &p in &active {
                let (i, j) = (p / k, p % k);
                let d = source.by_position(data, metric, i, q, Phase::Swap, instr);
                sums[p] += swap_delta(state, j, d, s);
            }
        }
        t += batch;
    }

    if active.len() == 1 {
        let p = active[0];
        return (p / k, p % k, sums[p] / t as f64);
    }
    // References exhausted: settle the survivors exactly. Pairs stay
    // independent here too; no distance row is shared between pairs of
    // the same point.
    let mut best = (0usize, 0usize, f64::INFINITY);
    let mut d_row = vec![0.0; n];
    for &p in &active {
        let (i, j) = (p / k, p % k);
        for (s, slot) in d_row.iter_mut().enumerate() {
            *slot = source.by_point(data, metric, i, s, Phase::Swap, instr);
        }
        let delta = swap_objective(state, j, &d_row);
        if delta < best.2 {
            best = (i, j, delta);
        }
    }
    best
}

/// SWAP search over `n` point arms with `k` virtual medoid columns.
///
/// Per reference `s` and surviving point `i`, exactly one new distance
/// `d_i = d(x_i, x_s)` is computed. The column owning `s` (its nearest
/// medoid) is updated with `min(d2[s], d_i) - d1[s]`; every other column
/// shares the clamped value `min(d_i - d1[s], 0)`, applied as one shared
/// accumulator plus a per-owner correction. A point survives while any of
/// its columns could still be the global minimizer. The per-point scale is
/// estimated from the shared values of the first batch.
///
/// The exact fallback re-scores survivors with the oracle's own
/// accumulation, so exhausted searches return the oracle's choice among
/// the survivors bit-for-bit.
pub fn banditpampp_swap(
    data: &Dataset,
    metric: Metric,
    source: &DistanceSource,
    state: &MedoidState,
    params: &SearchParams,
    instr: &Instrumentation,
) -> (usize, usize, f64) {
    let n = data.n();
    let k = state.k();
    let perm = source.permutation();
    let mut shared = vec![0.0; n];
    let mut adjust = vec![0.0; n * k];
    let mut mean = vec![0.0; n];
    let mut m2 = vec![0.0; n];
    let mut active: Vec<usize> = (0..n).collect();

    let first = params.batch_size.min(n);
    for q in 0..first {
        let s = perm.at(q);
        let own = state.nearest[s];
        let d1 = state.d1[s];
        let d2 = state.d2[s];
        for &i in &active {
            let d_i = source.by_position(data, metric, i, q, Phase::Swap, instr);
            let f = (d_i - d1).min(0.0);
            shared[i] += f;
            adjust[i * k + own] += (d2.min(d_i) - d1) - f;
            welford_push(&mut mean[i], &mut m2[i], (q + 1) as f64, f);
        }
    }
    let mut t = first;
    let sigma: Vec<f64> = (0..n)
        .map(|i| match params.sigma_override {
            Some(s) => s,
            None => welford_sigma(m2[i], first, params.sigma_floor),
        })
        .collect();

    let col_mean = |shared: &[f64], adjust: &[f64], i: usize, j: usize, t: usize| {
        (shared[i] + adjust[i * k + j]) / t as f64
    };

    let mut stat = vec![0.0; n];
    let mut radius = vec![0.0; n];
    loop {
        for &i in &active {
            let mut lo = f64::INFINITY;
            for j in 0..k {
                let m = col_mean(&shared, &adjust, i, j, t);
                if m < lo {
                    lo = m;
                }
            }
            stat[i] = lo;
            radius[i] = confidence_radius(sigma[i], params.delta, t);
        }
        filter_active(&mut active, &stat, &radius);
        if active.len() <= 1 || t >= n {
            break;
        }
        let batch = params.batch_size.min(n - t);
        for q in t..t + batch {
            let s = perm.at(q);
            let own = state.nearest[s];
            let d1 = state.d1[s];
            let d2 = state.d2[s];
            for &i in &active {
                let d_i = source.by_position(data, metric, i, q, Phase::Swap, instr);
                let f = (d_i - d1).min(0.0);
                shared[i] += f;
                adjust[i * k + own] += (d2.min(d_i) - d1) - f;
            }
        }
        t += batch;
    }

    if active.len() == 1 {
        let i = active[0];
        let mut best_j = 0;
        let mut best_m = f64::INFINITY;
        for j in 0..k {
            let m = col_mean(&shared, &adjust, i, j, t);
            if m < best_m {
                best_m = m;
                best_j = j;
            }
        }
        return (i, best_j, best_m);
    }
    let mut best = (0usize, 0usize, f64::INFINITY);
    let mut d_row = vec![0.0; n];
    for &i in &active {
        for (s, slot) in d_row.iter_mut().enumerate() {
            *slot = source.by_point(data, metric, i, s, Phase::Swap, instr);
        }
        for j in 0..k {
            let delta = swap_objective(state, j, &d_row);
            if delta < best.2 {
                best = (i, j, delta);
            }
        }
    }
    best
}
