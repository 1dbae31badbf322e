//! Exhaustive PAM: the ground-truth oracle the bandit algorithms are
//! measured against.
//!
//! BUILD greedily adds the medoid that minimizes the resulting loss, SWAP
//! repeatedly applies the single best (medoid, point) exchange. Everything
//! here evaluates every candidate exactly; no sampling, no caching.

use crate::dataset::Dataset;
use crate::error::Error;
use crate::instrument::{Instrumentation, Phase};
use crate::metric::{distance, Metric};
use crate::state::{assign_nearest, clustering_loss, validate_medoids, MedoidState};

/// Exact per-point loss change when the medoid at position `m_pos` is
/// swapped out for a point at distance `d_i` from reference point `s`.
///
/// If `s` is not currently served by the outgoing medoid, it either stays
/// put or defects to the incoming point; otherwise its fallback is the
/// second-nearest medoid. This condenses the full case analysis of the
/// swap into two lines, and the value is exact, not an estimate.
///
/// Note the first branch does not depend on `m_pos` at all: every
/// non-owning medoid position shares the same value. That shared value is
/// what makes virtual arms possible.
pub fn swap_delta(state: &MedoidState, m_pos: usize, d_i: f64, s: usize) -> f64 {
    let d1 = state.d1[s];
    if m_pos != state.nearest[s] {
        -d1 + d1.min(d_i)
    } else {
        -d1 + state.d2[s].min(d_i)
    }
}

/// Loss of adding a candidate on top of medoids whose per-point nearest
/// distances are `best`: `sum_s min(d(candidate, x_s), best[s])`.
///
/// Shared by the oracle and the bandit BUILD fallback so both accumulate
/// in the same order and produce bit-identical totals.
pub(crate) fn build_objective(n: usize, best: &[f64], dist: &mut dyn FnMut(usize) -> f64) -> f64 {
    let mut total = 0.0;
    for s in 0..n {
        total += dist(s).min(best[s]);
    }
    total
}

/// Mean swap delta for medoid position `j` given a full row of distances
/// from the candidate point to every reference.
///
/// Shared by the oracle and the bandit SWAP fallback; see
/// [`build_objective`] for why.
pub(crate) fn swap_objective(state: &MedoidState, j: usize, d_row: &[f64]) -> f64 {
    let n = d_row.len();
    let mut sum = 0.0;
    for s in 0..n {
        sum += swap_delta(state, j, d_row[s], s);
    }
    sum / n as f64
}

/// One greedy BUILD step: return the non-medoid whose addition to
/// `current` minimizes the loss, ties to the lowest index.
///
/// Exhaustive: bills `current.len() * n` evaluations for the per-point
/// nearest distances plus `n` per candidate, all to the BUILD phase.
pub fn pam_build_step(
    data: &Dataset,
    metric: Metric,
    current: &[usize],
    instr: &Instrumentation,
) -> Result<usize, Error> {
    let n = data.n();
    if !current.is_empty() {
        validate_medoids(n, current)?;
    }
    if current.len() >= n {
        return Err(Error::InvalidK {
            k: current.len() + 1,
            n,
        });
    }

    // Distance to the nearest current medoid; +inf when there is none yet,
    // so the first step minimizes the plain 1-medoid loss.
    let mut best = vec![f64::INFINITY; n];
    for &m in current {
        for s in 0..n {
            instr.count_distance(Phase::Build);
            let d = distance(metric, data.row(m), data.row(s));
            if d < best[s] {
                best[s] = d;
            }
        }
    }

    let mut winner = None;
    let mut winner_total = f64::INFINITY;
    for x in 0..n {
        if current.contains(&x) {
            continue;
        }
        let total = build_objective(n, &best, &mut |s| {
            instr.count_distance(Phase::Build);
            distance(metric, data.row(x), data.row(s))
        });
        if total < winner_total {
            winner_total = total;
            winner = Some(x);
        }
    }
    Ok(winner.expect("at least one candidate"))
}

/// The best single swap: minimizes the mean delta over all
/// `(medoid position, candidate point)` pairs, ties to the lowest
/// `(candidate, position)`. Bills exactly `n * n` evaluations.
///
/// Returns `(candidate, medoid position, mean delta)`; the caller decides
/// whether the delta is an improvement.
pub fn pam_swap_step(
    data: &Dataset,
    metric: Metric,
    state: &MedoidState,
    instr: &Instrumentation,
) -> (usize, usize, f64) {
    let n = data.n();
    let k = state.k();
    let mut d_row = vec![0.0; n];
    let mut best = (0usize, 0usize, f64::INFINITY);
    for i in 0..n {
        for (s, slot) in d_row.iter_mut().enumerate() {
            instr.count_distance(Phase::Swap);
            *slot = distance(metric, data.row(i), data.row(s));
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

/// Full exact PAM: greedy BUILD, then up to `max_swaps` best-improvement
/// swaps, stopping at the first non-improving step.
///
/// Returns `(medoids, loss, executed swaps)` with medoids in working
/// order (BUILD order, with swapped-in points at their position).
pub fn pam_fit(
    data: &Dataset,
    metric: Metric,
    k: usize,
    max_swaps: usize,
    instr: &Instrumentation,
) -> Result<(Vec<usize>, f64, u64), Error> {
    let n = data.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut medoids = Vec::with_capacity(k);
    for _ in 0..k {
        let next = pam_build_step(data, metric, &medoids, instr)?;
        medoids.push(next);
    }

    let mut state = assign_nearest(data, metric, &medoids, Phase::Build, instr)?;
    let mut swaps = 0u64;
    while (swaps as usize) < max_swaps {
        let (i, j, delta) = pam_swap_step(data, metric, &state, instr);
        if delta >= 0.0 {
            break;
        }
        medoids[j] = i;
        state = assign_nearest(data, metric, &medoids, Phase::Swap, instr)?;
        swaps += 1;
        instr.count_swap_iteration();
    }

    let loss = clustering_loss(data, metric, &medoids)?;
    Ok((medoids, loss, swaps))
}
