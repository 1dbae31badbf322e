//! Fit orchestration: one entry point running any algorithm variant with
//! shared instrumentation, plus the result type the CLI serializes.

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bandit::{bandit_build_step, banditpam_swap, banditpampp_swap, BanditConfig};
use crate::cache::{new_permutation, DistanceSource, PicCache};
use crate::dataset::Dataset;
use crate::error::Error;
use crate::exact::{pam_build_step, pam_swap_step, swap_objective};
use crate::instrument::{Counters, Instrumentation, Phase};
use crate::metric::Metric;
use crate::state::{assign_nearest, assign_nearest_via, clustering_loss, MedoidState, NO_MEDOID};

/// Algorithm variants. The three middle ones isolate the two BanditPAM++
/// ingredients for ablations: virtual arms (`va`) and the
/// permutation-invariant cache (`pic`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Exhaustive PAM, the ground-truth oracle.
    #[serde(rename = "pam")]
    Pam,
    /// Bandit BUILD and pair-arm bandit SWAP, no cache.
    #[serde(rename = "bp")]
    Bp,
    /// Virtual-arm SWAP, no cache.
    #[serde(rename = "bp-va")]
    BpVa,
    /// Pair-arm SWAP with the permutation-invariant cache.
    #[serde(rename = "bp-pic")]
    BpPic,
    /// Virtual arms plus cache.
    #[serde(rename = "bp++")]
    BpPlusPlus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pam,
        Algorithm::Bp,
        Algorithm::BpVa,
        Algorithm::BpPic,
        Algorithm::BpPlusPlus,
    ];

    /// Stable lowercase tag used by the CLI and serialized output.
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Pam => "pam",
            Algorithm::Bp => "bp",
            Algorithm::BpVa => "bp-va",
            Algorithm::BpPic => "bp-pic",
            Algorithm::BpPlusPlus => "bp++",
        }
    }

    /// Inverse of [`Algorithm::tag`].
    pub fn from_tag(tag: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.tag() == tag)
    }

    /// Whether the SWAP search uses virtual arms (one arm per point)
    /// instead of independent pair arms.
    pub fn uses_virtual_arms(self) -> bool {
        matches!(self, Algorithm::BpVa | Algorithm::BpPlusPlus)
    }

    /// Whether distances are cached under one fixed permutation for the
    /// whole fit. The remaining variants draw a fresh permutation per
    /// BUILD step and per SWAP iteration.
    pub fn uses_cache(self) -> bool {
        matches!(self, Algorithm::BpPic | Algorithm::BpPlusPlus)
    }
}

/// One accepted swap in a fit's history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// 1-based swap iteration.
    pub swap: u64,
    /// Point that became a medoid.
    pub point: usize,
    /// Medoid position it replaced.
    pub medoid_position: usize,
    /// Loss after the swap.
    pub loss: f64,
}

/// Everything a fit produces. Serializes to the run JSON document; field
/// order here is the key order on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub algorithm: Algorithm,
    pub k: usize,
    pub n: usize,
    pub metric: Metric,
    /// Final medoids in ascending point order.
    pub medoids: Vec<usize>,
    pub loss: f64,
    pub swap_iterations: u64,
    pub build_distance_count: u64,
    pub swap_distance_count: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    /// Total distance computations per swap iteration; see
    /// [`normalized_cost`].
    pub normalized_distance_count: f64,
    pub seed: u64,
    pub wall_ms: f64,
    pub trace: Vec<TraceEntry>,
}

/// Total distance computations divided by `swap_iterations + 1`, so
/// build-only runs stay finite and algorithms taking different numbers of
/// swaps compare on per-iteration work.
pub fn normalized_cost(counters: &Counters) -> f64 {
    counters.total_distances() as f64 / (counters.swap_iterations + 1) as f64
}

/// Replace the medoid at `out_position` with point `in_index` and rebuild
/// the assignment state by a full pass, billed to the SWAP phase.
///
/// Swapping a point with itself is a no-op that returns an equal state;
/// swapping in a point that is already a medoid at a different position is
/// an error.
pub fn update_state_after_swap(
    data: &Dataset,
    metric: Metric,
    state: &MedoidState,
    out_position: usize,
    in_index: usize,
    instr: &Instrumentation,
) -> Result<MedoidState, Error> {
    let n = data.n();
    let k = state.k();
    if out_position >= k {
        return Err(Error::PositionOutOfRange {
            position: out_position,
            k,
        });
    }
    if in_index >= n {
        return Err(Error::MedoidOutOfRange { index: in_index, n });
    }
    for (p, &m) in state.medoids.iter().enumerate() {
        if m == in_index && p != out_position {
            return Err(Error::DuplicateMedoid { index: in_index });
        }
    }
    let mut medoids = state.medoids.clone();
    medoids[out_position] = in_index;
    assign_nearest(data, metric, &medoids, Phase::Swap, instr)
}

/// Run one complete fit: BUILD, then swap iterations until no exact
/// improvement remains or the swap budget is spent.
///
/// Every accepted swap is verified by an exact delta recomputation before
/// it is applied, so a bandit fit can never end on a swap the oracle would
/// reject. Counters are reported as the difference of snapshots, so a
/// shared `Instrumentation` may be reused across fits.
pub fn fit(
    data: &Dataset,
    metric: Metric,
    k: usize,
    algorithm: Algorithm,
    config: &BanditConfig,
    instr: &Instrumentation,
) -> Result<ClusteringResult, Error> {
    let started = Instant::now();
    let n = data.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let max_swaps = config.max_swaps.unwrap_or(k);
    let start_counters = instr.snapshot();
    let mut trace = Vec::new();

    let state = match algorithm {
        Algorithm::Pam => fit_pam(data, metric, k, max_swaps, instr, &mut trace)?,
        _ => fit_bandit(
            data, metric, k, algorithm, config, max_swaps, instr, &mut trace,
        )?,
    };

    let mut medoids = state.medoids.clone();
    medoids.sort_unstable();
    let loss = clustering_loss(data, metric, &medoids)?;
    debug_assert!(
        (loss - state.loss()).abs() <= 1e-9 * loss.abs().max(1.0),
        "maintained loss {} drifted from recomputed loss {loss}",
        state.loss()
    );

    let counters = instr.snapshot().since(&start_counters);
    Ok(ClusteringResult {
        algorithm,
        k,
        n,
        metric,
        medoids,
        loss,
        swap_iterations: counters.swap_iterations,
        build_distance_count: counters.build_distance_count,
        swap_distance_count: counters.swap_distance_count,
        cache_hits: counters.cache_hits,
        cache_misses: counters.cache_misses,
        normalized_distance_count: normalized_cost(&counters),
        seed: config.seed,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
        trace,
    })
}

fn fit_pam(
    data: &Dataset,
    metric: Metric,
    k: usize,
    max_swaps: usize,
    instr: &Instrumentation,
    trace: &mut Vec<TraceEntry>,
) -> Result<MedoidState, Error> {
    let mut medoids = Vec::with_capacity(k);
    for _ in 0..k {
        medoids.push(pam_build_step(data, metric, &medoids, instr)?);
    }
    let mut state = assign_nearest(data, metric, &medoids, Phase::Build, instr)?;
    let mut swaps = 0u64;
    while (swaps as usize) < max_swaps {
        let (point, position, delta) = pam_swap_step(data, metric, &state, instr);
        if !(delta < 0.0) {
            break;
        }
        let mut medoids = state.medoids.clone();
        medoids[position] = point;
        state = assign_nearest(data, metric, &medoids, Phase::Swap, instr)?;
        swaps += 1;
        instr.count_swap_iteration();
        trace.push(TraceEntry {
            swap: swaps,
            point,
            medoid_position: position,
            loss: state.loss(),
        });
    }
    Ok(state)
}

#[allow(clippy::too_many_arguments)]
fn fit_bandit(
    data: &Dataset,
    metric: Metric,
    k: usize,
    algorithm: Algorithm,
    config: &BanditConfig,
    max_swaps: usize,
    instr: &Instrumentation,
    trace: &mut Vec<TraceEntry>,
) -> Result<MedoidState, Error> {
    let n = data.n();
    let params = config.search_params(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // Cached variants fix one permutation for the whole fit so entries
    // stay valid across phases; the others re-randomize each search.
    let cache = if algorithm.uses_cache() {
        Some(PicCache::new(
            n,
            config.cache_width,
            new_permutation(n, rng.next_u64())?,
        ))
    } else {
        None
    };

    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut nearest = vec![NO_MEDOID; n];
    let mut second = vec![NO_MEDOID; n];
    let mut d1 = vec![f64::INFINITY; n];
    let mut d2 = vec![f64::INFINITY; n];
    for _ in 0..k {
        let fresh;
        let source = match &cache {
            Some(c) => DistanceSource::Cached(c),
            None => {
                fresh = new_permutation(n, rng.next_u64())?;
                DistanceSource::Direct(&fresh)
            }
        };
        let chosen = bandit_build_step(data, metric, &source, &d1, &medoids, &params, instr);
        // Fold the new medoid into the running nearest/second assignment.
        let position = medoids.len();
        for s in 0..n {
            let d = source.by_point(data, metric, chosen, s, Phase::Build, instr);
            if d < d1[s] {
                d2[s] = d1[s];
                second[s] = nearest[s];
                d1[s] = d;
                nearest[s] = position;
            } else if d < d2[s] {
                d2[s] = d;
                second[s] = position;
            }
        }
        medoids.push(chosen);
    }
    let mut state = MedoidState {
        medoids,
        nearest,
        second,
        d1,
        d2,
    };

    let mut swaps = 0u64;
    while (swaps as usize) < max_swaps {
        let fresh;
        let source = match &cache {
            Some(c) => DistanceSource::Cached(c),
            None => {
                fresh = new_permutation(n, rng.next_u64())?;
                DistanceSource::Direct(&fresh)
            }
        };
        let (point, position, _) = if algorithm.uses_virtual_arms() {
            banditpampp_swap(data, metric, &source, &state, &params, instr)
        } else {
            banditpam_swap(data, metric, &source, &state, &params, instr)
        };
        // The estimate picked the swap; an exact pass decides whether it
        // really improves the loss before anything is committed.
        let mut d_row = vec![0.0; n];
        for (s, slot) in d_row.iter_mut().enumerate() {
            *slot = source.by_point(data, metric, point, s, Phase::Swap, instr);
        }
        let delta = swap_objective(&state, position, &d_row);
        if !(delta < 0.0) {
            break;
        }
        let mut medoids = state.medoids.clone();
        medoids[position] = point;
        state = assign_nearest_via(data, &medoids, &mut |j, s| {
            source.by_point(data, metric, medoids[j], s, Phase::Swap, instr)
        });
        swaps += 1;
        instr.count_swap_iteration();
        trace.push(TraceEntry {
            swap: swaps,
            point,
            medoid_position: position,
            loss: state.loss(),
        });
    }
    Ok(state)
}
