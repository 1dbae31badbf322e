//! Seeded reference permutation and the permutation-invariant distance
//! cache (PIC).
//!
//! The bandit phases consume reference points in the order of one fixed
//! seeded permutation. Because every adaptive step walks the *same* prefix
//! positions, a distance keyed by `(query point, permutation position)` is
//! reusable across BUILD steps, SWAP iterations, and state maintenance.
//! Sampling a prefix of a uniform permutation is sampling without
//! replacement, so prefix means stay unbiased estimates of the full mean.

use std::sync::atomic::{AtomicU64, Ordering};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dataset::Dataset;
use crate::error::Error;
use crate::instrument::{Instrumentation, Phase};
use crate::metric::{distance, Metric};

/// A seeded uniform permutation of `0..n` with its inverse.
///
/// Generated with the Durstenfeld form of Fisher-Yates over ChaCha8,
/// drawing each index as `next_u64() % (i + 1)`. The modulo bias is
/// `O(n / 2^64)`, far below anything observable here, and the draw is
/// trivial to document and keep stable across dependency upgrades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
    inverse: Vec<usize>,
    seed: u64,
}

/// Generate the permutation of `0..n` for `seed`.
pub fn new_permutation(n: usize, seed: u64) -> Result<Permutation, Error> {
    if n == 0 {
        return Err(Error::NotPositive {
            what: "permutation length",
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    Ok(Permutation::from_order(order, seed))
}

impl Permutation {
    fn from_order(order: Vec<usize>, seed: u64) -> Permutation {
        let mut inverse = vec![0usize; order.len()];
        for (pos, &idx) in order.iter().enumerate() {
            inverse[idx] = pos;
        }
        Permutation {
            order,
            inverse,
            seed,
        }
    }

    /// Length of the permuted range.
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The point index at position `t`. Panics if `t >= n`.
    pub fn at(&self, t: usize) -> usize {
        self.order[t]
    }

    /// The position holding point `idx`. Panics if `idx >= n`.
    pub fn position_of(&self, idx: usize) -> usize {
        self.inverse[idx]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Slot sentinel: no distance stored. `u64::MAX` is a negative NaN bit
/// pattern, which a real distance (finite, non-negative) can never take.
const EMPTY: u64 = u64::MAX;

/// Permutation-invariant cache: a fixed-width table of distances keyed by
/// `(query point i, permutation position q)`, `q < width`.
///
/// Entries store `f64` bits in atomics, so concurrent readers and
/// last-write-wins inserts are safe; both writers would store identical
/// values anyway. Memory is `n * width` slots, eagerly allocated.
pub struct PicCache {
    store: Vec<AtomicU64>,
    width: usize,
    permutation: Permutation,
}

impl PicCache {
    /// A cache over `data.n()` query points and the given permutation.
    pub fn new(n: usize, width: usize, permutation: Permutation) -> PicCache {
        assert_eq!(
            n,
            permutation.n(),
            "cache size must match permutation length"
        );
        let store = (0..n * width).map(|_| AtomicU64::new(EMPTY)).collect();
        PicCache {
            store,
            width,
            permutation,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }
}

/// `d(x_i, x_{pi(q)})` through the cache.
///
/// Positions `q < width` hit the table: an existing entry is returned with
/// no metric evaluation (one cache hit); an absent one is computed, stored,
/// and billed as one cache miss plus one distance in `phase`. Positions at
/// or past `width` are computed without storing and billed the same way as
/// a miss.
pub fn cached_distance(
    cache: &PicCache,
    data: &Dataset,
    metric: Metric,
    i: usize,
    q: usize,
    phase: Phase,
    instr: &Instrumentation,
) -> f64 {
    let s = cache.permutation.at(q);
    if q < cache.width {
        let slot = &cache.store[i * cache.width + q];
        let bits = slot.load(Ordering::Relaxed);
        if bits != EMPTY {
            instr.count_hit();
            return f64::from_bits(bits);
        }
        let d = distance(metric, data.row(i), data.row(s));
        slot.store(d.to_bits(), Ordering::Relaxed);
        instr.count_miss();
        instr.count_distance(phase);
        return d;
    }
    let d = distance(metric, data.row(i), data.row(s));
    instr.count_miss();
    instr.count_distance(phase);
    d
}

/// How a consumer obtains reference-ordered distances: straight metric
/// evaluations, or through a shared [`PicCache`].
pub enum DistanceSource<'a> {
    /// No caching; every lookup is one billed metric evaluation.
    Direct(&'a Permutation),
    /// Lookups go through the permutation-invariant cache.
    Cached(&'a PicCache),
}

impl<'a> DistanceSource<'a> {
    /// The reference ordering this source walks.
    pub fn permutation(&self) -> &Permutation {
        match self {
            DistanceSource::Direct(p) => p,
            DistanceSource::Cached(c) => c.permutation(),
        }
    }

    /// `d(x_i, x_{pi(q)})`, billed to `phase`.
    pub fn by_position(
        &self,
        data: &Dataset,
        metric: Metric,
        i: usize,
        q: usize,
        phase: Phase,
        instr: &Instrumentation,
    ) -> f64 {
        match self {
            DistanceSource::Direct(p) => {
                instr.count_distance(phase);
                distance(metric, data.row(i), data.row(p.at(q)))
            }
            DistanceSource::Cached(c) => cached_distance(c, data, metric, i, q, phase, instr),
        }
    }

    /// `d(x_i, x_s)` for a point index `s`, routed through the cache slot
    /// at `s`'s permutation position when caching is on.
    pub fn by_point(
        &self,
        data: &Dataset,
        metric: Metric,
        i: usize,
        s: usize,
        phase: Phase,
        instr: &Instrumentation,
    ) -> f64 {
        match self {
            DistanceSource::Direct(_) => {
                instr.count_distance(phase);
                distance(metric, data.row(i), data.row(s))
            }
            DistanceSource::Cached(c) => cached_distance(
                c,
                data,
                metric,
                i,
                c.permutation().position_of(s),
                phase,
                instr,
            ),
        }
    }
}
