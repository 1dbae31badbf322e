//! Distance-computation accounting.
//!
//! Every metric evaluation performed by the clustering code is billed to
//! either the BUILD or the SWAP phase, and every cache lookup is billed as
//! a hit or a miss. These counters are what the benchmark reports, so all
//! algorithm code routes its distance access through them.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

/// Which phase a distance computation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Build,
    Swap,
}

/// Shared counters. Atomic so a future parallel driver can share one
/// instance across workers; ordering is relaxed because the counts are
/// pure tallies with no synchronization role.
#[derive(Debug, Default)]
pub struct Instrumentation {
    build_distances: AtomicU64,
    swap_distances: AtomicU64,
    cache_hits: AtomicU64,
    cache_misses: AtomicU64,
    swap_iterations: AtomicU64,
}

impl Instrumentation {
    pub fn new() -> Instrumentation {
        Instrumentation::default()
    }

    /// Bill one metric evaluation to `phase`.
    pub fn count_distance(&self, phase: Phase) {
        match phase {
            Phase::Build => self.build_distances.fetch_add(1, Ordering::Relaxed),
            Phase::Swap => self.swap_distances.fetch_add(1, Ordering::Relaxed),
        };
    }

    pub fn count_hit(&self) {
        self.cache_hits.fetch_add(1, Ordering::Relaxed);
    }

    pub fn count_miss(&self) {
        self.cache_misses.fetch_add(1, Ordering::Relaxed);
    }

    pub fn count_swap_iteration(&self) {
        self.swap_iterations.fetch_add(1, Ordering::Relaxed);
    }

    pub fn build_distance_count(&self) -> u64 {
        self.build_distances.load(Ordering::Relaxed)
    }

    pub fn swap_distance_count(&self) -> u64 {
        self.swap_distances.load(Ordering::Relaxed)
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache_hits.load(Ordering::Relaxed)
    }

    pub fn cache_misses(&self) -> u64 {
        self.cache_misses.load(Ordering::Relaxed)
    }

    pub fn swap_iterations(&self) -> u64 {
        self.swap_iterations.load(Ordering::Relaxed)
    }

    /// Copy the current counter values.
    pub fn snapshot(&self) -> Counters {
        Counters {
            build_distance_count: self.build_distance_count(),
            swap_distance_count: self.swap_distance_count(),
            cache_hits: self.cache_hits(),
            cache_misses: self.cache_misses(),
            swap_iterations: self.swap_iterations(),
        }
    }
}

/// A plain-value snapshot of [`Instrumentation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub build_distance_count: u64,
    pub swap_distance_count: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    pub swap_iterations: u64,
}

impl Counters {
    /// Total metric evaluations across both phases.
    pub fn total_distances(&self) -> u64 {
        self.build_distance_count + self.swap_distance_count
    }

    /// Field-wise difference `self - start`: the activity between two
    /// snapshots of one instrumentation instance.
    pub fn since(&self, start: &Counters) -> Counters {
        Counters {
            build_distance_count: self.build_distance_count - start.build_distance_count,
            swap_distance_count: self.swap_distance_count - start.swap_distance_count,
            cache_hits: self.cache_hits - start.cache_hits,
            cache_misses: self.cache_misses - start.cache_misses,
            swap_iterations: self.swap_iterations - start.swap_iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counters_accumulate_per_phase() {
        let instr = Instrumentation::new();
        instr.count_distance(Phase::Build);
        instr.count_distance(Phase::Build);
        instr.count_distance(Phase::Swap);
        instr.count_hit();
        instr.count_miss();
        instr.count_swap_iteration();
        let snap = instr.snapshot();
        assert_eq!(snap.build_distance_count, 2);
        assert_eq!(snap.swap_distance_count, 1);
        assert_eq!(snap.cache_hits, 1);
        assert_eq!(snap.cache_misses, 1);
        assert_eq!(snap.swap_iterations, 1);
        assert_eq!(snap.total_distances(), 3);
    }
}
