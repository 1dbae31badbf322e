//! Per-point nearest / second-nearest medoid bookkeeping.
//!
//! The swap algorithms never re-derive distances to the current medoids;
//! they read them from a [`MedoidState`] that the driver keeps in sync with
//! the medoid list. Keeping `d1`/`d2` exact is what makes the condensed
//! swap-delta formula exact.

use crate::dataset::Dataset;
use crate::error::Error;
use crate::instrument::{Instrumentation, Phase};
use crate::metric::{distance, Metric};

/// Sentinel for "no such medoid" (second-nearest with `k = 1`).
pub const NO_MEDOID: usize = usize::MAX;

/// Medoid list plus, for every point, its nearest and second-nearest
/// medoid *positions* (indices into `medoids`) and those two distances.
///
/// Invariants, upheld by every constructor in this crate:
/// - `medoids` are distinct, in-range point indices;
/// - `nearest[s]` / `second[s]` are positions into `medoids`, ties broken
///   toward the lowest position;
/// - `d1[s] <= d2[s]`, and with `k = 1` the second slot is the sentinel
///   `NO_MEDOID` with `d2[s] = +inf`;
/// - `d1`/`d2` are exact metric values, never estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MedoidState {
    pub medoids: Vec<usize>,
    pub nearest: Vec<usize>,
    pub second: Vec<usize>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl MedoidState {
    /// Number of medoids.
    pub fn k(&self) -> usize {
        self.medoids.len()
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.nearest.len()
    }

    /// Current loss: mean is not taken, this is the plain sum of `d1`.
    pub fn loss(&self) -> f64 {
        self.d1.iter().sum()
    }
}

/// Validate a medoid list: non-empty, in-range, distinct.
pub(crate) fn validate_medoids(n: usize, medoids: &[usize]) -> Result<(), Error> {
    if medoids.is_empty() {
        return Err(Error::EmptyMedoids);
    }
    for (i, &m) in medoids.iter().enumerate() {
        if m >= n {
            return Err(Error::MedoidOutOfRange { index: m, n });
        }
        if medoids[..i].contains(&m) {
            return Err(Error::DuplicateMedoid { index: m });
        }
    }
    Ok(())
}

/// Exact clustering loss of `medoids`: for every point the distance to its
/// nearest medoid, summed in point order.
///
/// Pure self-check helper; its metric evaluations are deliberately not
/// billed to any counter.
pub fn clustering_loss(data: &Dataset, metric: Metric, medoids: &[usize]) -> Result<f64, Error> {
    validate_medoids(data.n(), medoids)?;
    let mut total = 0.0;
    for s in 0..data.n() {
        let mut best = f64::INFINITY;
        for &m in medoids {
            let d = distance(metric, data.row(m), data.row(s));
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    Ok(total)
}

/// Build a fresh [`MedoidState`] with a full `n * k` pass, billing every
/// evaluation to `phase`.
pub fn assign_nearest(
    data: &Dataset,
    metric: Metric,
    medoids: &[usize],
    phase: Phase,
    instr: &Instrumentation,
) -> Result<MedoidState, Error> {
    validate_medoids(data.n(), medoids)?;
    Ok(assign_nearest_via(data, medoids, &mut |j, s| {
        instr.count_distance(phase);
        distance(metric, data.row(medoids[j]), data.row(s))
    }))
}

/// Same as [`assign_nearest`] but with the distance access abstracted, so
/// the driver can route medoid distances through the permutation cache.
/// `dist(j, s)` returns the distance between medoid position `j` and point
/// `s` and is responsible for all billing.
pub(crate) fn assign_nearest_via(
    data: &Dataset,
    medoids: &[usize],
    dist: &mut dyn FnMut(usize, usize) -> f64,
) -> MedoidState {
    let n = data.n();
    let k = medoids.len();
    let mut nearest = vec![NO_MEDOID; n];
    let mut second = vec![NO_MEDOID; n];
    let mut d1 = vec![f64::INFINITY; n];
    let mut d2 = vec![f64::INFINITY; n];
    for s in 0..n {
        for j in 0..k {
            let d = dist(j, s);
            if d < d1[s] {
                d2[s] = d1[s];
                second[s] = nearest[s];
                d1[s] = d;
                nearest[s] = j;
            } else if d < d2[s] {
                d2[s] = d;
                second[s] = j;
            }
        }
    }
    MedoidState {
        medoids: medoids.to_vec(),
        nearest,
        second,
        d1,
        d2,
    }
}
