//! Exact and bandit-accelerated k-medoids clustering.
//!
//! The loss being minimized is the sum over all points of the distance to
//! their nearest medoid, where medoids are actual dataset points. The
//! exhaustive PAM algorithm ([`pam_fit`]) is the ground-truth oracle: a
//! greedy BUILD phase followed by best-swap iterations, each scanning
//! every candidate against every point. The bandit variants reach the
//! same solutions while computing far fewer distances by treating each
//! candidate as a bandit arm and sampling reference points until the
//! winner is statistically separated; anything still ambiguous when the
//! samples run out is settled exactly.
//!
//! Two independent accelerations on top of the bandit SWAP can be toggled
//! per run for ablations:
//! - virtual arms: one arm per candidate point instead of per
//!   `(point, medoid)` pair, sharing a single distance computation across
//!   all `k` potential swap targets;
//! - a permutation-invariant cache: distances to the first `W` reference
//!   points of one fixed shuffle are stored once and replayed across
//!   phases and iterations.
//!
//! [`fit`] runs any variant under shared [`Instrumentation`] so the
//! distance work, cache behavior, and swap trajectories can be compared;
//! an accepted swap is always re-verified with an exact pass first, so
//! accelerated runs never commit a swap the oracle would reject.

mod bandit;
mod cache;
mod dataset;
mod driver;
mod error;
mod exact;
mod instrument;
mod metric;
mod state;

pub use bandit::{
    adaptive_search, bandit_build_step, banditpam_swap, banditpampp_swap, confidence_radius,
    estimate_sigma, BanditConfig, SearchParams,
};
pub use cache::{cached_distance, new_permutation, DistanceSource, Permutation, PicCache};
pub use dataset::{generate_synthetic, load_csv, subsample_with_replacement, write_csv, Dataset};
pub use driver::{
    fit, normalized_cost, update_state_after_swap, Algorithm, ClusteringResult, TraceEntry,
};
pub use error::{Error, ErrorKind};
pub use exact::{pam_build_step, pam_fit, pam_swap_step, swap_delta};
pub use instrument::{Counters, Instrumentation, Phase};
pub use metric::{distance, Metric};
pub use state::{assign_nearest, clustering_loss, MedoidState, NO_MEDOID};
