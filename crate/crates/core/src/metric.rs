//! Distance metrics over dense `f64` vectors.

use serde::{Deserialize, Serialize};

/// Supported dissimilarities.
///
/// All four are symmetric and non-negative. Only `L1` and `L2` are true
/// metrics; `SquaredL2` and `Cosine` violate the triangle inequality, which
/// is fine here because nothing in this crate relies on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Manhattan distance.
    #[serde(rename = "l1")]
    L1,
    /// Euclidean distance.
    #[serde(rename = "l2")]
    L2,
    /// Squared Euclidean distance.
    #[serde(rename = "sql2")]
    SquaredL2,
    /// `1 - cosine similarity`, in `[0, 2]`. A zero-norm vector is defined
    /// to have similarity 0 with everything, hence distance 1; this is a
    /// documented convention, never an error.
    #[serde(rename = "cosine")]
    Cosine,
}

impl Metric {
    /// Stable lowercase tag used by the CLI and serialized output.
    pub fn tag(self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
            Metric::SquaredL2 => "sql2",
            Metric::Cosine => "cosine",
        }
    }

    /// Inverse of [`Metric::tag`].
    pub fn from_tag(tag: &str) -> Option<Metric> {
        match tag {
            "l1" => Some(Metric::L1),
            "l2" => Some(Metric::L2),
            "sql2" => Some(Metric::SquaredL2),
            "cosine" => Some(Metric::Cosine),
            _ => None,
        }
    }
}

/// Distance between two points under `metric`.
///
/// Panics if the slices differ in length; the caller is expected to hand in
/// rows of one rectangular dataset.
pub fn distance(metric: Metric, x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(
        x.len(),
        y.len(),
        "distance: dimension mismatch ({} vs {})",
        x.len(),
        y.len()
    );
    match metric {
        Metric::L1 => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        Metric::L2 => sq_l2(x, y).sqrt(),
        Metric::SquaredL2 => sq_l2(x, y),
        Metric::Cosine => {
            let mut dot = 0.0;
            let mut nx = 0.0;
            let mut ny = 0.0;
            for (a, b) in x.iter().zip(y) {
                dot += a * b;
                nx += a * a;
                ny += b * b;
            }
            if nx == 0.0 || ny == 0.0 {
                return 1.0;
            }
            // Clamp so float round-off cannot push the distance below zero.
            1.0 - (dot / (nx.sqrt() * ny.sqrt())).clamp(-1.0, 1.0)
        }
    }
}

fn sq_l2(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_distance_to_self() {
        assert_eq!(distance(Metric::L1, &[0.0, 0.0], &[0.0, 0.0]), 0.0);
        assert_eq!(distance(Metric::L2, &[1.5, -2.0], &[1.5, -2.0]), 0.0);
        assert_eq!(distance(Metric::SquaredL2, &[3.0], &[3.0]), 0.0);
    }

    #[test]
    fn euclidean_three_four_five() {
        assert_eq!(distance(Metric::L2, &[3.0, 0.0], &[0.0, 4.0]), 5.0);
        assert_eq!(distance(Metric::SquaredL2, &[3.0, 0.0], &[0.0, 4.0]), 25.0);
        assert_eq!(distance(Metric::L1, &[3.0, 0.0], &[0.0, 4.0]), 7.0);
    }

    #[test]
    fn cosine_orthogonal_is_one() {
        assert_eq!(distance(Metric::Cosine, &[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(distance(Metric::Cosine, &[2.0, 0.0], &[5.0, 0.0]), 0.0);
    }

    #[test]
    fn cosine_zero_norm_is_one_not_an_error() {
        assert_eq!(distance(Metric::Cosine, &[0.0, 0.0], &[1.0, 2.0]), 1.0);
        assert_eq!(distance(Metric::Cosine, &[0.0, 0.0], &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn cosine_opposite_is_two() {
        assert_eq!(distance(Metric::Cosine, &[1.0, 0.0], &[-3.0, 0.0]), 2.0);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dimension_mismatch_panics() {
        distance(Metric::L2, &[1.0, 2.0], &[1.0]);
    }

    #[test]
    fn tags_round_trip() {
        for m in [Metric::L1, Metric::L2, Metric::SquaredL2, Metric::Cosine] {
            assert_eq!(Metric::from_tag(m.tag()), Some(m));
        }
        assert_eq!(Metric::from_tag("euclidean"), None);
    }

    #[test]
    fn serde_uses_the_tags() {
        assert_eq!(
            serde_json::to_string(&Metric::SquaredL2).unwrap(),
            "\"sql2\""
        );
        let back: Metric = serde_json::from_str("\"cosine\"").unwrap();
        assert_eq!(back, Metric::Cosine);
    }
}
