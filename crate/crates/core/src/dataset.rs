//! Dataset container plus ingestion and generation utilities.
//!
//! Points are dense `f64` rows stored row-major. Every constructor
//! guarantees the invariants the clustering code relies on: at least one
//! row, rectangular shape, and finite coordinates.

use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;

/// An immutable set of `n` points in `dim` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    data: Vec<f64>,
    n: usize,
    dim: usize,
}

impl Dataset {
    /// Build a dataset from rows, validating shape and finiteness.
    ///
    /// Row and column numbers in errors are 1-based.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Dataset, Error> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::NotPositive { what: "dimension" });
        }
        let n = rows.len();
        let mut data = Vec::with_capacity(n * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::RaggedRow {
                    row: r + 1,
                    expected: dim,
                    got: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue {
                        row: r + 1,
                        col: c + 1,
                    });
                }
                data.push(v);
            }
        }
        Ok(Dataset { data, n, dim })
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimensionality of each point.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `i`-th point.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// All points as owned rows (handy for language bindings).
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Read a dataset from a comma-separated file (UTF-8, LF or CRLF).
///
/// With `has_header` the first row is skipped. Errors name the offending
/// 1-based file line and column.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset, Error> {
    let path = path.as_ref();
    let path_str = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path_str.clone(),
                source: match e.into_kind() {
                    csv::ErrorKind::Io(io) => io,
                    _ => unreachable!(),
                },
            },
            _ => Error::Csv {
                path: path_str.clone(),
                source: e,
            },
        })?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Csv {
            path: path_str.clone(),
            source: e,
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(rows.len() + 1);
        if rows.is_empty() {
            dim = record.len();
        } else if record.len() != dim {
            return Err(Error::RaggedRow {
                row: line,
                expected: dim,
                got: record.len(),
            });
        }
        let mut row = Vec::with_capacity(dim);
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| Error::NonNumericCell {
                row: line,
                col: c + 1,
                cell: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row: line,
                    col: c + 1,
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Dataset::from_rows(rows)
}

/// Write a dataset as headerless CSV.
///
/// Values use Rust's shortest round-trip float formatting, so
/// [`load_csv`] reproduces the dataset exactly.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<(), Error> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..data.n() {
        let row = data.row(i);
        for (c, v) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Uniform in `[0, 1)` from the top 53 bits of a draw.
fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box-Muller. One fresh pair of uniforms per draw;
/// the sine half is discarded to keep the sequence trivially documented.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // u1 in (0, 1] so the log is finite.
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = unit_open(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Generate a seeded Gaussian mixture.
///
/// Cluster centers are drawn uniformly from `[0, 10 * sqrt(clusters))` per
/// coordinate, then each cluster contributes `per_cluster` points at
/// `center + spread * z` with `z` standard normal. Rows are ordered by
/// cluster, so row `c * per_cluster + j` belongs to cluster `c`. The PRNG is
/// ChaCha8 seeded with `seed`; identical arguments reproduce the dataset.
pub fn generate_synthetic(
    clusters: usize,
    per_cluster: usize,
    dim: usize,
    spread: f64,
    seed: u64,
) -> Result<Dataset, Error> {
    if clusters == 0 {
        return Err(Error::NotPositive { what: "clusters" });
    }
    if per_cluster == 0 {
        return Err(Error::NotPositive {
            what: "per_cluster",
        });
    }
    if dim == 0 {
        return Err(Error::NotPositive { what: "dimension" });
    }
    if !(spread >= 0.0) {
        return Err(Error::NotPositive { what: "spread" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 10.0 * (clusters as f64).sqrt();
    let centers: Vec<Vec<f64>> = (0..clusters)
        .map(|_| (0..dim).map(|_| side * unit_open(&mut rng)).collect())
        .collect();

    let mut data = Vec::with_capacity(clusters * per_cluster * dim);
    for center in &centers {
        for _ in 0..per_cluster {
            for &c in center {
                data.push(c + spread * standard_normal(&mut rng));
            }
        }
    }
    Ok(Dataset {
        data,
        n: clusters * per_cluster,
        dim,
    })
}

/// Draw `m` rows uniformly with replacement, seeded.
pub fn subsample_with_replacement(data: &Dataset, m: usize, seed: u64) -> Result<Dataset, Error> {
    if m == 0 {
        return Err(Error::NotPositive {
            what: "sample size",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = data.n() as u64;
    let mut out = Vec::with_capacity(m * data.dim());
    for _ in 0..m {
        // Modulo draw; the bias is O(n / 2^64) and irrelevant here.
        let idx = (rng.next_u64() % n) as usize;
        out.extend_from_slice(data.row(idx));
    }
    Ok(Dataset {
        data: out,
        n: m,
        dim: data.dim(),
    })
}
