//! Distances and exact k-nearest-neighbour search.
//!
//! Search is a brute-force scan with a bounded max-heap. Candidates are
//! ordered by squared distance, then by row index, so results are exact and
//! fully deterministic. Reported distances are square roots.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{ColumnKind, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Euclidean,
    /// Squared Euclidean over continuous columns plus `nominal_penalty²`
    /// for every mismatching nominal column.
    Heterogeneous { nominal_penalty: f64 },
}

impl DistanceKind {
    /// Euclidean when every column is continuous, otherwise heterogeneous
    /// with the median continuous deviation over `rows` as penalty.
    pub fn for_dataset(data: &Dataset, rows: &[usize]) -> DistanceKind {
        if data.has_nominal() {
            DistanceKind::Heterogeneous {
                nominal_penalty: median_continuous_std(data, rows),
            }
        } else {
            DistanceKind::Euclidean
        }
    }

    pub fn squared(&self, kinds: &[ColumnKind], a: &[f64], b: &[f64]) -> f64 {
        match *self {
            DistanceKind::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
            DistanceKind::Heterogeneous { nominal_penalty } => {
                let penalty = nominal_penalty * nominal_penalty;
                a.iter()
                    .zip(b)
                    .zip(kinds)
                    .map(|((x, y), kind)| match kind {
                        ColumnKind::Continuous => (x - y) * (x - y),
                        ColumnKind::Nominal if x != y => penalty,
                        ColumnKind::Nominal => 0.0,
                    })
                    .sum()
            }
        }
    }

    pub fn distance(&self, kinds: &[ColumnKind], a: &[f64], b: &[f64]) -> f64 {
        self.squared(kinds, a, b).sqrt()
    }
}

/// Median of the population standard deviations of the continuous columns
/// over `rows`. Zero when there are no continuous columns or rows.
pub fn median_continuous_std(data: &Dataset, rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let n = rows.len() as f64;
    let mut stds: Vec<f64> = data
        .continuous_columns()
        .into_iter()
        .map(|c| {
            let mean = rows.iter().map(|&r| data.row(r)[c]).sum::<f64>() / n;
            (rows.iter().map(|&r| (data.row(r)[c] - mean).powi(2)).sum::<f64>() / n).sqrt()
        })
        .collect();
    if stds.is_empty() {
        return 0.0;
    }
    stds.sort_by(f64::total_cmp);
    let m = stds.len();
    if m % 2 == 1 {
        stds[m / 2]
    } else {
        0.5 * (stds[m / 2 - 1] + stds[m / 2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub row: usize,
    pub distance: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct Candidate {
    dist2: f64,
    row: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.row.cmp(&other.row))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Frozen view over a set of rows of a dataset.
#[derive(Debug, Clone)]
pub struct NeighborIndex<'a> {
    data: &'a Dataset,
    members: Vec<usize>,
    distance: DistanceKind,
}

/// Indexes `rows` of `data`, optionally keeping only rows of `class_filter`.
pub fn build_index<'a>(
    data: &'a Dataset,
    rows: &[usize],
    distance: DistanceKind,
    class_filter: Option<u8>,
) -> Result<NeighborIndex<'a>> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    if distance == DistanceKind::Euclidean && data.has_nominal() {
        return Err(Error::DistanceMismatch);
    }
    let members = match class_filter {
        Some(class) => data.rows_of_class(rows, class),
        None => rows.to_vec(),
    };
    Ok(NeighborIndex {
        data,
        members,
        distance,
    })
}

impl<'a> NeighborIndex<'a> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn distance_kind(&self) -> DistanceKind {
        self.distance
    }

    pub fn contains(&self, row: usize) -> bool {
        self.members.contains(&row)
    }

    fn scan(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<Neighbor> {
        let kinds = self.data.kinds();
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        for &row in &self.members {
            if Some(row) == exclude {
                continue;
            }
            let cand = Candidate {
                dist2: self.distance.squared(kinds, query, self.data.row(row)),
                row,
            };
            if heap.len() < k {
                heap.push(cand);
            } else if let Some(top) = heap.peek() {
                if cand < *top {
                    heap.pop();
                    heap.push(cand);
                }
            }
        }
        heap.into_sorted_vec()
            .into_iter()
            .map(|c| Neighbor {
                row: c.row,
                distance: c.dist2.sqrt(),
            })
            .collect()
    }

    /// The `k` nearest indexed rows to an arbitrary point.
    pub fn knn(&self, query: &[f64], k: usize) -> Result<Vec<Neighbor>> {
        if query.len() != self.data.n_cols() {
            return Err(Error::DimensionMismatch {
                expected: self.data.n_cols(),
                found: query.len(),
            });
        }
        if k == 0 || k > self.members.len() {
            return Err(Error::NotEnoughNeighbors {
                requested: k,
                available: self.members.len(),
            });
        }
        Ok(self.scan(query, k, None))
    }

    /// The `k` nearest indexed rows to row `row` of the underlying dataset,
    /// never including `row` itself.
    pub fn knn_of_row(&self, row: usize, k: usize) -> Result<Vec<Neighbor>> {
        let available = self.members.len() - usize::from(self.contains(row));
        if k == 0 || k > available {
            return Err(Error::NotEnoughNeighbors {
                requested: k,
                available,
            });
        }
        Ok(self.scan(self.data.row(row), k, Some(row)))
    }

    /// Squared distance to the nearest other member, and every member
    /// attaining it.
    pub fn nearest_ties(&self, row: usize) -> Option<(f64, Vec<usize>)> {
        let kinds = self.data.kinds();
        let query = self.data.row(row);
        let mut best = f64::INFINITY;
        let mut rows = Vec::new();
        for &m in &self.members {
            if m == row {
                continue;
            }
            let d2 = self.distance.squared(kinds, query, self.data.row(m));
            if d2 < best {
                best = d2;
                rows.clear();
                rows.push(m);
            } else if d2 == best {
                rows.push(m);
            }
        }
        (!rows.is_empty()).then_some((best, rows))
    }
}
