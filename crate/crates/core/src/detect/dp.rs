// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment-neighbourhood dynamic programming: the exact least-squares
//! segmentation for every change-point count up to a bound.

use super::cost::SegmentCosts;
use super::max_feasible_r;
use crate::error::{Error, Result};
use crate::model::{Segmentation, Series};

/// Relative slack under which two candidate costs count as tied.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

pub(crate) fn tied_or_better(value: f64, best: f64) -> bool {
    value <= best + TIE_TOLERANCE * best.abs().max(1.0)
}

/// Exact optimal segmentations for `r = 0..=max_r`.
///
/// The table holds suffix optima: `tail[k][i]` is the least cost of rows
/// `(i, n]` split by `k` change-points. Reconstruction walks left to right
/// and always takes the smallest tied boundary, which yields the
/// lexicographically smallest optimal change-point vector.
#[derive(Clone, Debug)]
pub struct DpTable {
    n: usize,
    min_seg: usize,
    tail: Vec<Vec<f64>>,
    costs: SegmentCosts,
}

impl DpTable {
    pub fn new(series: &Series, max_r: usize, min_segment_length: usize) -> Result<Self> {
        if min_segment_length == 0 {
            return Err(Error::config("min_segment_length must be >= 1"));
        }
        let n = series.n();
        let m = min_segment_length;
        let max_r = max_r.min(max_feasible_r(n, m).unwrap_or(0));
        let costs = SegmentCosts::new(series);

        let mut tail = Vec::with_capacity(max_r + 1);
        let base: Vec<f64> = (0..=n)
            .map(|i| if n - i >= m { costs.cost(i, n) } else { f64::INFINITY })
            .collect();
        tail.push(base);
        for k in 1..=max_r {
            let prev = &tail[k - 1];
            let mut row = vec![f64::INFINITY; n + 1];
            for (i, slot) in row.iter_mut().enumerate() {
                // need room for k+1 segments of length >= m in (i, n]
                if n - i < (k + 1) * m {
                    break;
                }
                let mut best = f64::INFINITY;
                for j in i + m..=n - k * m {
                    let v = costs.cost(i, j) + prev[j];
                    if v < best {
                        best = v;
                    }
                }
                *slot = best;
            }
            tail.push(row);
        }
        Ok(Self { n, min_seg: m, tail, costs })
    }

    /// Largest `r` the table covers.
    pub fn max_r(&self) -> usize {
        self.tail.len() - 1
    }

    /// Optimal cost with exactly `r` change-points.
    pub fn cost(&self, r: usize) -> Option<f64> {
        self.tail.get(r).map(|row| row[0]).filter(|c| c.is_finite())
    }

    /// Optimal segmentation with exactly `r` change-points.
    pub fn segmentation(&self, r: usize) -> Result<Segmentation> {
        let target = self.cost(r).ok_or_else(|| {
            Error::capacity(format!(
                "{r} change-points infeasible for n={} with minimum segment length {}",
                self.n, self.min_seg
            ))
        })?;
        let mut cps = Vec::with_capacity(r);
        let mut i = 0;
        let mut remaining = target;
        for k in (1..=r).rev() {
            let prev = &self.tail[k - 1];
            let j = (i + self.min_seg..=self.n - k * self.min_seg)
                .find(|&j| tied_or_better(self.costs.cost(i, j) + prev[j], remaining))
                .expect("optimal boundary exists");
            remaining = prev[j];
            cps.push(j);
            i = j;
        }
        Segmentation::new(cps, self.n)
    }
}

/// Exact least-squares segmentation with `r` change-points.
pub fn dp_exact(series: &Series, r: usize, min_segment_length: usize) -> Result<Segmentation> {
    check_feasible(series.n(), r, min_segment_length)?;
    DpTable::new(series, r, min_segment_length)?.segmentation(r)
}

pub(crate) fn check_feasible(n: usize, r: usize, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::config("min_segment_length must be >= 1"));
    }
    match max_feasible_r(n, m) {
        Some(max) if r <= max => Ok(()),
        _ => Err(Error::capacity(format!(
            "{r} change-points infeasible for n={n} with minimum segment length {m}"
        ))),
    }
}
