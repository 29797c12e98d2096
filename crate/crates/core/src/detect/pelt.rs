// SPDX-License-Identifier: MIT OR Apache-2.0

//! Pruned exact linear time segmentation and the penalty-path adapter that
//! turns it into one segmentation per change-point count.

use std::collections::BTreeMap;

use super::cost::SegmentCosts;
use super::dp::TIE_TOLERANCE;
use super::PenaltyGrid;
use crate::error::{Error, Result};
use crate::model::{Segmentation, Series};

const AUTO_GRID_POINTS: usize = 40;

/// Minimises `Σ SSE + penalty · r` exactly.
///
/// A candidate last change-point `τ` is discarded at time `t` once
/// `F(τ) + C(τ, t) > F(t)`. With a minimum segment length `m` the discard
/// only takes effect from `t + m` on, because `t` itself is not an admissible
/// predecessor before then. Equal totals prefer fewer change-points.
pub fn pelt(series: &Series, penalty: f64, min_segment_length: usize) -> Result<Segmentation> {
    if !(penalty >= 0.0) || !penalty.is_finite() {
        return Err(Error::config(format!("penalty must be finite and >= 0; got {penalty}")));
    }
    if min_segment_length == 0 {
        return Err(Error::config("min_segment_length must be >= 1"));
    }
    let n = series.n();
    let m = min_segment_length;
    if n < 2 * m {
        return Ok(Segmentation::empty(n));
    }
    let costs = SegmentCosts::new(series);

    let mut value = vec![f64::INFINITY; n + 1];
    let mut count = vec![usize::MAX; n + 1];
    let mut last = vec![0usize; n + 1];
    value[0] = -penalty;
    count[0] = 0;

    // (τ, time at which τ was marked for pruning)
    let mut candidates: Vec<(usize, Option<usize>)> = vec![(0, None)];
    for t in m..=n {
        candidates.retain(|&(_, marked)| marked.is_none_or(|p| p + m > t));

        let mut best = f64::INFINITY;
        let mut best_count = usize::MAX;
        let mut best_tau = 0;
        for &(tau, _) in candidates.iter().take_while(|(tau, _)| t - tau >= m) {
            let v = value[tau] + costs.cost(tau, t) + penalty;
            let c = count[tau] + 1;
            let slack = TIE_TOLERANCE * best.abs().max(1.0);
            if v < best - slack || (v <= best + slack && c < best_count) {
                best = v;
                best_count = c;
                best_tau = tau;
            }
        }
        value[t] = best;
        count[t] = best_count;
        last[t] = best_tau;

        for (tau, marked) in candidates.iter_mut() {
            if t - *tau < m {
                break;
            }
            if marked.is_none() && value[*tau] + costs.cost(*tau, t) > best {
                *marked = Some(t);
            }
        }
        if best.is_finite() {
            candidates.push((t, None));
        }
    }

    let mut cps = Vec::new();
    let mut t = n;
    while t > 0 {
        let tau = last[t];
        if tau > 0 {
            cps.push(tau);
        }
        t = tau;
    }
    cps.reverse();
    Segmentation::new(cps, n)
}

/// Noise variance estimate from first differences, `Σ‖x_{i+1} − x_i‖² / (2(n−1))`.
///
/// Summed over coordinates, so for `d > 1` it estimates the trace of the
/// noise covariance.
pub fn diff_variance(series: &Series) -> f64 {
    let n = series.n();
    let mut acc = 0.0;
    for i in 1..n {
        acc += series
            .row(i)
            .iter()
            .zip(series.row(i - 1))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
    }
    acc / (2.0 * (n - 1) as f64)
}

/// The BIC-like anchor penalty `2 σ̂² log n`.
pub fn anchor_penalty(series: &Series) -> f64 {
    2.0 * diff_variance(series) * (series.n() as f64).ln()
}

/// Geometric grid from `2 σ̂² log n` down to `0.01 σ̂²`, 40 points.
pub fn auto_penalty_grid(series: &Series) -> Vec<f64> {
    let var = diff_variance(series);
    if var <= 0.0 {
        // noise-free: any positive penalty behaves the same
        return vec![1.0];
    }
    let hi = anchor_penalty(series).max(0.01 * var * 1.0001);
    let lo = 0.01 * var;
    let ratio = (lo / hi).powf(1.0 / (AUTO_GRID_POINTS - 1) as f64);
    (0..AUTO_GRID_POINTS).map(|k| hi * ratio.powi(k as i32)).collect()
}

pub(crate) fn resolve_grid(series: &Series, grid: &PenaltyGrid) -> Vec<f64> {
    let mut values = match grid {
        PenaltyGrid::Auto => auto_penalty_grid(series),
        PenaltyGrid::Values(v) => v.clone(),
    };
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Runs PELT over a decreasing penalty grid and keeps the first
/// segmentation seen for each change-point count.
pub fn penalty_path(
    series: &Series,
    grid: &PenaltyGrid,
    min_segment_length: usize,
) -> Result<BTreeMap<usize, Segmentation>> {
    let mut path = BTreeMap::new();
    for penalty in resolve_grid(series, grid) {
        let seg = pelt(series, penalty, min_segment_length)?;
        path.entry(seg.len()).or_insert(seg);
    }
    Ok(path)
}
