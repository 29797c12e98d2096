// SPDX-License-Identifier: MIT OR Apache-2.0

//! Data, segmentation and fitted-model types for the piecewise-constant mean
//! model, plus the segment statistics everything else is built on.
//!
//! Change-points are boundary counts: a segmentation `τ_1 < … < τ_r` of a
//! length-`n` series splits rows `1..=n` into the half-open intervals
//! `(τ_k, τ_{k+1}]` with `τ_0 = 0` and `τ_{r+1} = n`. Row `i` (1-based) is
//! stored at offset `i - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n × d` matrix of observations in time order, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    n: usize,
    d: usize,
}

impl Series {
    /// Builds a series from row-major values.
    pub fn new(values: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::data("series dimension must be >= 1"));
        }
        if n < 2 {
            return Err(Error::data(format!("series needs at least 2 rows; got {n}")));
        }
        if values.len() != n * d {
            return Err(Error::shape(format!(
                "expected {} values for a {n}x{d} series; got {}",
                n * d,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!(
                "non-finite value at row {}, column {}",
                pos / d + 1,
                pos % d + 1
            )));
        }
        Ok(Self { values, n, d })
    }

    /// A univariate series.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec(), values.len(), 1)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::shape(format!(
                "row {} has {} columns; expected {d}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Self::new(rows.concat(), rows.len(), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row at 0-based offset `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    /// The sub-series made of the given 0-based rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Series> {
        let mut values = Vec::with_capacity(rows.len() * self.d);
        for &i in rows {
            if i >= self.n {
                return Err(Error::range(format!("row {i} out of range for n={}", self.n)));
            }
            values.extend_from_slice(self.row(i));
        }
        Series::new(values, rows.len(), self.d)
    }

    /// The first `len` rows.
    pub fn truncated(&self, len: usize) -> Result<Series> {
        if len > self.n {
            return Err(Error::range(format!("cannot truncate n={} to {len}", self.n)));
        }
        Series::new(self.values[..len * self.d].to_vec(), len, self.d)
    }

    /// Sum of squared row norms, `Σ_i ‖x_i‖²`.
    pub fn total_sum_squares(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    fn check_interval(&self, a: usize, b: usize) -> Result<()> {
        if a >= b || b > self.n {
            return Err(Error::range(format!(
                "interval ({a}, {b}] invalid for n={}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Ordered change-points `0 < τ_1 < … < τ_r < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segmentation {
    change_points: Vec<usize>,
    n: usize,
}

impl Segmentation {
    pub fn new(change_points: Vec<usize>, n: usize) -> Result<Self> {
        let mut prev = 0;
        for &t in &change_points {
            if t <= prev || t >= n {
                return Err(Error::range(format!(
                    "change-points {change_points:?} are not strictly increasing within (0, {n})"
                )));
            }
            prev = t;
        }
        Ok(Self { change_points, n })
    }

    /// The segmentation with no change-points.
    pub fn empty(n: usize) -> Self {
        Self { change_points: Vec::new(), n }
    }

    pub fn change_points(&self) -> &[usize] {
        &self.change_points
    }

    /// Number of change-points `r`.
    pub fn len(&self) -> usize {
        self.change_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.change_points.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Segment boundaries `(τ_j, τ_{j+1}]` for `j = 0..=r`.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let starts = std::iter::once(0).chain(self.change_points.iter().copied());
        let ends = self.change_points.iter().copied().chain(std::iter::once(self.n));
        starts.zip(ends)
    }

    /// Index `j` of the segment containing 1-based position `p`.
    pub fn segment_of(&self, p: usize) -> usize {
        self.change_points.partition_point(|&t| t < p)
    }

    /// Shortest segment length.
    pub fn min_segment_len(&self) -> usize {
        self.segments().map(|(a, b)| b - a).min().unwrap_or(self.n)
    }

    /// True when every change-point of `self` is also one of `other`.
    pub fn is_subset_of(&self, other: &Segmentation) -> bool {
        self.change_points
            .iter()
            .all(|t| other.change_points.binary_search(t).is_ok())
    }
}

/// A segmentation together with per-segment mean estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedModel {
    segmentation: Segmentation,
    params: Vec<Vec<f64>>,
}

impl FittedModel {
    pub fn new(segmentation: Segmentation, params: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() != segmentation.len() + 1 {
            return Err(Error::shape(format!(
                "{} change-points need {} segment parameters; got {}",
                segmentation.len(),
                segmentation.len() + 1,
                params.len()
            )));
        }
        if params.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::data("non-finite segment parameter"));
        }
        Ok(Self { segmentation, params })
    }

    /// Fits segment means of `series` over `segmentation`.
    pub fn fit_means(series: &Series, segmentation: Segmentation) -> Result<Self> {
        if segmentation.n() != series.n() {
            return Err(Error::shape(format!(
                "segmentation covers n={} but series has n={}",
                segmentation.n(),
                series.n()
            )));
        }
        let params = segmentation
            .segments()
            .map(|(a, b)| segment_mean(series, a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(segmentation, params)
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.segmentation
    }

    pub fn params(&self) -> &[Vec<f64>] {
        &self.params
    }

    /// Length of the index space the model was fitted on.
    pub fn n_fit(&self) -> usize {
        self.segmentation.n()
    }
}

/// Simulation ground truth: change-points and per-segment means.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueModel {
    segmentation: Segmentation,
    means: Vec<Vec<f64>>,
}

impl TrueModel {
    pub fn new(segmentation: Segmentation, means: Vec<Vec<f64>>) -> Result<Self> {
        if means.len() != segmentation.len() + 1 {
            return Err(Error::shape("one mean vector per segment required"));
        }
        if means.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::data("consecutive segment means must differ"));
        }
        Ok(Self { segmentation, means })
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.segmentation
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    /// Number of true change-points `K_n`.
    pub fn k(&self) -> usize {
        self.segmentation.len()
    }

    pub fn min_spacing(&self) -> usize {
        self.segmentation.segments().map(|(a, b)| b - a).min().unwrap_or(0)
    }

    pub fn max_spacing(&self) -> usize {
        self.segmentation.segments().map(|(a, b)| b - a).max().unwrap_or(0)
    }

    /// Smallest squared jump `min_k ‖β_{k-1} − β_k‖²`; `None` without change-points.
    pub fn min_jump_sq(&self) -> Option<f64> {
        self.means
            .windows(2)
            .map(|w| squared_distance(&w[0], &w[1]))
            .min_by(f64::total_cmp)
    }

    /// The mean sequence `μ_1, …, μ_n` as a series.
    pub fn signal(&self) -> Series {
        let d = self.means[0].len();
        let n = self.segmentation.n();
        let mut values = Vec::with_capacity(n * d);
        for ((a, b), mean) in self.segmentation.segments().zip(&self.means) {
            for _ in a..b {
                values.extend_from_slice(mean);
            }
        }
        Series { values, n, d }
    }
}

pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Coordinate-wise mean of rows `a+1..=b`.
pub fn segment_mean(series: &Series, a: usize, b: usize) -> Result<Vec<f64>> {
    series.check_interval(a, b)?;
    Ok(mean_unchecked(series, a, b))
}

fn mean_unchecked(series: &Series, a: usize, b: usize) -> Vec<f64> {
    let d = series.d();
    let mut mean = vec![0.0; d];
    for i in a..b {
        for (m, v) in mean.iter_mut().zip(series.row(i)) {
            *m += v;
        }
    }
    let len = (b - a) as f64;
    let mut mean: Vec<f64> = mean.into_iter().map(|s| s / len).collect();
    // second pass removes the rounding error of the first
    let mut correction = vec![0.0; d];
    for i in a..b {
        for (c, (v, m)) in correction.iter_mut().zip(series.row(i).iter().zip(&mean)) {
            *c += v - m;
        }
    }
    for (m, c) in mean.iter_mut().zip(correction) {
        *m += c / len;
    }
    mean
}

/// Within-segment sum of squared deviations over `(a, b]`, two-pass.
pub fn sse_cost(series: &Series, a: usize, b: usize) -> Result<f64> {
    series.check_interval(a, b)?;
    let mean = mean_unchecked(series, a, b);
    Ok((a..b).map(|i| squared_distance(series.row(i), &mean)).sum())
}

fn check_pair(x: &Series, y: &Series, t: &Segmentation) -> Result<()> {
    if x.n() != y.n() || x.d() != y.d() {
        return Err(Error::shape(format!(
            "series shapes differ: {}x{} vs {}x{}",
            x.n(),
            x.d(),
            y.n(),
            y.d()
        )));
    }
    if t.n() != x.n() {
        return Err(Error::shape(format!(
            "segmentation covers n={} but series has n={}",
            t.n(),
            x.n()
        )));
    }
    Ok(())
}

/// `C_xy(T) = Σ_j (τ_{j+1} − τ_j) x̄ᵀ ȳ` over the segments of `t`.
pub fn c_inner(x: &Series, y: &Series, t: &Segmentation) -> Result<f64> {
    check_pair(x, y, t)?;
    Ok(t.segments()
        .map(|(a, b)| {
            let xm = mean_unchecked(x, a, b);
            let ym = mean_unchecked(y, a, b);
            (b - a) as f64 * dot(&xm, &ym)
        })
        .sum())
}

/// `S_xy(T)`: the within-segment centred cross-product sum.
pub fn s_inner(x: &Series, y: &Series, t: &Segmentation) -> Result<f64> {
    check_pair(x, y, t)?;
    let mut total = 0.0;
    for (a, b) in t.segments() {
        let xm = mean_unchecked(x, a, b);
        let ym = mean_unchecked(y, a, b);
        for i in a..b {
            total += x
                .row(i)
                .iter()
                .zip(&xm)
                .zip(y.row(i).iter().zip(&ym))
                .map(|((xv, xc), (yv, yc))| (xv - xc) * (yv - yc))
                .sum::<f64>();
        }
    }
    Ok(total)
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
