// SPDX-License-Identifier: MIT OR Apache-2.0

//! CUSUM contrast and wild binary segmentation.

use rand::Rng;

use super::DetectorConfig;
use crate::error::{Error, Result};
use crate::model::{segment_mean, Segmentation, Series};

/// Scaled contrast between the means of `(l, t]` and `(t, u]`:
/// `sqrt((u−t)(t−l)/(u−l)) · ‖x̄_{l,t} − x̄_{t,u}‖`.
pub fn cusum(series: &Series, l: usize, u: usize, t: usize) -> Result<f64> {
    if !(l < t && t < u && u <= series.n()) {
        return Err(Error::range(format!(
            "cusum split {t} invalid for window ({l}, {u}] of n={}",
            series.n()
        )));
    }
    let left = segment_mean(series, l, t)?;
    let right = segment_mean(series, t, u)?;
    let dist: f64 = left.iter().zip(&right).map(|(a, b)| (a - b) * (a - b)).sum();
    let w = ((u - t) as f64 * (t - l) as f64 / (u - l) as f64).sqrt();
    Ok(w * dist.sqrt())
}

/// Candidate change-points ranked by decreasing CUSUM score.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedCandidates {
    entries: Vec<(usize, f64)>,
    n: usize,
}

impl RankedCandidates {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The `r` best-ranked candidates as a segmentation.
    pub fn top(&self, r: usize) -> Result<Segmentation> {
        if r > self.entries.len() {
            return Err(Error::capacity(format!(
                "ranking holds {} candidates; {r} requested",
                self.entries.len()
            )));
        }
        let mut cps: Vec<usize> = self.entries[..r].iter().map(|&(t, _)| t).collect();
        cps.sort_unstable();
        Segmentation::new(cps, self.n)
    }
}

struct Prefix {
    d: usize,
    sums: Vec<f64>,
}

impl Prefix {
    fn new(series: &Series) -> Self {
        let d = series.d();
        let mut center = vec![0.0; d];
        for row in series.rows() {
            for (c, v) in center.iter_mut().zip(row) {
                *c += v;
            }
        }
        center.iter_mut().for_each(|c| *c /= series.n() as f64);
        let mut sums = vec![0.0; (series.n() + 1) * d];
        for (i, row) in series.rows().enumerate() {
            for k in 0..d {
                sums[(i + 1) * d + k] = sums[i * d + k] + row[k] - center[k];
            }
        }
        Self { d, sums }
    }

    fn score(&self, l: usize, u: usize, t: usize) -> f64 {
        let (nl, nr) = ((t - l) as f64, (u - t) as f64);
        let d = self.d;
        let mut dist = 0.0;
        for k in 0..d {
            let left = (self.sums[t * d + k] - self.sums[l * d + k]) / nl;
            let right = (self.sums[u * d + k] - self.sums[t * d + k]) / nr;
            dist += (left - right) * (left - right);
        }
        (nl * nr / (nl + nr) * dist).sqrt()
    }

    /// Best split of `(l, u]` leaving at least `m` rows on each side.
    fn best_split(&self, l: usize, u: usize, m: usize) -> (usize, f64) {
        let mut best = (l + m, f64::NEG_INFINITY);
        for t in l + m..=u - m {
            let s = self.score(l, u, t);
            if s > best.1 {
                best = (t, s);
            }
        }
        best
    }
}

#[derive(Clone, Copy)]
struct Interval {
    l: usize,
    u: usize,
    split: usize,
    score: f64,
}

/// Wild binary segmentation producing a single global ranking.
///
/// Draws `config.wbs_intervals` random windows of length at least
/// `2 · min_segment_length`, then recursively splits each segment at the
/// best CUSUM point among the full segment and all drawn windows inside it.
pub fn wbs_rank<R: Rng + ?Sized>(
    series: &Series,
    config: &DetectorConfig,
    rng: &mut R,
) -> Result<RankedCandidates> {
    config.validate()?;
    let n = series.n();
    let m = config.min_segment_length;
    if n < 2 * m {
        return Err(Error::capacity(format!(
            "series of length {n} too short for minimum segment length {m}"
        )));
    }
    let prefix = Prefix::new(series);

    let mut intervals = Vec::with_capacity(config.wbs_intervals);
    for _ in 0..config.wbs_intervals {
        let mut window = (0, n);
        // rejection sampling; bail out to the full window if it keeps failing
        for _ in 0..64 {
            let a = rng.random_range(0..=n);
            let b = rng.random_range(0..=n);
            let (l, u) = if a <= b { (a, b) } else { (b, a) };
            if u - l >= 2 * m {
                window = (l, u);
                break;
            }
        }
        let (split, score) = prefix.best_split(window.0, window.1, m);
        intervals.push(Interval { l: window.0, u: window.1, split, score });
    }

    let mut entries = Vec::new();
    let mut stack = vec![(0usize, n)];
    while let Some((s, e)) = stack.pop() {
        if e - s < 2 * m {
            continue;
        }
        let mut best = prefix.best_split(s, e, m);
        for iv in intervals.iter().filter(|iv| iv.l >= s && iv.u <= e) {
            if iv.score > best.1 || (iv.score == best.1 && iv.split < best.0) {
                best = (iv.split, iv.score);
            }
        }
        entries.push(best);
        stack.push((best.0, e));
        stack.push((s, best.0));
    }
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(RankedCandidates { entries, n })
}
