// SPDX-License-Identifier: MIT OR Apache-2.0

//! Change-point detectors that produce, for each candidate count `r`, a
//! segmentation of a training series.

mod cost;
mod dp;
mod pelt;
mod wbs;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use dp::{dp_exact, DpTable};
pub use pelt::{anchor_penalty, auto_penalty_grid, diff_variance, pelt, penalty_path};
pub use wbs::{cusum, wbs_rank, RankedCandidates};

use crate::error::{Error, Result};
use crate::model::{sse_cost, Segmentation, Series};

/// Longest series the penalty path fills from the exact dynamic program;
/// longer series fall back to the WBS ranking.
pub const DP_FALLBACK_MAX_N: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorKind {
    Wbs,
    Pelt,
    #[serde(rename = "dp")]
    DpExact,
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Wbs => "wbs",
            Self::Pelt => "pelt",
            Self::DpExact => "dp",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyGrid {
    Auto,
    Values(Vec<f64>),
}

/// Which detection algorithm to run and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub kind: DetectorKind,
    /// Number of random WBS windows `M`.
    pub wbs_intervals: usize,
    pub min_segment_length: usize,
    pub penalty_grid: PenaltyGrid,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            kind: DetectorKind::Pelt,
            wbs_intervals: 500,
            min_segment_length: 2,
            penalty_grid: PenaltyGrid::Auto,
        }
    }
}

impl DetectorConfig {
    pub fn with_kind(kind: DetectorKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn wbs() -> Self {
        Self::with_kind(DetectorKind::Wbs)
    }

    pub fn pelt() -> Self {
        Self::with_kind(DetectorKind::Pelt)
    }

    pub fn dp_exact() -> Self {
        Self::with_kind(DetectorKind::DpExact)
    }

    pub fn validate(&self) -> Result<()> {
        if self.wbs_intervals == 0 {
            return Err(Error::config("wbs_intervals must be >= 1"));
        }
        if self.min_segment_length == 0 {
            return Err(Error::config("min_segment_length must be >= 1"));
        }
        if let PenaltyGrid::Values(values) = &self.penalty_grid {
            if values.is_empty() {
                return Err(Error::config("penalty grid is empty"));
            }
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::config("penalty grid values must be finite and >= 0"));
            }
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::config("penalty grid values must be distinct"));
            }
        }
        Ok(())
    }
}

/// Largest change-point count a length-`n` series admits with minimum
/// segment length `m`: `floor(n / m) − 1`.
pub fn max_feasible_r(n: usize, m: usize) -> Option<usize> {
    if m == 0 {
        return None;
    }
    (n / m).checked_sub(1)
}

/// Total within-segment SSE of a segmentation.
pub fn segmentation_cost(series: &Series, seg: &Segmentation) -> Result<f64> {
    if seg.n() != series.n() {
        return Err(Error::shape(format!(
            "segmentation covers n={} but series has n={}",
            seg.n(),
            series.n()
        )));
    }
    seg.segments().map(|(a, b)| sse_cost(series, a, b)).sum()
}

/// Exactly `r` change-points from the configured detector.
pub fn detect<R: Rng + ?Sized>(
    series: &Series,
    r: usize,
    config: &DetectorConfig,
    rng: &mut R,
) -> Result<Segmentation> {
    config.validate()?;
    dp::check_feasible(series.n(), r, config.min_segment_length)?;
    if r == 0 {
        return Ok(Segmentation::empty(series.n()));
    }
    candidate_family(series, r, config, rng)?
        .pop()
        .flatten()
        .ok_or_else(|| Error::capacity(format!("{} detector cannot produce {r} change-points", config.kind)))
}

/// One segmentation per `r = 0..=max_r` (`None` where the detector cannot
/// produce that count). The result always has `max_r + 1` entries.
pub fn candidate_family<R: Rng + ?Sized>(
    series: &Series,
    max_r: usize,
    config: &DetectorConfig,
    rng: &mut R,
) -> Result<Vec<Option<Segmentation>>> {
    config.validate()?;
    let n = series.n();
    let m = config.min_segment_length;
    let cap = max_feasible_r(n, m);
    let mut family = vec![None; max_r + 1];
    family[0] = Some(Segmentation::empty(n));
    let Some(cap) = cap else {
        return Ok(family);
    };
    let reach = max_r.min(cap);

    match config.kind {
        DetectorKind::Wbs => fill_from_wbs(series, config, rng, &mut family, reach)?,
        DetectorKind::DpExact => fill_from_dp(series, m, &mut family, reach)?,
        DetectorKind::Pelt => {
            for (r, seg) in penalty_path(series, &config.penalty_grid, m)? {
                if r <= reach {
                    family[r] = Some(seg);
                }
            }
            if family[..=reach].iter().any(Option::is_none) {
                if n <= DP_FALLBACK_MAX_N {
                    fill_from_dp(series, m, &mut family, reach)?;
                } else {
                    fill_from_wbs(series, config, rng, &mut family, reach)?;
                }
            }
        }
    }
    Ok(family)
}

fn fill_from_dp(
    series: &Series,
    m: usize,
    family: &mut [Option<Segmentation>],
    reach: usize,
) -> Result<()> {
    let Some(top) = (0..=reach).rev().find(|&r| family[r].is_none()) else {
        return Ok(());
    };
    let table = DpTable::new(series, top, m)?;
    for (r, slot) in family.iter_mut().enumerate().take(top + 1) {
        if slot.is_none() {
            *slot = Some(table.segmentation(r)?);
        }
    }
    Ok(())
}

fn fill_from_wbs<R: Rng + ?Sized>(
    series: &Series,
    config: &DetectorConfig,
    rng: &mut R,
    family: &mut [Option<Segmentation>],
    reach: usize,
) -> Result<()> {
    let ranked = match wbs_rank(series, config, rng) {
        Ok(r) => r,
        Err(Error::Capacity(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let available = ranked.entries().len().min(reach);
    for (r, slot) in family.iter_mut().enumerate().take(available + 1) {
        if slot.is_none() {
            *slot = Some(ranked.top(r)?);
        }
    }
    Ok(())
}
