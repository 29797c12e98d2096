// SPDX-License-Identifier: MIT OR Apache-2.0

//! Max-type test of `H_{0,r}`: no model with more change-points predicts
//! better than the model with `r`. Calibrated by a Gaussian multiplier
//! bootstrap and applied sequentially from `r = 0` to find `K_min`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cv::{select_k_cv, split, CvFit, DeltaTable, PnPolicy, SplitMode};
use crate::detect::{detect, DetectorConfig};
use crate::error::{Error, Result};
use crate::model::{c_inner, Segmentation, Series};
use crate::rng::{substream, tag};

/// Outcome of one test of `H_{0,r}`.
///
/// When no column of the table is usable the statistic and the critical
/// value are both `-∞` and the hypothesis is accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub r: usize,
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub bootstrap: usize,
    pub rejected: bool,
    pub degenerate_s: Vec<usize>,
}

/// Standardised, scaled centred columns, column-major, one per usable `s`.
struct Standardized {
    rows: usize,
    z: Vec<f64>,
}

impl Standardized {
    fn new(table: &DeltaTable) -> Self {
        let rows = table.rows();
        let root = (rows as f64).sqrt();
        let mut z = Vec::new();
        for k in (0..table.s_values().len()).filter(|&k| !table.is_degenerate(k)) {
            let scale = 1.0 / (table.sigma_hat()[k] * root);
            z.extend(table.centered_column(k).into_iter().map(|v| v * scale));
        }
        Self { rows, z }
    }

    fn max_projection(&self, e: &[f64]) -> f64 {
        self.z
            .chunks_exact(self.rows)
            .map(|col| dot4(col, e))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `max_s √rows · Δ̂_{r,s} / σ̂_{r,s}` over non-degenerate columns.
///
/// In the odd/even split `rows = n_te`; in V-fold mode every used
/// observation is a row, so `rows = n`.
pub fn test_statistic(table: &DeltaTable) -> f64 {
    let root = (table.rows() as f64).sqrt();
    (0..table.s_values().len())
        .filter(|&k| !table.is_degenerate(k))
        .map(|k| root * table.delta_hat()[k] / table.sigma_hat()[k])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Multiplier-bootstrap replicates of the statistic under the null.
///
/// Draw `b` uses one standard-normal multiplier per row, shared across all
/// columns, from the substream `(seed, r, b)`; the output does not depend
/// on how draws are scheduled across threads.
pub fn bootstrap_draws(table: &DeltaTable, b: usize, seed: u64) -> Result<Vec<f64>> {
    if b == 0 {
        return Err(Error::config("bootstrap size B must be >= 1"));
    }
    let std = Standardized::new(table);
    if std.z.is_empty() {
        return Ok(vec![f64::NEG_INFINITY; b]);
    }
    let r = table.r() as u64;
    Ok((0..b)
        .into_par_iter()
        .map_init(
            || vec![0.0; std.rows],
            |e, draw| {
                let mut rng = substream(seed, &[tag::BOOTSTRAP, r, draw as u64]);
                e.iter_mut().for_each(|x| *x = StandardNormal.sample(&mut rng));
                std.max_projection(e)
            },
        )
        .collect())
}

/// `inf{t : B⁻¹ Σ 1(D_b > t) ≤ α}`, i.e. the `⌈B(1−α)⌉`-th smallest draw.
pub fn critical_value(draws: &[f64], alpha: f64) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::config("no bootstrap draws"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::config(format!("alpha must lie in (0, 1); got {alpha}")));
    }
    let b = draws.len();
    // at most floor(αB) draws may exceed the critical value
    let allowed = ((alpha * b as f64 + 1e-9).floor() as usize).min(b - 1);
    let rank = b - allowed;
    let mut work = draws.to_vec();
    let (_, kth, _) = work.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(*kth)
}

/// Statistic, bootstrap critical value and decision for one table.
pub fn run_test(table: &DeltaTable, alpha: f64, b: usize, seed: u64) -> Result<TestResult> {
    let draws = bootstrap_draws(table, b, seed)?;
    let critical = critical_value(&draws, alpha)?;
    let statistic = test_statistic(table);
    Ok(TestResult {
        r: table.r(),
        statistic,
        critical_value: critical,
        alpha,
        bootstrap: b,
        rejected: statistic > critical,
        degenerate_s: table.degenerate_s(),
    })
}

/// Settings for the sequential procedure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UqConfig {
    pub alpha: f64,
    pub bootstrap: usize,
    pub mode: SplitMode,
    pub p_n: PnPolicy,
    pub detector: DetectorConfig,
    pub seed: u64,
}

impl Default for UqConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            bootstrap: 500,
            mode: SplitMode::OddEven,
            p_n: PnPolicy::Auto,
            detector: DetectorConfig::default(),
            seed: 0,
        }
    }
}

impl UqConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!("alpha must lie in (0, 1); got {}", self.alpha)));
        }
        if self.bootstrap == 0 {
            return Err(Error::config("bootstrap size B must be >= 1"));
        }
        if self.p_n == PnPolicy::Fixed(0) {
            return Err(Error::config("candidate bound p_n must be >= 1"));
        }
        self.detector.validate()
    }
}

/// Result of the sequential procedure on one data set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UqReport {
    pub k_cv: usize,
    pub k_min: usize,
    /// `k_cv − k_min`.
    pub u: i64,
    pub alpha: f64,
    pub mode: SplitMode,
    /// True when the loop ran out of candidates without a regular acceptance.
    pub saturated: bool,
    /// Tests for `r = 0..=k_min`.
    pub trace: Vec<TestResult>,
    /// `CV(r)` for `r = 0..=bound`.
    pub cv_curve: Vec<f64>,
    pub p_n: usize,
    /// Largest candidate count available in every training portion.
    pub bound: usize,
    pub n: usize,
    pub n_used: usize,
    /// Change-points of the `k_cv` model in full-series coordinates.
    pub change_points_at_k_cv: Vec<usize>,
    pub warnings: Vec<String>,
}

impl UqReport {
    /// The test performed at `r`, if the loop reached it.
    pub fn test_at(&self, r: usize) -> Option<&TestResult> {
        self.trace.get(r)
    }
}

/// Runs the full procedure: fit the model family once, select `K_CV`, and
/// test `H_{0,0}, H_{0,1}, …` until the first acceptance.
pub fn sequential_k_min(series: &Series, config: &UqConfig) -> Result<UqReport> {
    config.validate()?;
    let plan = split(series.n(), config.mode)?;
    let p_n = config.p_n.resolve(series, &plan, &config.detector)?;
    let fit = CvFit::new(series, &plan, p_n, &config.detector, config.seed)?;
    let curve = fit.cv_curve();
    let k_cv = select_k_cv(&curve);

    let mut trace = Vec::new();
    let mut saturated = false;
    let mut r = 0;
    let k_min = loop {
        if r >= fit.bound() {
            saturated = true;
            trace.push(TestResult {
                r,
                statistic: f64::NEG_INFINITY,
                critical_value: f64::NEG_INFINITY,
                alpha: config.alpha,
                bootstrap: config.bootstrap,
                rejected: false,
                degenerate_s: Vec::new(),
            });
            break r;
        }
        let result = run_test(&fit.delta_table(r)?, config.alpha, config.bootstrap, config.seed)?;
        let rejected = result.rejected;
        trace.push(result);
        if !rejected {
            break r;
        }
        r += 1;
    };

    let change_points_at_k_cv = full_series_change_points(series, &fit, k_cv, config)?;
    Ok(UqReport {
        k_cv,
        k_min,
        u: k_cv as i64 - k_min as i64,
        alpha: config.alpha,
        mode: config.mode,
        saturated,
        trace,
        cv_curve: curve.errors().to_vec(),
        p_n,
        bound: fit.bound(),
        n: series.n(),
        n_used: plan.n(),
        change_points_at_k_cv,
        warnings: plan.warnings().to_vec(),
    })
}

/// Odd/even split: training boundary `τ` maps to `2τ − 1`. V-fold: the
/// detector is rerun on all used rows.
fn full_series_change_points(series: &Series, fit: &CvFit, k: usize, config: &UqConfig) -> Result<Vec<usize>> {
    match config.mode {
        SplitMode::OddEven => {
            let model = fit.models(0)[k].as_ref().expect("k_cv model within bound");
            Ok(model.segmentation().change_points().iter().map(|&t| 2 * t - 1).collect())
        }
        SplitMode::VFold(_) => {
            let used = series.truncated(fit.plan().n())?;
            let mut rng = substream(config.seed, &[tag::FULL_FIT]);
            match detect(&used, k, &config.detector, &mut rng) {
                Ok(seg) => Ok(seg.change_points().to_vec()),
                Err(Error::Capacity(_)) => Ok(Vec::new()),
                Err(e) => Err(e),
            }
        }
    }
}

/// Left side of the overfitting condition on a training series:
/// `{C²_ξ(T_K) − C²_ξ(T_s)} − 2 {C_μξ(T_K) − C_μξ(T_s)}`.
///
/// A non-positive value means the condition holds for this pair of fits.
pub fn check_overfit_condition(
    train: &Series,
    true_means: &Series,
    t_kn: &Segmentation,
    t_s: &Segmentation,
) -> Result<f64> {
    let xi_k = c_inner(train, train, t_kn)?;
    let xi_s = c_inner(train, train, t_s)?;
    let mu_k = c_inner(true_means, train, t_kn)?;
    let mu_s = c_inner(true_means, train, t_s)?;
    Ok((xi_k - xi_s) - 2.0 * (mu_k - mu_s))
}
