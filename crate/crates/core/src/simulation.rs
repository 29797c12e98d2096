// SPDX-License-Identifier: MIT OR Apache-2.0

//! Synthetic mean-shift data and the replication engine that measures how
//! often `K_CV` overshoots the truth by more than the reported budget `U`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cv::{PnPolicy, SplitMode};
use crate::detect::DetectorConfig;
use crate::error::{Error, Result};
use crate::inference::{sequential_k_min, UqConfig};
use crate::model::{Segmentation, Series, TrueModel};
use crate::rng::{derive_seed, substream, tag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorLaw {
    /// iid `N(0, 1)`.
    Gauss,
    /// iid `√0.6 · t(5)`, unit variance.
    #[serde(rename = "t5scaled")]
    T5Scaled,
}

/// One simulation scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub k_n: usize,
    pub d: usize,
    pub snr: f64,
    pub error_law: ErrorLaw,
    /// The two alternating segment levels.
    pub theta: (f64, f64),
    /// Change-point jitter half-width; `None` means `⌊n^{1/4}⌋`.
    pub jitter_a: Option<usize>,
    pub replications: usize,
    pub bootstrap: usize,
    pub alpha: f64,
    pub detector: DetectorConfig,
    pub mode: SplitMode,
    pub p_n: PnPolicy,
    pub master_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 600,
            k_n: 5,
            d: 1,
            snr: 1.0,
            error_law: ErrorLaw::Gauss,
            theta: (-1.0, 1.0),
            jitter_a: None,
            replications: 200,
            bootstrap: 500,
            alpha: 0.1,
            detector: DetectorConfig::default(),
            mode: SplitMode::OddEven,
            p_n: PnPolicy::Auto,
            master_seed: 0,
        }
    }
}

/// Largest integer `a` with `a⁴ ≤ n`.
fn fourth_root_floor(n: usize) -> usize {
    let mut a = (n as f64).powf(0.25) as usize;
    while (a + 1).pow(4) <= n {
        a += 1;
    }
    while a > 0 && a.pow(4) > n {
        a -= 1;
    }
    a
}

impl SimConfig {
    pub fn jitter(&self) -> usize {
        self.jitter_a.unwrap_or_else(|| fourth_root_floor(self.n))
    }

    pub fn uq_config(&self, seed: u64) -> UqConfig {
        UqConfig {
            alpha: self.alpha,
            bootstrap: self.bootstrap,
            mode: self.mode,
            p_n: self.p_n,
            detector: self.detector.clone(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::config(format!("n must be >= 4; got {}", self.n)));
        }
        if self.d == 0 {
            return Err(Error::config("d must be >= 1"));
        }
        if !(self.snr > 0.0) || !self.snr.is_finite() {
            return Err(Error::config(format!("snr must be positive; got {}", self.snr)));
        }
        if self.theta.0 == self.theta.1 || !self.theta.0.is_finite() || !self.theta.1.is_finite() {
            return Err(Error::config("theta levels must be finite and distinct"));
        }
        if self.replications == 0 {
            return Err(Error::config("replications must be >= 1"));
        }
        let spacing = self.n / (self.k_n + 1);
        let a = self.jitter();
        if spacing < 2 * a + 2 {
            return Err(Error::config(format!(
                "segments of length {spacing} cannot absorb jitter {a}; need >= {}",
                2 * a + 2
            )));
        }
        self.uq_config(0).validate()
    }
}

/// True change-points `j⌊n/(K+1)⌋ + Uniform(−a, a)` (rounded) with levels
/// alternating between the two `theta` values from a random start.
pub fn gen_model<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Result<TrueModel> {
    config.validate()?;
    let (n, k) = (config.n, config.k_n);
    let spacing = n / (k + 1);
    let a = config.jitter() as f64;
    let jitter = (a > 0.0).then(|| Uniform::new_inclusive(-a, a).expect("finite bounds"));

    let mut cps = Vec::with_capacity(k);
    let mut prev = 0usize;
    for j in 1..=k {
        let shift = jitter.as_ref().map_or(0.0, |u| u.sample(rng));
        let raw = (j * spacing) as f64 + shift;
        // keep every segment at least 2 long
        let lo = prev + 2;
        let hi = n - 2 * (k - j + 1);
        let t = (raw.round() as usize).clamp(lo, hi);
        cps.push(t);
        prev = t;
    }

    let start: usize = rng.random_range(1..=2);
    let level = |j: usize| if (start + j) % 2 == 0 { config.theta.0 } else { config.theta.1 };
    let means = (0..=k).map(|j| vec![level(j); config.d]).collect();
    TrueModel::new(Segmentation::new(cps, n)?, means)
}

/// Noise scale that makes `sd(μ)/σ` equal the configured SNR.
///
/// A constant signal has no spread to calibrate against; it gets unit
/// noise.
pub fn noise_scale(model: &TrueModel, snr: f64) -> f64 {
    let signal = model.signal();
    let (n, d) = (signal.n(), signal.d());
    let mut var = 0.0;
    for k in 0..d {
        let col: Vec<f64> = signal.rows().map(|r| r[k]).collect();
        let mean = col.iter().sum::<f64>() / n as f64;
        var += col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    }
    let sd = (var / d as f64).sqrt();
    if sd > 0.0 {
        sd / snr
    } else {
        1.0
    }
}

/// One unit-variance error draw.
pub fn sample_error<R: Rng + ?Sized>(law: ErrorLaw, rng: &mut R) -> f64 {
    match law {
        ErrorLaw::Gauss => StandardNormal.sample(rng),
        ErrorLaw::T5Scaled => {
            let z: f64 = StandardNormal.sample(rng);
            let chi2: f64 = (0..5)
                .map(|_| {
                    let g: f64 = StandardNormal.sample(rng);
                    g * g
                })
                .sum();
            0.6f64.sqrt() * z / (chi2 / 5.0).sqrt()
        }
    }
}

/// `ξ_i = μ_i + σ ε_i` with an explicit noise scale.
pub fn gen_series_with_scale<R: Rng + ?Sized>(model: &TrueModel, law: ErrorLaw, sigma: f64, rng: &mut R) -> Series {
    let signal = model.signal();
    let values = signal.values().iter().map(|mu| mu + sigma * sample_error(law, rng)).collect();
    Series::new(values, signal.n(), signal.d()).expect("finite signal and noise")
}

pub fn gen_series<R: Rng + ?Sized>(model: &TrueModel, config: &SimConfig, rng: &mut R) -> Series {
    gen_series_with_scale(model, config.error_law, noise_scale(model, config.snr), rng)
}

/// Outcome of one completed replication.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub seed: u64,
    pub k_n: usize,
    pub k_cv: usize,
    pub k_min: usize,
    pub u: i64,
    pub saturated: bool,
    /// Whether `H_{0,0}` was rejected.
    pub rejected_h0: bool,
    /// Critical value of the test at `r = k_cv`, when the loop got there.
    pub critical_at_k_cv: Option<f64>,
    pub statistic_at_k_cv: Option<f64>,
}

impl ReplicationRecord {
    /// `K_CV − K_n > U`, i.e. `K_min > K_n`.
    pub fn overestimated(&self) -> bool {
        self.k_cv as i64 - self.k_n as i64 > self.u
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationFailure {
    pub replication: usize,
    pub seed: u64,
    pub message: String,
}

/// Aggregate performance over the completed replications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub replications: usize,
    pub completed: usize,
    pub p_plus: f64,
    pub u_mean: f64,
    pub u_sd: f64,
    /// Mean and sd of `K_CV − K_n`.
    pub excess_mean: f64,
    pub excess_sd: f64,
    pub saturated: usize,
    pub h0_rejection_rate: f64,
    /// Fraction with `K_CV ≥ K_n`.
    pub k_cv_at_least_k_n: f64,
    pub records: Vec<ReplicationRecord>,
    pub failures: Vec<ReplicationFailure>,
}

/// Fraction of replications with `K_CV − K_n > U`.
pub fn p_plus(records: &[ReplicationRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::data("no replication records"));
    }
    Ok(records.iter().filter(|r| r.overestimated()).count() as f64 / records.len() as f64)
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Seed of replication `rho` under `master_seed`.
pub fn replication_seed(master_seed: u64, rho: usize) -> u64 {
    derive_seed(master_seed, &[tag::REPLICATION, rho as u64])
}

/// Generates one data set and runs the full procedure on it.
pub fn run_replication(config: &SimConfig, rho: usize) -> std::result::Result<ReplicationRecord, ReplicationFailure> {
    let seed = replication_seed(config.master_seed, rho);
    let outcome = (|| {
        let model = gen_model(config, &mut substream(seed, &[tag::TRUE_MODEL]))?;
        let series = gen_series(&model, config, &mut substream(seed, &[tag::NOISE]));
        let report = sequential_k_min(&series, &config.uq_config(seed))?;
        let at_k_cv = report.test_at(report.k_cv);
        Ok::<_, Error>(ReplicationRecord {
            replication: rho,
            seed,
            k_n: model.k(),
            k_cv: report.k_cv,
            k_min: report.k_min,
            u: report.u,
            saturated: report.saturated,
            rejected_h0: report.trace[0].rejected,
            critical_at_k_cv: at_k_cv.map(|t| t.critical_value),
            statistic_at_k_cv: at_k_cv.map(|t| t.statistic),
        })
    })();
    outcome.map_err(|e| ReplicationFailure { replication: rho, seed, message: e.to_string() })
}

/// Runs `config.replications` independent replications. Each draws from
/// its own substream, so the result does not depend on the thread count.
pub fn run_replications(config: &SimConfig) -> Result<SimMetrics> {
    config.validate()?;
    let outcomes: Vec<_> = (0..config.replications)
        .into_par_iter()
        .map(|rho| run_replication(config, rho))
        .collect();
    let (mut records, mut failures) = (Vec::new(), Vec::new());
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok(aggregate(config.replications, records, failures))
}

pub fn aggregate(replications: usize, records: Vec<ReplicationRecord>, failures: Vec<ReplicationFailure>) -> SimMetrics {
    let completed = records.len();
    let frac = |pred: &dyn Fn(&ReplicationRecord) -> bool| {
        if completed == 0 {
            f64::NAN
        } else {
            records.iter().filter(|r| pred(r)).count() as f64 / completed as f64
        }
    };
    let (u_mean, u_sd) = mean_sd(records.iter().map(|r| r.u as f64));
    let (excess_mean, excess_sd) = mean_sd(records.iter().map(|r| r.k_cv as f64 - r.k_n as f64));
    SimMetrics {
        replications,
        completed,
        p_plus: frac(&|r| r.overestimated()),
        u_mean,
        u_sd,
        excess_mean,
        excess_sd,
        saturated: records.iter().filter(|r| r.saturated).count(),
        h0_rejection_rate: frac(&|r| r.rejected_h0),
        k_cv_at_least_k_n: frac(&|r| r.k_cv >= r.k_n),
        records,
        failures,
    }
}
