// SPDX-License-Identifier: MIT OR Apache-2.0

//! Flat TOML scenario files for `segwise simulate`.

use std::path::Path;

use serde::Deserialize;

use segwise_core::{DetectorConfig, DetectorKind, ErrorLaw, PnPolicy, SimConfig, SplitMode};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Split,
    Vfold,
}

/// Every field is optional and falls back to the library default.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: Option<String>,
    pub n: Option<usize>,
    pub k_n: Option<usize>,
    pub d: Option<usize>,
    pub snr: Option<f64>,
    pub error_law: Option<ErrorLaw>,
    pub theta: Option<[f64; 2]>,
    pub jitter_a: Option<usize>,
    pub replications: Option<usize>,
    pub bootstrap: Option<usize>,
    pub alpha: Option<f64>,
    pub detector: Option<DetectorKind>,
    pub mode: Option<ModeName>,
    pub folds: Option<usize>,
    pub p_n: Option<usize>,
    pub min_segment_length: Option<usize>,
    pub wbs_intervals: Option<usize>,
    pub master_seed: Option<u64>,
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid scenario: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_config(&self) -> CliResult<SimConfig> {
        let base = SimConfig::default();
        let mut detector = DetectorConfig::with_kind(self.detector.unwrap_or(base.detector.kind));
        if let Some(m) = self.min_segment_length {
            detector.min_segment_length = m;
        }
        if let Some(w) = self.wbs_intervals {
            detector.wbs_intervals = w;
        }
        let mode = match (self.mode.unwrap_or(ModeName::Split), self.folds) {
            (ModeName::Split, None) => SplitMode::OddEven,
            (ModeName::Split, Some(_)) => {
                return Err(CliError::Config("`folds` requires mode = \"vfold\"".into()));
            }
            (ModeName::Vfold, folds) => SplitMode::VFold(folds.unwrap_or(3)),
        };
        let config = SimConfig {
            n: self.n.unwrap_or(base.n),
            k_n: self.k_n.unwrap_or(base.k_n),
            d: self.d.unwrap_or(base.d),
            snr: self.snr.unwrap_or(base.snr),
            error_law: self.error_law.unwrap_or(base.error_law),
            theta: self.theta.map_or(base.theta, |[a, b]| (a, b)),
            jitter_a: self.jitter_a,
            replications: self.replications.unwrap_or(base.replications),
            bootstrap: self.bootstrap.unwrap_or(base.bootstrap),
            alpha: self.alpha.unwrap_or(base.alpha),
            detector,
            mode,
            p_n: self.p_n.map_or(PnPolicy::Auto, PnPolicy::Fixed),
            master_seed: self.master_seed.unwrap_or(base.master_seed),
        };
        config.validate()?;
        Ok(config)
    }
}
