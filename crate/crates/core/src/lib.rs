// SPDX-License-Identifier: MIT OR Apache-2.0

//! Cross-validated change-point estimation with a lower confidence bound on
//! the number of change-points.
//!
//! The top-level re-exports cover the usual workflow: build a [`Series`],
//! pick a [`UqConfig`], call [`sequential_k_min`].

#![forbid(unsafe_code)]

pub mod cv;
pub mod detect;
pub mod error;
pub mod inference;
pub mod model;
pub mod rng;
pub mod simulation;

pub use cv::{split, CvCurve, CvFit, DeltaTable, PnPolicy, SplitMode, SplitPlan};
pub use detect::{detect, DetectorConfig, DetectorKind, PenaltyGrid};
pub use error::{Error, Result};
pub use inference::{critical_value, sequential_k_min, test_statistic, TestResult, UqConfig, UqReport};
pub use model::{FittedModel, Segmentation, Series, TrueModel};
pub use simulation::{run_replications, ErrorLaw, ReplicationRecord, SimConfig, SimMetrics};
