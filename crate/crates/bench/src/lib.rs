// SPDX-License-Identifier: MIT OR Apache-2.0

//! Shared fixtures for the benchmarks.

use segwise_core::rng::substream;
use segwise_core::simulation::{gen_model, gen_series};
use segwise_core::{Series, SimConfig};

/// Piecewise-constant Gaussian series with `k` jittered change-points.
pub fn step_series(n: usize, k: usize, snr: f64, seed: u64) -> Series {
    let config = SimConfig { n, k_n: k, snr, ..SimConfig::default() };
    let model = gen_model(&config, &mut substream(seed, &[0])).expect("valid fixture");
    gen_series(&model, &config, &mut substream(seed, &[1]))
}
