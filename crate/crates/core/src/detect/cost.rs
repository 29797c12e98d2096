// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::model::Series;

/// O(1) segment SSE queries from prefix sums.
///
/// The data are centred on the global mean before accumulation so that
/// `Σx² − (Σx)²/len` does not lose precision to a large common offset.
#[derive(Clone, Debug)]
pub(crate) struct SegmentCosts {
    d: usize,
    sums: Vec<f64>,
    squares: Vec<f64>,
}

impl SegmentCosts {
    pub(crate) fn new(series: &Series) -> Self {
        let (n, d) = (series.n(), series.d());
        let mut center = vec![0.0; d];
        for row in series.rows() {
            for (c, v) in center.iter_mut().zip(row) {
                *c += v;
            }
        }
        center.iter_mut().for_each(|c| *c /= n as f64);

        let mut sums = vec![0.0; (n + 1) * d];
        let mut squares = vec![0.0; n + 1];
        for (i, row) in series.rows().enumerate() {
            let mut sq = 0.0;
            for k in 0..d {
                let v = row[k] - center[k];
                sums[(i + 1) * d + k] = sums[i * d + k] + v;
                sq += v * v;
            }
            squares[i + 1] = squares[i] + sq;
        }
        Self { d, sums, squares }
    }

    /// SSE of rows `(a, b]`; requires `a < b`.
    #[inline]
    pub(crate) fn cost(&self, a: usize, b: usize) -> f64 {
        let len = (b - a) as f64;
        let d = self.d;
        let mut between = 0.0;
        for k in 0..d {
            let s = self.sums[b * d + k] - self.sums[a * d + k];
            between += s * s;
        }
        (self.squares[b] - self.squares[a] - between / len).max(0.0)
    }
}
