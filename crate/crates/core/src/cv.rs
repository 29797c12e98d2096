// SPDX-License-Identifier: MIT OR Apache-2.0

//! Order-preserved splitting, out-of-sample quadratic losses, loss
//! discrepancy tables and the cross-validation selector.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{anchor_penalty, candidate_family, detect, max_feasible_r, pelt, DetectorConfig};
use crate::error::{Error, Result};
use crate::model::{squared_distance, FittedModel, Series};
use crate::rng::{substream, tag};

/// Columns whose standard deviation falls below this are excluded from
/// the test statistic and the bootstrap.
pub const DEGENERATE_SIGMA: f64 = 1e-12;

/// How the data are divided between fitting and evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "folds")]
pub enum SplitMode {
    /// Odd rows train, even rows evaluate (1-based).
    OddEven,
    /// `V` interleaved folds; row `i` belongs to fold `((i−1) mod V) + 1`.
    VFold(usize),
}

impl SplitMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::OddEven => "split",
            Self::VFold(_) => "vfold",
        }
    }
}

/// Role of one observation under a [`SplitPlan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Train,
    Test,
    /// 1-based fold label.
    Fold(usize),
}

/// Assignment of every used row to a role.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPlan {
    mode: SplitMode,
    assignments: Vec<Role>,
    original_n: usize,
    warnings: Vec<String>,
}

/// One fit/evaluate pair derived from a plan. Indices are 0-based rows of
/// the full series, in time order.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalGroup {
    pub train: Vec<usize>,
    pub eval: Vec<usize>,
    /// 1-based evaluation position of each `eval` row.
    pub positions: Vec<usize>,
    /// Length of the evaluation index space the positions refer to.
    pub eval_len: usize,
}

pub fn split(n: usize, mode: SplitMode) -> Result<SplitPlan> {
    if n < 4 {
        return Err(Error::data(format!("need at least 4 observations to split; got {n}")));
    }
    let mut warnings = Vec::new();
    let assignments = match mode {
        SplitMode::OddEven => {
            let used = n - n % 2;
            if used != n {
                warnings.push(format!(
                    "odd sample size {n}: dropped the last observation for the odd/even split"
                ));
            }
            (0..used)
                .map(|i| if i % 2 == 0 { Role::Train } else { Role::Test })
                .collect()
        }
        SplitMode::VFold(v) => {
            if v < 2 || v > n / 2 {
                return Err(Error::config(format!("fold count must be in [2, {}]; got {v}", n / 2)));
            }
            (0..n).map(|i| Role::Fold(i % v + 1)).collect()
        }
    };
    Ok(SplitPlan { mode, assignments, original_n: n, warnings })
}

impl SplitPlan {
    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    /// Number of rows actually used (after odd-n trimming).
    pub fn n(&self) -> usize {
        self.assignments.len()
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn assignments(&self) -> &[Role] {
        &self.assignments
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Number of evaluation groups: 1 for the odd/even split, `V` otherwise.
    pub fn n_groups(&self) -> usize {
        match self.mode {
            SplitMode::OddEven => 1,
            SplitMode::VFold(v) => v,
        }
    }

    pub fn groups(&self) -> Vec<EvalGroup> {
        let n = self.n();
        match self.mode {
            SplitMode::OddEven => {
                let train: Vec<usize> = (0..n).step_by(2).collect();
                let eval: Vec<usize> = (1..n).step_by(2).collect();
                let positions = (1..=eval.len()).collect();
                let eval_len = eval.len();
                vec![EvalGroup { train, eval, positions, eval_len }]
            }
            SplitMode::VFold(v) => (1..=v)
                .map(|fold| {
                    let (eval, train): (Vec<usize>, Vec<usize>) =
                        (0..n).partition(|&i| self.assignments[i] == Role::Fold(fold));
                    let positions = eval.iter().map(|i| i + 1).collect();
                    EvalGroup { train, eval, positions, eval_len: n }
                })
                .collect(),
        }
    }

    /// Smallest training-portion size over all groups.
    pub fn min_train_len(&self) -> usize {
        match self.mode {
            SplitMode::OddEven => self.n() / 2,
            SplitMode::VFold(v) => self.n() - self.n().div_ceil(v),
        }
    }
}

/// Fits `r` change-points on `train` and estimates segment means.
pub fn fit<R: Rng + ?Sized>(
    train: &Series,
    r: usize,
    detector: &DetectorConfig,
    rng: &mut R,
) -> Result<FittedModel> {
    let seg = detect(train, r, detector, rng)?;
    FittedModel::fit_means(train, seg)
}

/// Quadratic loss of `point` under `model`, after mapping the evaluation
/// position onto the model's index space by `ceil(position · n_fit / eval_len)`.
pub fn predict_loss(model: &FittedModel, point: &[f64], position: usize, eval_len: usize) -> Result<f64> {
    if position == 0 || position > eval_len {
        return Err(Error::range(format!("position {position} outside 1..={eval_len}")));
    }
    let dim = model.params()[0].len();
    if point.len() != dim {
        return Err(Error::shape(format!("point has {} coordinates; model has {dim}", point.len())));
    }
    let j = model.segmentation().segment_of(map_position(position, model.n_fit(), eval_len));
    Ok(squared_distance(point, &model.params()[j]))
}

fn map_position(position: usize, n_fit: usize, eval_len: usize) -> usize {
    (position * n_fit).div_ceil(eval_len)
}

/// Upper bound on candidate change-point counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PnPolicy {
    /// `min(15 + K̂₀, floor(n_tr / (2 m)))`, `K̂₀` the PELT count at the anchor penalty.
    #[default]
    Auto,
    Fixed(usize),
}

impl PnPolicy {
    pub fn resolve(&self, series: &Series, plan: &SplitPlan, detector: &DetectorConfig) -> Result<usize> {
        let p = match *self {
            PnPolicy::Fixed(p) => p,
            PnPolicy::Auto => {
                let m = detector.min_segment_length;
                let used = series.truncated(plan.n())?;
                let anchor = pelt(&used, anchor_penalty(&used), m)?.len();
                (15 + anchor).min(plan.min_train_len() / (2 * m))
            }
        };
        if p == 0 {
            return Err(Error::config("candidate bound p_n must be >= 1"));
        }
        Ok(p)
    }
}

/// Per-row loss discrepancies `δ_{r,s}` for one base count `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTable {
    r: usize,
    s_values: Vec<usize>,
    columns: Vec<Vec<f64>>,
    fold_of: Vec<usize>,
    n_folds: usize,
    mode: SplitMode,
    delta_hat: Vec<f64>,
    sigma_hat: Vec<f64>,
    fold_means: Vec<Vec<f64>>,
}

impl DeltaTable {
    /// Builds a table from raw discrepancy columns and derives `Δ̂`, `σ̂` and
    /// the per-fold means. `fold_of` holds 0-based group labels.
    ///
    /// `Δ̂_{r,s}` is the overall row mean, which equals `V⁻¹ Σ_v (V/n) Σ_{I_v} δ`.
    /// Rows are centred on their own fold's sample mean before `σ̂` is taken,
    /// so centred columns sum to zero inside every fold.
    pub fn from_columns(
        r: usize,
        s_values: Vec<usize>,
        columns: Vec<Vec<f64>>,
        fold_of: Vec<usize>,
        mode: SplitMode,
    ) -> Result<Self> {
        if s_values.is_empty() {
            return Err(Error::capacity(format!("no candidate s > {r}")));
        }
        if s_values.len() != columns.len() || s_values.iter().any(|&s| s <= r) {
            return Err(Error::shape("one column per candidate s > r required"));
        }
        let rows = fold_of.len();
        if rows < 2 || columns.iter().any(|c| c.len() != rows) {
            return Err(Error::shape("every column needs one entry per row (at least 2 rows)"));
        }
        let n_folds = match mode {
            SplitMode::OddEven => 1,
            SplitMode::VFold(v) => v,
        };
        if fold_of.iter().any(|&f| f >= n_folds) {
            return Err(Error::shape("fold label out of range"));
        }
        let mut fold_sizes = vec![0usize; n_folds];
        for &f in &fold_of {
            fold_sizes[f] += 1;
        }
        if fold_sizes.contains(&0) {
            return Err(Error::shape("every fold needs at least one row"));
        }

        let mut delta_hat = Vec::with_capacity(columns.len());
        let mut sigma_hat = Vec::with_capacity(columns.len());
        let mut fold_means = Vec::with_capacity(columns.len());
        for col in &columns {
            let mut sums = vec![0.0; n_folds];
            for (v, &f) in col.iter().zip(&fold_of) {
                sums[f] += v;
            }
            let means: Vec<f64> = sums.iter().zip(&fold_sizes).map(|(s, &k)| s / k as f64).collect();
            delta_hat.push(sums.iter().sum::<f64>() / rows as f64);
            let centered = col.iter().zip(&fold_of).map(|(v, &f)| v - means[f]);
            sigma_hat.push(sample_sd(centered, rows));
            fold_means.push(means);
        }
        Ok(Self { r, s_values, columns, fold_of, n_folds, mode, delta_hat, sigma_hat, fold_means })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s_values(&self) -> &[usize] {
        &self.s_values
    }

    pub fn rows(&self) -> usize {
        self.fold_of.len()
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    pub fn n_folds(&self) -> usize {
        self.n_folds
    }

    pub fn fold_of(&self) -> &[usize] {
        &self.fold_of
    }

    /// Raw column for the `k`-th candidate.
    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k]
    }

    pub fn delta_hat(&self) -> &[f64] {
        &self.delta_hat
    }

    pub fn sigma_hat(&self) -> &[f64] {
        &self.sigma_hat
    }

    /// Per-fold sample means of the `k`-th column.
    pub fn fold_means(&self, k: usize) -> &[f64] {
        &self.fold_means[k]
    }

    /// The `k`-th column with each row's fold mean subtracted.
    pub fn centered_column(&self, k: usize) -> Vec<f64> {
        let means = &self.fold_means[k];
        self.columns[k].iter().zip(&self.fold_of).map(|(v, &f)| v - means[f]).collect()
    }

    pub fn is_degenerate(&self, k: usize) -> bool {
        self.sigma_hat[k] < DEGENERATE_SIGMA
    }

    /// Candidates `s` whose column is degenerate.
    pub fn degenerate_s(&self) -> Vec<usize> {
        (0..self.s_values.len())
            .filter(|&k| self.is_degenerate(k))
            .map(|k| self.s_values[k])
            .collect()
    }
}

fn sample_sd(values: impl Iterator<Item = f64> + Clone, count: usize) -> f64 {
    let mean = values.clone().sum::<f64>() / count as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (ss / (count - 1) as f64).sqrt()
}

/// Total validation loss `CV(r)` for every available `r = 0..=bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvCurve {
    errors: Vec<f64>,
}

impl CvCurve {
    pub fn new(errors: Vec<f64>) -> Result<Self> {
        if errors.is_empty() {
            return Err(Error::data("empty CV curve"));
        }
        Ok(Self { errors })
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn get(&self, r: usize) -> Option<f64> {
        self.errors.get(r).copied()
    }

    pub fn feasible_r(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.errors.len() - 1
    }
}

/// Argmin of the CV curve, ties to the smallest `r`.
pub fn select_k_cv(curve: &CvCurve) -> usize {
    let mut best = 0;
    for (r, &e) in curve.errors.iter().enumerate().skip(1) {
        if e < curve.errors[best] {
            best = r;
        }
    }
    best
}

/// Models fitted once per training portion for every candidate count, with
/// their out-of-sample losses. Both the CV curve and every discrepancy
/// table are read from this cache.
#[derive(Clone, Debug)]
pub struct CvFit {
    plan: SplitPlan,
    p_n: usize,
    models: Vec<Vec<Option<FittedModel>>>,
    /// `losses[r][row]`, rows in time order.
    losses: Vec<Vec<f64>>,
    row_index: Vec<usize>,
    fold_of: Vec<usize>,
}

impl CvFit {
    /// Fits every training portion of `plan` for `r = 0..=p_n`. Randomised
    /// detectors draw from substreams keyed by `(seed, group)`.
    pub fn new(series: &Series, plan: &SplitPlan, p_n: usize, detector: &DetectorConfig, seed: u64) -> Result<Self> {
        detector.validate()?;
        if plan.original_n() != series.n() {
            return Err(Error::shape(format!(
                "plan built for n={} but series has n={}",
                plan.original_n(),
                series.n()
            )));
        }
        if p_n == 0 {
            return Err(Error::config("candidate bound p_n must be >= 1"));
        }
        let groups = plan.groups();
        let models = groups
            .par_iter()
            .enumerate()
            .map(|(g, group)| {
                let train = series.select(&group.train)?;
                let mut rng = substream(seed, &[tag::WBS_INTERVALS, g as u64]);
                let family = candidate_family(&train, p_n, detector, &mut rng)?;
                family
                    .into_iter()
                    .map(|seg| seg.map(|s| FittedModel::fit_means(&train, s)).transpose())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let bound = (0..=p_n)
            .take_while(|&r| models.iter().all(|fam| fam[r].is_some()))
            .last()
            .unwrap_or(0);

        let mut rows: Vec<(usize, usize, usize)> = Vec::with_capacity(plan.n());
        for (g, group) in groups.iter().enumerate() {
            for (k, &i) in group.eval.iter().enumerate() {
                rows.push((i, g, k));
            }
        }
        rows.sort_unstable();
        let row_index: Vec<usize> = rows.iter().map(|r| r.0).collect();
        let fold_of: Vec<usize> = rows.iter().map(|r| r.1).collect();

        let losses = (0..=bound)
            .map(|r| {
                rows.iter()
                    .map(|&(i, g, k)| {
                        let model = models[g][r].as_ref().expect("model within bound");
                        predict_loss(model, series.row(i), groups[g].positions[k], groups[g].eval_len)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self { plan: plan.clone(), p_n, models, losses, row_index, fold_of })
    }

    pub fn plan(&self) -> &SplitPlan {
        &self.plan
    }

    pub fn p_n(&self) -> usize {
        self.p_n
    }

    /// Largest `r` for which every training portion has a model (all
    /// smaller counts included).
    pub fn bound(&self) -> usize {
        self.losses.len() - 1
    }

    pub fn n_eval(&self) -> usize {
        self.row_index.len()
    }

    /// Full-series row (0-based) of each evaluation row.
    pub fn row_index(&self) -> &[usize] {
        &self.row_index
    }

    /// Fitted models of training portion `group`, indexed by `r`.
    pub fn models(&self, group: usize) -> &[Option<FittedModel>] {
        &self.models[group]
    }

    /// Out-of-sample loss of every evaluation row under model `r`.
    pub fn losses(&self, r: usize) -> Option<&[f64]> {
        self.losses.get(r).map(Vec::as_slice)
    }

    pub fn cv_curve(&self) -> CvCurve {
        CvCurve { errors: self.losses.iter().map(|l| l.iter().sum()).collect() }
    }

    /// Discrepancies `δ_{r,s}` for every available `s ∈ (r, bound]`.
    pub fn delta_table(&self, r: usize) -> Result<DeltaTable> {
        if r >= self.bound() {
            return Err(Error::capacity(format!(
                "no feasible candidate s > {r} (largest available is {})",
                self.bound()
            )));
        }
        let base = &self.losses[r];
        let s_values: Vec<usize> = (r + 1..=self.bound()).collect();
        let columns = s_values
            .iter()
            .map(|&s| base.iter().zip(&self.losses[s]).map(|(a, b)| a - b).collect())
            .collect();
        DeltaTable::from_columns(r, s_values, columns, self.fold_of.clone(), self.plan.mode())
    }
}

/// Discrepancy table for base count `r` (fits all models from scratch).
pub fn delta_table(
    series: &Series,
    plan: &SplitPlan,
    r: usize,
    p_n: usize,
    detector: &DetectorConfig,
    seed: u64,
) -> Result<DeltaTable> {
    if r >= p_n {
        return Err(Error::capacity(format!("r={r} must be below p_n={p_n}")));
    }
    CvFit::new(series, plan, p_n, detector, seed)?.delta_table(r)
}

/// CV curve for `r = 0..=p_n` (truncated at the first unavailable count).
pub fn cv_curve(series: &Series, plan: &SplitPlan, p_n: usize, detector: &DetectorConfig, seed: u64) -> Result<CvCurve> {
    Ok(CvFit::new(series, plan, p_n, detector, seed)?.cv_curve())
}

/// Largest `r` every training portion of `plan` can hold.
pub fn plan_capacity(plan: &SplitPlan, min_segment_length: usize) -> Option<usize> {
    max_feasible_r(plan.min_train_len(), min_segment_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Segmentation;

    fn uni(v: &[f64]) -> Series {
        Series::univariate(v).unwrap()
    }

    #[test]
    fn odd_even_split() {
        let plan = split(6, SplitMode::OddEven).unwrap();
        let g = &plan.groups()[0];
        // 1-based train {1,3,5}, test {2,4,6}
        assert_eq!(g.train, vec![0, 2, 4]);
        assert_eq!(g.eval, vec![1, 3, 5]);
        assert_eq!(g.positions, vec![1, 2, 3]);
        assert!(plan.warnings().is_empty());
    }

    #[test]
    fn vfold_split_interleaves() {
        let plan = split(6, SplitMode::VFold(3)).unwrap();
        let evals: Vec<Vec<usize>> = plan.groups().into_iter().map(|g| g.eval).collect();
        // 1-based {1,4}, {2,5}, {3,6}
        assert_eq!(evals, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let sizes: Vec<usize> = split(11, SplitMode::VFold(3)).unwrap().groups().iter().map(|g| g.eval.len()).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn odd_n_drops_last() {
        let plan = split(7, SplitMode::OddEven).unwrap();
        assert_eq!(plan.n(), 6);
        assert_eq!(plan.original_n(), 7);
        assert_eq!(plan.warnings().len(), 1);
    }

    #[test]
    fn split_errors() {
        assert!(matches!(split(3, SplitMode::OddEven), Err(Error::Data(_))));
        assert!(matches!(split(10, SplitMode::VFold(1)), Err(Error::Config(_))));
        assert!(matches!(split(10, SplitMode::VFold(6)), Err(Error::Config(_))));
        assert!(split(10, SplitMode::VFold(5)).is_ok());
    }

    #[test]
    fn fit_examples() {
        let train = uni(&[0.0, 0.0, 5.0, 5.0]);
        let mut rng = substream(0, &[]);
        let m = fit(&train, 1, &DetectorConfig::dp_exact(), &mut rng).unwrap();
        assert_eq!(m.segmentation().change_points(), &[2]);
        assert_eq!(m.params(), &[vec![0.0], vec![5.0]]);
        let m0 = fit(&train, 0, &DetectorConfig::dp_exact(), &mut rng).unwrap();
        assert_eq!(m0.params(), &[vec![2.5]]);
        assert!(matches!(fit(&train, 2, &DetectorConfig::dp_exact(), &mut rng), Err(Error::Capacity(_))));
    }

    #[test]
    fn predict_loss_examples() {
        let seg = Segmentation::new(vec![2], 4).unwrap();
        let m = FittedModel::new(seg, vec![vec![0.0], vec![5.0]]).unwrap();
        assert_eq!(predict_loss(&m, &[0.0], 2, 4).unwrap(), 0.0);
        assert_eq!(predict_loss(&m, &[5.0], 3, 4).unwrap(), 0.0);
        assert_eq!(predict_loss(&m, &[5.0], 1, 4).unwrap(), 25.0);
        assert!(matches!(predict_loss(&m, &[5.0], 0, 4), Err(Error::Range(_))));
        assert!(matches!(predict_loss(&m, &[5.0], 5, 4), Err(Error::Range(_))));
        assert!(matches!(predict_loss(&m, &[5.0, 1.0], 1, 4), Err(Error::Shape(_))));
    }

    #[test]
    fn position_map_identity_when_lengths_match() {
        for n in 1..40 {
            for p in 1..=n {
                assert_eq!(map_position(p, n, n), p);
            }
        }
        // a 6-point fit scoring positions of a 9-point series keeps order and range
        let mapped: Vec<usize> = (1..=9).map(|p| map_position(p, 6, 9)).collect();
        assert_eq!(mapped, vec![1, 2, 2, 3, 4, 4, 5, 6, 6]);
    }

    #[test]
    fn delta_table_column_stats() {
        let t = DeltaTable::from_columns(0, vec![1], vec![vec![2.0, 0.0, -2.0]], vec![0; 3], SplitMode::OddEven).unwrap();
        assert_eq!(t.delta_hat(), &[0.0]);
        assert!((t.sigma_hat()[0] - 2.0).abs() < 1e-15);
        assert!(!t.is_degenerate(0));
    }

    #[test]
    fn zero_column_is_degenerate() {
        let t = DeltaTable::from_columns(1, vec![2, 3], vec![vec![0.0; 4], vec![1.0, -1.0, 0.5, 0.0]], vec![0; 4], SplitMode::OddEven)
            .unwrap();
        assert_eq!(t.degenerate_s(), vec![2]);
    }

    #[test]
    fn identical_models_give_degenerate_column() {
        // a constant training series: every r > 0 model predicts the same mean
        let s = uni(&[1.0; 24]);
        let plan = split(24, SplitMode::OddEven).unwrap();
        let table = delta_table(&s, &plan, 0, 3, &DetectorConfig::dp_exact(), 0).unwrap();
        assert!(table.column(0).iter().all(|&v| v == 0.0));
        assert_eq!(table.degenerate_s(), vec![1, 2, 3]);
    }

    #[test]
    fn vfold_centered_columns_sum_to_zero() {
        let col: Vec<f64> = (0..10).map(|i| (i * i) as f64 * 0.37 - 3.0).collect();
        let fold_of: Vec<usize> = (0..10).map(|i| i % 3).collect();
        let t = DeltaTable::from_columns(0, vec![1], vec![col.clone()], fold_of.clone(), SplitMode::VFold(3)).unwrap();
        let c = t.centered_column(0);
        for f in 0..3 {
            let s: f64 = c.iter().zip(&fold_of).filter(|(_, &g)| g == f).map(|(v, _)| v).sum();
            assert!(s.abs() < 1e-10);
        }
        assert!((t.delta_hat()[0] - col.iter().sum::<f64>() / 10.0).abs() < 1e-12);
    }

    #[test]
    fn select_k_cv_examples() {
        let c = CvCurve::new(vec![5.0, 3.2, 3.2, 4.0]).unwrap();
        assert_eq!(select_k_cv(&c), 1);
        assert_eq!(select_k_cv(&CvCurve::new(vec![1.0]).unwrap()), 0);
        let shifted = CvCurve::new(vec![105.0, 103.25, 103.25, 104.0]).unwrap();
        assert_eq!(select_k_cv(&shifted), 1);
        assert!(CvCurve::new(vec![]).is_err());
    }

    #[test]
    fn delta_table_needs_candidates() {
        let s = uni(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        let plan = split(8, SplitMode::OddEven).unwrap();
        assert!(matches!(delta_table(&s, &plan, 1, 1, &DetectorConfig::dp_exact(), 0), Err(Error::Capacity(_))));
    }
}
