// SPDX-License-Identifier: MIT OR Apache-2.0

use rayon::ThreadPoolBuilder;
use serde::Serialize;

use segwise_core::detect::{anchor_penalty, candidate_family, max_feasible_r, pelt, segmentation_cost};
use segwise_core::rng::{substream, tag};
use segwise_core::simulation::{ReplicationFailure, ReplicationRecord};
use segwise_core::{
    detect, run_replications, sequential_k_min, DetectorConfig, DetectorKind, FittedModel, PnPolicy, SimConfig,
    SimMetrics, SplitMode, UqConfig, UqReport,
};

use crate::args::{CostPathArgs, DetectArgs, DetectorArg, Format, ModeArg, PipelineArgs, SimulateArgs, UqArgs};
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest_csv, Ingested};
use crate::scenario::Scenario;

pub const SCHEMA_VERSION: u32 = 1;

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("--workers must be >= 1".into())),
        Some(w) => {
            let pool = ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Config(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn detector_kind(arg: Option<DetectorArg>, fallback: DetectorKind) -> DetectorKind {
    match arg {
        None => fallback,
        Some(DetectorArg::Wbs) => DetectorKind::Wbs,
        Some(DetectorArg::Pelt) => DetectorKind::Pelt,
        Some(DetectorArg::Dp) => DetectorKind::DpExact,
    }
}

fn detector_config(args: &PipelineArgs, fallback: DetectorKind) -> DetectorConfig {
    DetectorConfig {
        kind: detector_kind(args.detector, fallback),
        wbs_intervals: args.wbs_intervals,
        min_segment_length: args.min_seg,
        ..DetectorConfig::default()
    }
}

fn split_mode(args: &PipelineArgs) -> SplitMode {
    match args.mode {
        ModeArg::Split => SplitMode::OddEven,
        ModeArg::Vfold => SplitMode::VFold(args.folds),
    }
}

pub fn uq_config(args: &PipelineArgs) -> UqConfig {
    UqConfig {
        alpha: args.alpha,
        bootstrap: args.bootstrap,
        mode: split_mode(args),
        p_n: args.pn.map_or(PnPolicy::Auto, PnPolicy::Fixed),
        detector: detector_config(args, DetectorKind::Pelt),
        seed: args.seed,
    }
}

fn load(args: &PipelineArgs) -> CliResult<Ingested> {
    let data = ingest_csv(&args.input)?;
    if data.dropped_rows > 0 {
        eprintln!("warning: dropped {} rows with missing values", data.dropped_rows);
    }
    Ok(data)
}

#[derive(Serialize)]
struct TraceEntry {
    r: usize,
    statistic: Option<f64>,
    critical_value: Option<f64>,
    rejected: bool,
    degenerate_s: Vec<usize>,
}

#[derive(Serialize)]
struct RunSettings {
    mode: &'static str,
    folds: Option<usize>,
    detector: String,
    bootstrap: usize,
    p_n: usize,
    p_n_policy: &'static str,
    min_segment_length: usize,
    wbs_intervals: usize,
}

#[derive(Serialize)]
struct UqOutput {
    schema_version: u32,
    k_cv: usize,
    k_min: usize,
    u: i64,
    alpha: f64,
    saturated: bool,
    trace: Vec<TraceEntry>,
    change_points_at_k_cv: Vec<usize>,
    cv_curve: Vec<f64>,
    bound: usize,
    n: usize,
    n_used: usize,
    dropped_rows: usize,
    warnings: Vec<String>,
    config: RunSettings,
    seed: u64,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn render_uq(report: &UqReport, config: &UqConfig, dropped_rows: usize, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "statistic", "critical_value", "rejected"])?;
        for t in &report.trace {
            w.serialize((t.r, finite(t.statistic), finite(t.critical_value), t.rejected))?;
        }
        return Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("utf-8 csv"));
    }
    let out = UqOutput {
        schema_version: SCHEMA_VERSION,
        k_cv: report.k_cv,
        k_min: report.k_min,
        u: report.u,
        alpha: report.alpha,
        saturated: report.saturated,
        trace: report
            .trace
            .iter()
            .map(|t| TraceEntry {
                r: t.r,
                statistic: finite(t.statistic),
                critical_value: finite(t.critical_value),
                rejected: t.rejected,
                degenerate_s: t.degenerate_s.clone(),
            })
            .collect(),
        change_points_at_k_cv: report.change_points_at_k_cv.clone(),
        cv_curve: report.cv_curve.clone(),
        bound: report.bound,
        n: report.n,
        n_used: report.n_used,
        dropped_rows,
        warnings: report.warnings.clone(),
        config: RunSettings {
            mode: config.mode.name(),
            folds: match config.mode {
                SplitMode::VFold(v) => Some(v),
                SplitMode::OddEven => None,
            },
            detector: config.detector.kind.to_string(),
            bootstrap: config.bootstrap,
            p_n: report.p_n,
            p_n_policy: match config.p_n {
                PnPolicy::Auto => "auto",
                PnPolicy::Fixed(_) => "fixed",
            },
            min_segment_length: config.detector.min_segment_length,
            wbs_intervals: config.detector.wbs_intervals,
        },
        seed: config.seed,
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

pub fn cmd_uq(args: &UqArgs) -> CliResult<String> {
    let p = &args.pipeline;
    let config = uq_config(p);
    config.validate()?;
    let data = load(p)?;
    let report = with_workers(p.workers, || sequential_k_min(&data.series, &config))??;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    render_uq(&report, &config, data.dropped_rows, p.format.unwrap_or(Format::Json))
}

/// Candidate bound for whole-series commands: `--pn`, else
/// `min(15 + K̂₀, floor(n / (2m)))`.
fn whole_series_bound(series: &segwise_core::Series, args: &PipelineArgs) -> CliResult<usize> {
    if let Some(p) = args.pn {
        return Ok(p);
    }
    let anchor = pelt(series, anchor_penalty(series), args.min_seg)?.len();
    Ok((15 + anchor).min(series.n() / (2 * args.min_seg)))
}

pub fn cmd_cost_path(args: &CostPathArgs) -> CliResult<String> {
    let p = &args.pipeline;
    let detector = detector_config(p, DetectorKind::DpExact);
    detector.validate()?;
    let data = load(p)?;
    let series = &data.series;
    let p_n = whole_series_bound(series, p)?;
    let reach = max_feasible_r(series.n(), p.min_seg).map_or(0, |cap| p_n.min(cap));
    let family = with_workers(p.workers, || {
        candidate_family(series, reach, &detector, &mut substream(p.seed, &[tag::FULL_FIT]))
    })??;
    let rows: Vec<(usize, f64)> = family
        .iter()
        .enumerate()
        .filter_map(|(r, seg)| seg.as_ref().map(|s| (r, s)))
        .map(|(r, s)| Ok((r, segmentation_cost(series, s)?)))
        .collect::<CliResult<_>>()?;

    match p.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "cost"])?;
            for row in &rows {
                w.serialize(row)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("utf-8 csv"))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                r: usize,
                cost: f64,
            }
            #[derive(Serialize)]
            struct Out {
                schema_version: u32,
                detector: String,
                n: usize,
                p_n: usize,
                path: Vec<Row>,
            }
            let out = Out {
                schema_version: SCHEMA_VERSION,
                detector: detector.kind.to_string(),
                n: series.n(),
                p_n,
                path: rows.into_iter().map(|(r, cost)| Row { r, cost }).collect(),
            };
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
    }
}

pub fn cmd_detect(args: &DetectArgs) -> CliResult<String> {
    let p = &args.pipeline;
    let detector = detector_config(p, DetectorKind::Pelt);
    detector.validate()?;
    let data = load(p)?;
    let series = &data.series;
    let r = match args.r {
        Some(r) => r,
        None => pelt(series, anchor_penalty(series), p.min_seg)?.len(),
    };
    let seg = with_workers(p.workers, || {
        detect(series, r, &detector, &mut substream(p.seed, &[tag::FULL_FIT]))
    })??;
    let cost = segmentation_cost(series, &seg)?;
    let model = FittedModel::fit_means(series, seg)?;

    if p.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["start", "end", "mean"])?;
        for ((a, b), mean) in model.segmentation().segments().zip(model.params()) {
            let mean = mean.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";");
            w.serialize((a + 1, b, mean))?;
        }
        return Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("utf-8 csv"));
    }
    #[derive(Serialize)]
    struct Out<'a> {
        schema_version: u32,
        detector: String,
        n: usize,
        r: usize,
        change_points: &'a [usize],
        cost: f64,
        segment_means: &'a [Vec<f64>],
        seed: u64,
    }
    let out = Out {
        schema_version: SCHEMA_VERSION,
        detector: detector.kind.to_string(),
        n: series.n(),
        r,
        change_points: model.segmentation().change_points(),
        cost,
        segment_means: model.params(),
        seed: p.seed,
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

/// Rendered outputs of a simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulateOutput {
    pub summary_json: String,
    pub records_csv: String,
    pub metrics: SimMetrics,
}

#[derive(Serialize)]
struct RecordRow {
    replication: usize,
    seed: u64,
    k_n: usize,
    k_cv: usize,
    k_min: usize,
    u: i64,
    saturated: bool,
    rejected_h0: bool,
    statistic_at_k_cv: Option<f64>,
    critical_at_k_cv: Option<f64>,
}

impl From<&ReplicationRecord> for RecordRow {
    fn from(r: &ReplicationRecord) -> Self {
        Self {
            replication: r.replication,
            seed: r.seed,
            k_n: r.k_n,
            k_cv: r.k_cv,
            k_min: r.k_min,
            u: r.u,
            saturated: r.saturated,
            rejected_h0: r.rejected_h0,
            statistic_at_k_cv: r.statistic_at_k_cv.and_then(finite),
            critical_at_k_cv: r.critical_at_k_cv.and_then(finite),
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    name: Option<&'a str>,
    scenario: &'a SimConfig,
    replications: usize,
    completed: usize,
    failed: usize,
    p_plus: f64,
    u_mean: f64,
    u_sd: f64,
    excess_mean: f64,
    excess_sd: f64,
    saturated: usize,
    h0_rejection_rate: f64,
    k_cv_at_least_k_n: f64,
    failures: &'a [ReplicationFailure],
}

pub fn run_scenario(config: &SimConfig, name: Option<&str>, workers: Option<usize>) -> CliResult<SimulateOutput> {
    let metrics = with_workers(workers, || run_replications(config))??;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &metrics.records {
        w.serialize(RecordRow::from(r))?;
    }
    let records_csv = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("utf-8 csv");
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        name,
        scenario: config,
        replications: metrics.replications,
        completed: metrics.completed,
        failed: metrics.failures.len(),
        p_plus: metrics.p_plus,
        u_mean: metrics.u_mean,
        u_sd: metrics.u_sd,
        excess_mean: metrics.excess_mean,
        excess_sd: metrics.excess_sd,
        saturated: metrics.saturated,
        h0_rejection_rate: metrics.h0_rejection_rate,
        k_cv_at_least_k_n: metrics.k_cv_at_least_k_n,
        failures: &metrics.failures,
    };
    let summary_json = serde_json::to_string_pretty(&summary)? + "\n";
    Ok(SimulateOutput { summary_json, records_csv, metrics })
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<SimulateOutput> {
    let scenario = Scenario::load(&args.scenario)?;
    let mut config = scenario.to_config()?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let out = run_scenario(&config, scenario.name.as_deref(), args.workers)?;
    for f in &out.metrics.failures {
        eprintln!("warning: replication {} failed: {}", f.replication, f.message);
    }
    Ok(out)
}
