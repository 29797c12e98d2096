// SPDX-License-Identifier: MIT OR Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use segwise_cli::args::{PipelineArgs, SimulateArgs, UqArgs};
use segwise_cli::{cmd_simulate, cmd_uq};
use segwise_core::detect::dp_exact;
use segwise_core::inference::{check_overfit_condition, critical_value};
use segwise_core::rng::substream;
use segwise_core::simulation::ReplicationRecord;
use segwise_core::{
    run_replications, DetectorConfig, ErrorLaw, Segmentation, Series, SimConfig, SimMetrics, SplitMode,
};

struct Outcome {
    id: usize,
    pass: bool,
    detail: String,
}

fn binomial_bound(alpha: f64, reps: usize) -> f64 {
    alpha + 3.0 * (alpha * (1.0 - alpha) / reps as f64).sqrt()
}

fn simulate(config: SimConfig, label: &str) -> SimMetrics {
    let start = Instant::now();
    let m = run_replications(&config).expect("valid scenario");
    eprintln!(
        "  [{label}] {} / {} replications in {:.1}s",
        m.completed,
        m.replications,
        start.elapsed().as_secs_f64()
    );
    for f in &m.failures {
        eprintln!("  [{label}] replication {} failed: {}", f.replication, f.message);
    }
    m
}

fn base(n: usize, k_n: usize, snr: f64, seed: u64) -> SimConfig {
    SimConfig { n, k_n, snr, replications: 200, bootstrap: 500, master_seed: seed, ..SimConfig::default() }
}

fn complete(m: &SimMetrics) -> bool {
    m.completed == m.replications
}

fn criterion_1(records: &mut Vec<ReplicationRecord>) -> Outcome {
    let bound = binomial_bound(0.10, 200);
    let mut pass = true;
    let mut parts = Vec::new();
    for (det, seed) in [(DetectorConfig::wbs(), 101), (DetectorConfig::pelt(), 102)] {
        let name = det.kind.to_string();
        let m = simulate(SimConfig { detector: det, ..base(600, 5, 1.0, seed) }, &format!("c1 {name}"));
        let ok = complete(&m) && m.p_plus <= bound && (0.0..=1.2).contains(&m.excess_mean);
        pass &= ok;
        parts.push(format!("{name}: P+={:.3} mean(K_CV-K_n)={:.3}", m.p_plus, m.excess_mean));
        records.extend(m.records);
    }
    Outcome { id: 1, pass, detail: format!("{} (bound P+ <= {bound:.3}, mean in [0, 1.2])", parts.join("; ")) }
}

fn criterion_2(records: &mut Vec<ReplicationRecord>) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (alpha, seed) in [(0.05, 201), (0.10, 202)] {
        let config = SimConfig { error_law: ErrorLaw::T5Scaled, alpha, ..base(1000, 25, 1.2, seed) };
        let m = simulate(config, &format!("c2 alpha={alpha}"));
        let bound = binomial_bound(alpha, 200);
        pass &= complete(&m) && m.p_plus <= bound;
        parts.push(format!("alpha={alpha}: P+={:.3} <= {bound:.3}", m.p_plus));
        records.extend(m.records);
    }
    Outcome { id: 2, pass, detail: parts.join("; ") }
}

fn criterion_3(records: &mut Vec<ReplicationRecord>) -> Outcome {
    let ss = simulate(base(1000, 15, 1.2, 301), "c3 SS");
    let rc = simulate(SimConfig { mode: SplitMode::VFold(3), ..base(1000, 15, 1.2, 301) }, "c3 RC");
    let pass = complete(&ss) && complete(&rc) && rc.p_plus <= ss.p_plus + 0.05 && rc.u_mean <= ss.u_mean + 0.2;
    let detail = format!(
        "RC P+={:.3} vs SS P+={:.3} (+0.05); RC mean U={:.3} vs SS mean U={:.3} (+0.2)",
        rc.p_plus, ss.p_plus, rc.u_mean, ss.u_mean
    );
    records.extend(ss.records);
    records.extend(rc.records);
    Outcome { id: 3, pass, detail }
}

fn criterion_4(records: &[ReplicationRecord]) -> Outcome {
    let applicable = records.iter().filter(|r| r.critical_at_k_cv.is_none_or(|c| c > 0.0)).count();
    let violations = records
        .iter()
        .filter(|r| r.critical_at_k_cv.is_none_or(|c| c > 0.0) && r.k_min > r.k_cv)
        .count();
    Outcome {
        id: 4,
        pass: violations == 0 && !records.is_empty(),
        detail: format!("{violations} violations of K_min <= K_CV over {applicable} applicable of {} replications", records.len()),
    }
}

fn criterion_5() -> Outcome {
    let m = simulate(base(1000, 5, 2.0, 501), "c5");
    Outcome {
        id: 5,
        pass: complete(&m) && m.k_cv_at_least_k_n >= 0.95,
        detail: format!("fraction K_CV >= K_n = {:.3} (>= 0.95)", m.k_cv_at_least_k_n),
    }
}

fn criterion_6() -> Outcome {
    let m = simulate(SimConfig { replications: 500, ..base(400, 0, 1.0, 601) }, "c6");
    let bound = binomial_bound(0.10, 500);
    Outcome {
        id: 6,
        pass: complete(&m) && m.h0_rejection_rate <= bound,
        detail: format!("H00 rejection rate = {:.3} (<= {bound:.3})", m.h0_rejection_rate),
    }
}

fn naive_cost(x: &[f64], cps: &[usize]) -> f64 {
    let mut bounds = vec![0];
    bounds.extend_from_slice(cps);
    bounds.push(x.len());
    bounds
        .windows(2)
        .map(|w| {
            let seg = &x[w[0]..w[1]];
            let mean = seg.iter().sum::<f64>() / seg.len() as f64;
            seg.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        })
        .sum()
}

fn enumerate(n: usize, r: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), m)];
    while let Some((cur, next)) = stack.pop() {
        if cur.len() == r {
            if n - cur.last().copied().unwrap_or(0) >= m {
                out.push(cur);
            }
            continue;
        }
        for t in (next..n).rev() {
            let mut c = cur.clone();
            c.push(t);
            stack.push((c, t + m));
        }
    }
    out.sort();
    out
}

fn criterion_7() -> Outcome {
    let mut rng = substream(7, &[]);
    let mut instances = 0;
    let mut mismatches = 0;
    while instances < 1200 {
        let n = rng.random_range(4..=16);
        let m = rng.random_range(1..=2);
        let r = rng.random_range(0..=3);
        let integer = rng.random_bool(0.3);
        let x: Vec<f64> = (0..n)
            .map(|_| {
                if integer {
                    rng.random_range(0..3) as f64
                } else {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    e + if rng.random_bool(0.3) { 2.5 } else { 0.0 }
                }
            })
            .collect();
        let all = enumerate(n, r, m);
        if all.is_empty() {
            continue;
        }
        instances += 1;
        let costs: Vec<f64> = all.iter().map(|c| naive_cost(&x, c)).collect();
        let best = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let tol = 1e-12 * best.abs().max(1.0);
        let first = all.iter().zip(&costs).find(|(_, &c)| c <= best + tol).map(|(c, _)| c).unwrap();
        let seg = dp_exact(&Series::univariate(&x).unwrap(), r, m).unwrap();
        let got = naive_cost(&x, seg.change_points());
        let cost_ok = (got - best).abs() <= 1e-9 * best.abs() + 1e-12;
        if !cost_ok || seg.change_points() != first.as_slice() {
            mismatches += 1;
        }
    }
    Outcome {
        id: 7,
        pass: mismatches == 0,
        detail: format!("{mismatches} mismatches over {instances} instances (n <= 16, r <= 3)"),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = substream(8, &[]);
    let alphas_pct = [1u64, 5, 10, 20, 50];
    let mut mismatches = 0;
    let sets = 1500;
    for i in 0..sets {
        let b = rng.random_range(1..=1000u64);
        let pct = alphas_pct[i % alphas_pct.len()];
        let draws: Vec<f64> = (0..b).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut sorted = draws.clone();
        sorted.sort_by(f64::total_cmp);
        // ceil(B (1 - alpha)) in exact integer arithmetic
        let k = (b * (100 - pct)).div_ceil(100).max(1) as usize;
        if critical_value(&draws, pct as f64 / 100.0).unwrap() != sorted[k - 1] {
            mismatches += 1;
        }
    }
    Outcome { id: 8, pass: mismatches == 0, detail: format!("{mismatches} mismatches over {sets} draw sets (B <= 1000)") }
}

fn criterion_9() -> Outcome {
    let mut rng = substream(9, &[]);
    let mut positive = 0;
    let mut off = 0;
    for _ in 0..1000 {
        let n = rng.random_range(4..=200);
        let level: f64 = rng.random_range(-3.0..3.0);
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                level + e
            })
            .collect();
        let train = Series::univariate(&x).unwrap();
        let mu = Series::univariate(&vec![level; n]).unwrap();
        let t_s = dp_exact(&train, 1, 1).unwrap();
        let v = check_overfit_condition(&train, &mu, &Segmentation::empty(n), &t_s).unwrap();
        let tau = t_s.change_points()[0];
        let left = x[..tau].iter().sum::<f64>() / tau as f64;
        let right = x[tau..].iter().sum::<f64>() / (n - tau) as f64;
        let closed = -((tau * (n - tau)) as f64 / n as f64) * (left - right).powi(2);
        if v > 0.0 {
            positive += 1;
        }
        if (v - closed).abs() > 1e-9 * closed.abs().max(1.0) {
            off += 1;
        }
    }
    Outcome {
        id: 9,
        pass: positive == 0 && off == 0,
        detail: format!("{positive} positive values, {off} disagreements with the closed form over 1000 series"),
    }
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let data = dir.path().join("series.csv");
    let mut rng = substream(10, &[]);
    let mut text = String::from("value\n");
    for i in 0..300 {
        let mu = if (i / 60) % 2 == 0 { 0.0 } else { 1.5 };
        let e: f64 = StandardNormal.sample(&mut rng);
        text.push_str(&format!("{}\n", mu + e));
    }
    std::fs::write(&data, text).unwrap();
    let scenario = dir.path().join("scenario.toml");
    std::fs::write(&scenario, "n = 300\nk_n = 3\nsnr = 1.5\nreplications = 12\nbootstrap = 200\nmaster_seed = 10\n")
        .unwrap();

    let mut mismatches = Vec::new();
    let variants: [(&str, fn(&mut PipelineArgs)); 3] = [
        ("uq split", |_| {}),
        ("uq vfold", |p| p.mode = segwise_cli::args::ModeArg::Vfold),
        ("uq wbs", |p| p.detector = Some(segwise_cli::args::DetectorArg::Wbs)),
    ];
    for (label, tweak) in variants {
        let outputs: Vec<String> = [1, 8]
            .into_iter()
            .map(|w| {
                let mut p = PipelineArgs::new(&data);
                p.seed = 42;
                p.workers = Some(w);
                tweak(&mut p);
                cmd_uq(&UqArgs { pipeline: p }).expect("uq runs")
            })
            .collect();
        if outputs[0] != outputs[1] {
            mismatches.push(label);
        }
    }
    let sims: Vec<_> = [1, 8]
        .into_iter()
        .map(|w| {
            let mut a = SimulateArgs::new(&scenario);
            a.workers = Some(w);
            cmd_simulate(&a).expect("simulate runs")
        })
        .collect();
    if sims[0].records_csv != sims[1].records_csv || sims[0].summary_json != sims[1].summary_json {
        mismatches.push("simulate");
    }
    Outcome {
        id: 10,
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "uq (split, vfold, wbs) and simulate byte-identical at 1 and 8 workers".into()
        } else {
            format!("outputs differ for: {}", mismatches.join(", "))
        },
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut records = Vec::new();
    let outcomes = vec![
        criterion_1(&mut records),
        criterion_2(&mut records),
        criterion_3(&mut records),
        criterion_4(&records),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    println!();
    for o in &outcomes {
        println!("criterion {:>2}: {}  {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.0}s)",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
