//! Node-count sweeps comparing the scheduling algorithms.

use crate::error::{CliError, Result};
use crate::io::{canonical, fmt_f, metric_values, metrics_from_values, METRIC_FIELDS};
use dmcsched::generate::{generate_instance, GeneratorConfig};
use dmcsched::pipeline::{o2o_greedy, ra_dmcs, ScheduleMetrics};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::path::Path;

pub const ALGORITHMS: [&str; 2] = ["ra_dmcs", "o2o_greedy"];
pub const ATSP_SOLVERS: [&str; 5] = ["greedy", "lk", "held_karp", "transform_lk", "transform_greedy"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub repeats: usize,
    pub area: f64,
    pub seed: u64,
    pub algorithms: Vec<String>,
    pub atsp_solvers: Vec<String>,
    /// Worker threads; 0 picks the number of CPUs.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_values: (1..=9).map(|i| 50 * i).collect(),
            repeats: 50,
            area: 200.0,
            seed: 1,
            algorithms: ALGORITHMS.iter().map(|s| s.to_string()).collect(),
            atsp_solvers: ATSP_SOLVERS.iter().map(|s| s.to_string()).collect(),
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(CliError::Usage("repeats must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(CliError::Usage("node counts must be a nonempty list of positive values".into()));
        }
        if !(self.area.is_finite() && self.area > 0.0) {
            return Err(CliError::Usage(format!("area must be positive, got {}", self.area)));
        }
        for a in &self.algorithms {
            if !ALGORITHMS.contains(&a.as_str()) {
                return Err(CliError::Usage(format!("unknown algorithm {a:?}")));
            }
        }
        for s in &self.atsp_solvers {
            if !ATSP_SOLVERS.contains(&s.as_str()) {
                return Err(CliError::Usage(format!("unknown solver {s:?}")));
            }
        }
        Ok(())
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one run, independent of scheduling order.
pub fn run_seed(master: u64, n: usize, repeat: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ n as u64) ^ repeat as u64)
}

pub fn run_algorithm(name: &str, inst: &dmcsched::NetworkInstance, seed: u64) -> dmcsched::Result<(dmcsched::OperationSchedule, ScheduleMetrics)> {
    match name {
        "ra_dmcs" => ra_dmcs(inst, seed),
        "o2o_greedy" => o2o_greedy(inst),
        other => Err(dmcsched::Error::Parameter(format!("unknown algorithm {other:?}"))),
    }
}

/// One run of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailRow {
    pub algorithm: String,
    pub n: usize,
    pub repeat: usize,
    pub seed: u64,
    /// `None` when the run failed; `error` then holds the reason.
    pub metrics: Option<ScheduleMetrics>,
    pub error: String,
}

/// Mean and 95% confidence interval of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub n: usize,
    pub runs: usize,
    pub failures: usize,
    pub stats: Vec<Stat>,
}

/// Student-t interval; a single sample has zero width.
pub fn mean_ci(xs: &[f64]) -> Stat {
    let n = xs.len();
    if n == 0 {
        return Stat { mean: f64::NAN, lo: f64::NAN, hi: f64::NAN };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Stat { mean, lo: mean, hi: mean };
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive dof").inverse_cdf(0.975);
    let half = t * (var / n as f64).sqrt();
    Stat { mean, lo: mean - half, hi: mean + half }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<DetailRow>> {
    cfg.validate()?;
    let gen = GeneratorConfig { area: cfg.area, ..GeneratorConfig::default() };
    let jobs: Vec<(usize, usize)> =
        cfg.n_values.iter().flat_map(|&n| (0..cfg.repeats).map(move |r| (n, r))).collect();
    let mut rows: Vec<DetailRow> = cfg.pool()?.install(|| {
        jobs.par_iter()
            .flat_map_iter(|&(n, repeat)| {
                let seed = run_seed(cfg.seed, n, repeat);
                let inst = generate_instance(n, seed, &gen).and_then(|i| canonical(&i));
                cfg.algorithms.iter().map(move |alg| {
                    let res = inst.as_ref().map_err(Clone::clone).and_then(|i| run_algorithm(alg, i, seed));
                    let (metrics, error) = match res {
                        Ok((_, m)) => (Some(m), String::new()),
                        Err(e) => (None, e.to_string()),
                    };
                    DetailRow { algorithm: alg.clone(), n, repeat, seed, metrics, error }
                }).collect::<Vec<_>>()
            })
            .collect()
    });
    rows.sort_by(|a, b| (&a.algorithm, a.n, a.repeat).cmp(&(&b.algorithm, b.n, b.repeat)));
    Ok(rows)
}

/// Groups detail rows by (algorithm, n), in first-seen order of algorithms.
pub fn summarize(rows: &[DetailRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in rows {
        let k = (r.algorithm.clone(), r.n);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    keys.into_iter()
        .map(|(algorithm, n)| {
            let group: Vec<&DetailRow> = rows.iter().filter(|r| r.algorithm == algorithm && r.n == n).collect();
            let ok: Vec<[f64; 11]> = group.iter().filter_map(|r| r.metrics.as_ref()).map(metric_values).collect();
            let stats = (0..METRIC_FIELDS.len())
                .map(|c| mean_ci(&ok.iter().map(|v| v[c]).collect::<Vec<_>>()))
                .collect();
            SummaryRow { algorithm, n, runs: group.len(), failures: group.len() - ok.len(), stats }
        })
        .collect()
}

pub fn detail_csv(rows: &[DetailRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["algorithm", "n", "repeat", "seed"];
    header.extend(METRIC_FIELDS);
    header.push("error");
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![r.algorithm.clone(), r.n.to_string(), r.repeat.to_string(), r.seed.to_string()];
        match &r.metrics {
            Some(m) => rec.extend(metric_values(m).iter().map(|&v| fmt_f(v))),
            None => rec.extend(METRIC_FIELDS.iter().map(|_| String::new())),
        }
        rec.push(r.error.clone());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["algorithm".to_string(), "n".into(), "runs".into(), "failures".into()];
    for f in METRIC_FIELDS {
        header.extend([format!("{f}_mean"), format!("{f}_ci_lo"), format!("{f}_ci_hi")]);
    }
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![r.algorithm.clone(), r.n.to_string(), r.runs.to_string(), r.failures.to_string()];
        for s in &r.stats {
            rec.extend([fmt_f(s.mean), fmt_f(s.lo), fmt_f(s.hi)]);
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Tolerance for the metric identities after nine-digit rounding.
pub const LOAD_IDENTITY_TOL: f64 = 1e-7;

/// Parses a detail CSV and re-checks the metric identities of every row.
pub fn load_detail_csv(text: &str, path: &Path) -> Result<Vec<DetailRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e))?;
        let bad = |what: &str| CliError::parse(path, format!("row {}: bad {what}", line + 1));
        let nf = METRIC_FIELDS.len();
        if rec.len() != 5 + nf {
            return Err(bad("column count"));
        }
        let error = rec[4 + nf].to_string();
        let metrics = if rec[4].is_empty() {
            None
        } else {
            let vals = (4..4 + nf)
                .map(|i| rec[i].parse::<f64>().map_err(|_| bad(METRIC_FIELDS[i - 4])))
                .collect::<Result<Vec<f64>>>()?;
            let m = metrics_from_values(&vals);
            if m.identity_error() > LOAD_IDENTITY_TOL {
                return Err(bad("metrics: identities violated"));
            }
            Some(m)
        };
        rows.push(DetailRow {
            algorithm: rec[0].to_string(),
            n: rec[1].parse().map_err(|_| bad("n"))?,
            repeat: rec[2].parse().map_err(|_| bad("repeat"))?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            metrics,
            error,
        });
    }
    Ok(rows)
}
