//! Tour-solver comparison on random asymmetric movement-energy graphs.

use crate::error::Result;
use crate::experiment::{mean_ci, run_seed, ExperimentConfig, Stat};
use crate::io::fmt_f;
use dmcsched::model::{AsymmetryField, DmcParams, Interval, Point, RoutingMatrices};
use dmcsched::routing::{
    atsp_greedy, atsp_lk, expand_tour, held_karp, metric_closure, transform_greedy, transform_lk,
    DirectedCostGraph, Tour, DEFAULT_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// Largest graph for which the exact optimum (and so the gap) is computed.
pub const GAP_MAX_N: usize = 12;

/// Closed movement-energy graph on the base station plus `n - 1` random points.
pub fn random_routing_graph(n: usize, seed: u64, area: f64) -> (RoutingMatrices, DirectedCostGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![Point::new(area / 2.0, area / 2.0)];
    pts.extend((1..n).map(|_| Point::new(rng.gen_range(0.0..area), rng.gen_range(0.0..area)).snapped()));
    let asym = AsymmetryField::new(seed, Interval::new(0.5, 1.5), Interval::new(1.0, 1.0), 0.01);
    let mats = RoutingMatrices::build(pts, &asym, &DmcParams::default());
    let g = DirectedCostGraph::new(mats.energy_matrix()).expect("movement energies are finite and >= 0");
    (mats, metric_closure(&g))
}

pub fn solve(name: &str, g: &DirectedCostGraph, seed: u64) -> dmcsched::Result<Tour> {
    match name {
        "greedy" => Ok(atsp_greedy(g)),
        "lk" => Ok(atsp_lk(g, seed, DEFAULT_BUDGET)),
        "held_karp" => held_karp(g),
        "transform_lk" => transform_lk(g, seed, DEFAULT_BUDGET),
        "transform_greedy" => transform_greedy(g),
        other => Err(dmcsched::Error::Parameter(format!("unknown solver {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtspRow {
    pub solver: String,
    pub n: usize,
    pub repeat: usize,
    pub seed: u64,
    pub movement_energy: f64,
    pub moving_time: f64,
    pub runtime: f64,
    /// Relative excess over the exact optimum, for `n <= GAP_MAX_N`.
    pub gap: Option<f64>,
    pub error: String,
}

fn bench_one(n: usize, repeat: usize, cfg: &ExperimentConfig) -> Vec<AtspRow> {
    let seed = run_seed(cfg.seed, n, repeat);
    let (mats, g) = random_routing_graph(n, seed, cfg.area);
    let opt = if n <= GAP_MAX_N { held_karp(&g).ok().map(|t| t.cost) } else { None };
    let v_bar = DmcParams::default().v_bar;
    cfg.atsp_solvers
        .iter()
        .filter(|s| s.as_str() != "held_karp" || n <= GAP_MAX_N)
        .map(|solver| {
            let start = Instant::now();
            let res = solve(solver, &g, seed);
            let runtime = start.elapsed().as_secs_f64();
            match res {
                Ok(tour) => {
                    let exp = expand_tour(&tour, &g);
                    let dist: f64 = exp.order.windows(2).map(|w| mats.dist[w[0]][w[1]]).sum();
                    AtspRow {
                        solver: solver.clone(),
                        n,
                        repeat,
                        seed,
                        movement_energy: tour.cost,
                        moving_time: dist / v_bar,
                        runtime,
                        gap: opt.map(|o| if o > 0.0 { (tour.cost / o - 1.0).max(0.0) } else { 0.0 }),
                        error: String::new(),
                    }
                }
                Err(e) => AtspRow {
                    solver: solver.clone(),
                    n,
                    repeat,
                    seed,
                    movement_energy: f64::NAN,
                    moving_time: f64::NAN,
                    runtime,
                    gap: None,
                    error: e.to_string(),
                },
            }
        })
        .collect()
}

pub fn run_atsp_bench(cfg: &ExperimentConfig) -> Result<Vec<AtspRow>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> =
        cfg.n_values.iter().flat_map(|&n| (0..cfg.repeats).map(move |r| (n, r))).collect();
    let mut rows: Vec<AtspRow> =
        cfg.pool()?.install(|| jobs.par_iter().flat_map_iter(|&(n, r)| bench_one(n, r, cfg)).collect());
    rows.sort_by(|a, b| (&a.solver, a.n, a.repeat).cmp(&(&b.solver, b.n, b.repeat)));
    Ok(rows)
}

pub fn atsp_detail_csv(rows: &[AtspRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["solver", "n", "repeat", "seed", "movement_energy", "moving_time", "runtime", "gap", "error"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.solver.clone(),
            r.n.to_string(),
            r.repeat.to_string(),
            r.seed.to_string(),
            fmt_f(r.movement_energy),
            fmt_f(r.moving_time),
            fmt_f(r.runtime),
            r.gap.map(fmt_f).unwrap_or_default(),
            r.error.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtspSummary {
    pub solver: String,
    pub n: usize,
    pub runs: usize,
    pub movement_energy: Stat,
    pub moving_time: Stat,
    pub runtime: Stat,
    pub gap: Option<Stat>,
}

pub fn summarize_atsp(rows: &[AtspRow]) -> Vec<AtspSummary> {
    let mut keys: Vec<(usize, String)> = rows.iter().map(|r| (r.n, r.solver.clone())).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(n, solver)| {
            let g: Vec<&AtspRow> = rows.iter().filter(|r| r.n == n && r.solver == solver && r.error.is_empty()).collect();
            let col = |f: fn(&AtspRow) -> f64| mean_ci(&g.iter().map(|r| f(r)).collect::<Vec<_>>());
            let gaps: Vec<f64> = g.iter().filter_map(|r| r.gap).collect();
            AtspSummary {
                solver,
                n,
                runs: g.len(),
                movement_energy: col(|r| r.movement_energy),
                moving_time: col(|r| r.moving_time),
                runtime: col(|r| r.runtime),
                gap: (!gaps.is_empty()).then(|| mean_ci(&gaps)),
            }
        })
        .collect()
}

pub fn atsp_summary_csv(rows: &[AtspSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["solver".to_string(), "n".into(), "runs".into()];
    for f in ["movement_energy", "moving_time", "runtime", "gap"] {
        header.extend([format!("{f}_mean"), format!("{f}_ci_lo"), format!("{f}_ci_hi")]);
    }
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![r.solver.clone(), r.n.to_string(), r.runs.to_string()];
        for s in [Some(r.movement_energy), Some(r.moving_time), Some(r.runtime), r.gap] {
            match s {
                Some(s) => rec.extend([fmt_f(s.mean), fmt_f(s.lo), fmt_f(s.hi)]),
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
