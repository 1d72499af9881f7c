//! Command-line surface.

use crate::atsp::{atsp_detail_csv, atsp_summary_csv, run_atsp_bench, summarize_atsp};
use crate::demo::{render, run_demo};
use crate::error::{CliError, Result};
use crate::experiment::{detail_csv, run_algorithm, run_experiment, summarize, summary_csv, ExperimentConfig};
use crate::io::{
    canonical, instance_to_string, metrics_csv, read_instance, read_schedule, schedule_to_string, write_text,
};
use clap::{Args, Parser, Subcommand};
use dmcsched::generate::{generate_instance, GeneratorConfig};
use dmcsched::model::RoutingMatrices;
use dmcsched::pipeline::{execute_schedule, ra_dmcs_detailed};
use dmcsched::routing::{metric_closure, write_cost_matrix, DirectedCostGraph};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "dmcsched", version, about = "Directional mobile charger scheduling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Schedule one instance with one algorithm.
    Schedule(ScheduleArgs),
    /// Evaluate a schedule file against an instance.
    Evaluate(EvaluateArgs),
    /// Sweep node counts and compare algorithms.
    Experiment(SweepArgs),
    /// Compare tour solvers on random asymmetric graphs.
    AtspBench(SweepArgs),
    /// Run both algorithms on the ten-node toy network.
    DemoToy(DemoArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 100)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200.0)]
    pub area: f64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// ra_dmcs or o2o_greedy.
    #[arg(long, alias = "algorithms", default_value = "ra_dmcs")]
    pub algorithm: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Schedule file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the metrics CSV here.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Write the closed routing cost matrix (ra_dmcs only).
    #[arg(long)]
    pub export_costs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub schedule: PathBuf,
    /// Metrics CSV; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated algorithms (experiment) or solvers (atsp-bench).
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// 200 repeats per point instead of 50.
    #[arg(long)]
    pub paper_scale: bool,
    /// Worker threads; 0 uses every CPU.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Directory for the instance, schedules and report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| CliError::io("<stdout>", e))
}

fn sweep_config(a: &SweepArgs, atsp: bool) -> Result<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let s = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            serde_json::from_str(&s).map_err(|e| CliError::parse(p, e))?
        }
        None if atsp => ExperimentConfig { n_values: vec![10, 20, 40, 60, 80], ..Default::default() },
        None => ExperimentConfig::default(),
    };
    if a.paper_scale {
        cfg.repeats = 200;
    }
    if let Some(v) = &a.nodes {
        cfg.n_values = v.clone();
    }
    if let Some(r) = a.repeats {
        cfg.repeats = r;
    }
    if let Some(x) = a.area {
        cfg.area = x;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(list) = &a.algorithms {
        if atsp {
            cfg.atsp_solvers = list.clone();
        } else {
            cfg.algorithms = list.clone();
        }
    }
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let cfg = GeneratorConfig { area: a.area, ..GeneratorConfig::default() };
            let inst = generate_instance(a.nodes, a.seed, &cfg)?;
            emit(out, a.out.as_deref(), &instance_to_string(&inst))
        }
        Command::Schedule(a) => {
            let inst = read_instance(&a.instance)?;
            let (sched, metrics) = run_algorithm(&a.algorithm, &inst, a.seed)?;
            if let Some(p) = &a.export_costs {
                if a.algorithm != "ra_dmcs" {
                    return Err(CliError::Usage("--export-costs needs --algorithm ra_dmcs".into()));
                }
                let run = ra_dmcs_detailed(&inst, a.seed)?;
                let mut pts = vec![inst.bs_pos];
                pts.extend(run.active.iter().map(|&i| run.positions.positions[i]));
                let mats = RoutingMatrices::build(pts, &inst.asym, &inst.dmc);
                let closed = metric_closure(&DirectedCostGraph::new(mats.energy_matrix())?);
                let mut buf = Vec::new();
                write_cost_matrix(&mut buf, closed.costs()).map_err(|e| CliError::io(p, e))?;
                write_text(p, &String::from_utf8(buf).expect("utf8"))?;
            }
            if let Some(p) = &a.metrics {
                write_text(p, &metrics_csv(&a.algorithm, &metrics))?;
            }
            emit(out, a.out.as_deref(), &schedule_to_string(&a.algorithm, a.seed, &sched))
        }
        Command::Evaluate(a) => {
            let inst = read_instance(&a.instance)?;
            let (dto, sched) = read_schedule(&a.schedule)?;
            let metrics = execute_schedule(&inst, &sched)?;
            emit(out, a.out.as_deref(), &metrics_csv(&dto.algorithm, &metrics))
        }
        Command::Experiment(a) => {
            let cfg = sweep_config(&a, false)?;
            let rows = run_experiment(&cfg)?;
            write_text(&a.out.join("experiment_detail.csv"), &detail_csv(&rows))?;
            write_text(&a.out.join("experiment_summary.csv"), &summary_csv(&summarize(&rows)))?;
            let failed = rows.iter().filter(|r| r.metrics.is_none()).count();
            say(out, &format!("{} runs ({failed} failed) written to {}", rows.len(), a.out.display()))
        }
        Command::AtspBench(a) => {
            let cfg = sweep_config(&a, true)?;
            let rows = run_atsp_bench(&cfg)?;
            write_text(&a.out.join("atsp_detail.csv"), &atsp_detail_csv(&rows))?;
            write_text(&a.out.join("atsp_summary.csv"), &atsp_summary_csv(&summarize_atsp(&rows)))?;
            say(out, &format!("{} solver runs written to {}", rows.len(), a.out.display()))
        }
        Command::DemoToy(a) => {
            let rep = run_demo(a.seed)?;
            let text = render(&rep);
            if let Some(dir) = &a.out {
                let inst = canonical(&rep.instance)?;
                write_text(&dir.join("toy_instance.json"), &instance_to_string(&inst))?;
                write_text(&dir.join("ra_dmcs_schedule.json"), &schedule_to_string("ra_dmcs", a.seed, &rep.ra.schedule))?;
                write_text(&dir.join("o2o_greedy_schedule.json"), &schedule_to_string("o2o_greedy", 0, &rep.o2o.0))?;
                write_text(&dir.join("report.txt"), &text)?;
            }
            out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
