//! On-disk formats.
//!
//! Instances and schedules are pretty-printed JSON, metrics are CSV. Every
//! float is rounded to nine significant digits before writing, so a file
//! parsed and written again is byte-identical.

use crate::error::{CliError, Result};
use dmcsched::model::{round_sig, AsymmetryField, DmcParams, Interval, NetworkInstance, Node, PairOverride, Point};
use dmcsched::pipeline::{ItemState, OperationSchedule, ScheduleItem, ScheduleMetrics};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyDto {
    pub x: f64,
    pub y: f64,
}

impl From<Point> for XyDto {
    fn from(p: Point) -> Self {
        XyDto { x: round_sig(p.x), y: round_sig(p.y) }
    }
}

impl From<XyDto> for Point {
    fn from(p: XyDto) -> Self {
        Point::new(p.x, p.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDto {
    pub x: f64,
    pub y: f64,
    pub e_b: f64,
    pub e_d: f64,
    pub e_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcDto {
    pub p0: f64,
    pub e_b0: f64,
    pub d: f64,
    pub phi: f64,
    pub v: f64,
    pub w0: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl From<&DmcParams> for DmcDto {
    fn from(d: &DmcParams) -> Self {
        DmcDto {
            p0: round_sig(d.p0),
            e_b0: round_sig(d.e_b0),
            d: round_sig(d.charge_distance),
            phi: round_sig(d.phi),
            v: round_sig(d.v_bar),
            w0: round_sig(d.w0),
            delta: round_sig(d.delta),
            alpha: round_sig(d.alpha),
            beta: round_sig(d.beta),
        }
    }
}

impl From<&DmcDto> for DmcParams {
    fn from(d: &DmcDto) -> Self {
        DmcParams {
            p0: d.p0,
            e_b0: d.e_b0,
            v_bar: d.v,
            w0: d.w0,
            charge_distance: d.d,
            phi: d.phi,
            delta: d.delta,
            alpha: d.alpha,
            beta: d.beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverrideDto {
    pub from: XyDto,
    pub to: XyDto,
    pub k_dis: f64,
    pub k_egy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymDto {
    pub seed: u64,
    pub k_dis_lo: f64,
    pub k_dis_hi: f64,
    pub k_egy_lo: f64,
    pub k_egy_hi: f64,
    pub grid: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<OverrideDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDto {
    pub area: f64,
    pub bs: XyDto,
    pub dmc: DmcDto,
    pub asym: AsymDto,
    pub nodes: Vec<NodeDto>,
}

impl From<&NetworkInstance> for InstanceDto {
    fn from(inst: &NetworkInstance) -> Self {
        let a = &inst.asym;
        InstanceDto {
            area: round_sig(inst.area),
            bs: inst.bs_pos.into(),
            dmc: (&inst.dmc).into(),
            asym: AsymDto {
                seed: a.seed,
                k_dis_lo: round_sig(a.k_dis.lo),
                k_dis_hi: round_sig(a.k_dis.hi),
                k_egy_lo: round_sig(a.k_egy.lo),
                k_egy_hi: round_sig(a.k_egy.hi),
                grid: round_sig(a.grid),
                overrides: a
                    .overrides()
                    .iter()
                    .map(|o| OverrideDto {
                        from: o.from.into(),
                        to: o.to.into(),
                        k_dis: round_sig(o.k_dis),
                        k_egy: round_sig(o.k_egy),
                    })
                    .collect(),
            },
            nodes: inst
                .nodes
                .iter()
                .map(|n| NodeDto {
                    x: round_sig(n.pos.x),
                    y: round_sig(n.pos.y),
                    e_b: round_sig(n.e_b),
                    e_d: round_sig(n.e_d),
                    e_c: round_sig(n.e_c),
                })
                .collect(),
        }
    }
}

impl InstanceDto {
    pub fn to_instance(&self) -> dmcsched::Result<NetworkInstance> {
        let a = &self.asym;
        let overrides = a
            .overrides
            .iter()
            .map(|o| PairOverride { from: o.from.into(), to: o.to.into(), k_dis: o.k_dis, k_egy: o.k_egy })
            .collect();
        let asym = AsymmetryField::new(
            a.seed,
            Interval::new(a.k_dis_lo, a.k_dis_hi),
            Interval::new(a.k_egy_lo, a.k_egy_hi),
            a.grid,
        )
        .with_overrides(overrides);
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| Node { id, pos: Point::new(n.x, n.y), e_b: n.e_b, e_d: n.e_d, e_c: n.e_c })
            .collect();
        NetworkInstance::new(nodes, self.bs.into(), (&self.dmc).into(), asym, self.area)
    }
}

/// The instance exactly as it reads back from a file.
pub fn canonical(inst: &NetworkInstance) -> dmcsched::Result<NetworkInstance> {
    InstanceDto::from(inst).to_instance()
}

pub fn instance_to_string(inst: &NetworkInstance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceDto::from(inst)).expect("instance serializes");
    s.push('\n');
    s
}

pub fn instance_from_str(s: &str, path: &Path) -> Result<NetworkInstance> {
    let dto: InstanceDto = serde_json::from_str(s).map_err(|e| CliError::parse(path, e))?;
    Ok(dto.to_instance()?)
}

pub fn read_instance(path: &Path) -> Result<NetworkInstance> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    instance_from_str(&s, path)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemDto {
    pub state: u8,
    pub l: XyDto,
    pub psi: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDto {
    pub algorithm: String,
    pub seed: u64,
    pub items: Vec<ItemDto>,
}

pub fn schedule_to_string(algorithm: &str, seed: u64, s: &OperationSchedule) -> String {
    let dto = ScheduleDto {
        algorithm: algorithm.to_string(),
        seed,
        items: s
            .items
            .iter()
            .map(|i| ItemDto { state: i.state.code(), l: i.l.into(), psi: round_sig(i.psi), t: round_sig(i.t) })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("schedule serializes");
    out.push('\n');
    out
}

pub fn schedule_from_str(s: &str, path: &Path) -> Result<(ScheduleDto, OperationSchedule)> {
    let dto: ScheduleDto = serde_json::from_str(s).map_err(|e| CliError::parse(path, e))?;
    let items = dto
        .items
        .iter()
        .map(|i| {
            Ok(ScheduleItem { state: ItemState::from_code(i.state)?, l: i.l.into(), psi: i.psi, t: i.t })
        })
        .collect::<dmcsched::Result<Vec<_>>>()?;
    Ok((dto, OperationSchedule { items }))
}

pub fn read_schedule(path: &Path) -> Result<(ScheduleDto, OperationSchedule)> {
    let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    schedule_from_str(&s, path)
}

/// Metric columns, in CSV order.
pub const METRIC_FIELDS: [&str; 11] = [
    "total_energy_loss",
    "charging_energy_loss",
    "movement_energy",
    "tour_distance",
    "time_span",
    "charging_time",
    "moving_time",
    "algorithm_runtime",
    "received_total",
    "dmc_final_energy",
    "feasible",
];

pub fn metric_values(m: &ScheduleMetrics) -> [f64; 11] {
    [
        m.total_energy_loss,
        m.charging_energy_loss,
        m.movement_energy,
        m.tour_distance,
        m.time_span,
        m.charging_time,
        m.moving_time,
        m.algorithm_runtime,
        m.received_total,
        m.dmc_final_energy,
        if m.feasible { 1.0 } else { 0.0 },
    ]
}

pub fn metrics_from_values(v: &[f64]) -> ScheduleMetrics {
    ScheduleMetrics {
        total_energy_loss: v[0],
        charging_energy_loss: v[1],
        movement_energy: v[2],
        tour_distance: v[3],
        time_span: v[4],
        charging_time: v[5],
        moving_time: v[6],
        algorithm_runtime: v[7],
        received_total: v[8],
        dmc_final_energy: v[9],
        feasible: v[10] != 0.0,
    }
}

/// Formats a float at file precision.
pub fn fmt_f(x: f64) -> String {
    round_sig(x).to_string()
}

/// Single-schedule metrics CSV: header then one row.
pub fn metrics_csv(algorithm: &str, m: &ScheduleMetrics) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["algorithm"];
    header.extend(METRIC_FIELDS);
    w.write_record(&header).expect("in-memory write");
    let mut row = vec![algorithm.to_string()];
    row.extend(metric_values(m).iter().map(|&v| fmt_f(v)));
    w.write_record(&row).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use dmcsched::generate::{generate_instance, GeneratorConfig};

    #[test]
    fn instance_round_trip_is_byte_identical() {
        let inst = generate_instance(40, 3, &GeneratorConfig::default()).unwrap();
        let a = instance_to_string(&inst);
        let back = instance_from_str(&a, Path::new("mem")).unwrap();
        assert_eq!(instance_to_string(&back), a);
        assert!(a.contains("\"k_dis_lo\"") && a.contains("\"e_b0\"") && a.contains("\"bs\""));
        assert_eq!(canonical(&back).unwrap(), back);
    }

    #[test]
    fn schedule_round_trip() {
        let inst = canonical(&generate_instance(30, 1, &GeneratorConfig::default()).unwrap()).unwrap();
        let (s, _) = dmcsched::pipeline::ra_dmcs(&inst, 1).unwrap();
        let text = schedule_to_string("ra_dmcs", 1, &s);
        let (dto, back) = schedule_from_str(&text, Path::new("mem")).unwrap();
        assert_eq!(dto.algorithm, "ra_dmcs");
        assert_eq!(back, s);
        assert_eq!(schedule_to_string("ra_dmcs", 1, &back), text);
    }

    #[test]
    fn rejects_invalid_instance() {
        let inst = generate_instance(3, 1, &GeneratorConfig::default()).unwrap();
        let bad = instance_to_string(&inst).replacen("\"e_c\": ", "\"e_c\": -", 1);
        assert!(matches!(instance_from_str(&bad, Path::new("x")), Err(CliError::Core(_))));
        assert!(matches!(instance_from_str("{", Path::new("x")), Err(CliError::Parse { .. })));
    }

    #[test]
    fn metrics_header() {
        let csv = metrics_csv("o2o_greedy", &ScheduleMetrics::default());
        assert!(csv.starts_with("algorithm,total_energy_loss,charging_energy_loss,"));
        assert_eq!(csv.lines().count(), 2);
    }
}
