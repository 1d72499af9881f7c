//! Ten-node toy network with hand-set movement energy rates between the base
//! station and four charging spots.

use crate::io::fmt_f;
use dmcsched::model::{AsymmetryField, DmcParams, Interval, NetworkInstance, Node, PairOverride, Point};
use dmcsched::pipeline::{o2o_greedy, ra_dmcs_detailed, ItemState, OperationSchedule, RaDmcsRun, ScheduleMetrics};

pub const BS: Point = Point::new(50.0, 50.0);
/// Charging spots A, B, C, D: the enclosing-circle centres of the four node groups.
pub const SPOTS: [Point; 4] = [Point::new(25.0, 75.0), Point::new(75.0, 75.0), Point::new(25.0, 25.0), Point::new(75.0, 25.0)];
pub const LABELS: [&str; 5] = ["BS", "A", "B", "C", "D"];

/// Energy rate coefficients, row = from, column = to, order BS, A, B, C, D.
pub const RATES: [[f64; 5]; 5] = [
    [0.00, 1.11, 1.10, 1.14, 1.35],
    [0.89, 0.00, 1.03, 1.31, 1.43],
    [0.90, 0.97, 0.00, 1.33, 1.15],
    [0.86, 0.69, 0.67, 0.00, 1.11],
    [0.65, 0.57, 0.85, 0.89, 0.00],
];

/// (x, y, e_d); each group's two extreme nodes are diametric.
const NODES: [(f64, f64, f64); 10] = [
    (17.0, 75.0, 30.0),
    (33.0, 75.0, 42.0),
    (32.0, 78.0, 36.0),
    (75.0, 67.0, 48.0),
    (75.0, 83.0, 33.0),
    (78.0, 82.0, 40.0),
    (18.0, 25.0, 45.0),
    (32.0, 25.0, 38.0),
    (75.0, 32.0, 50.0),
    (75.0, 18.0, 35.0),
];

pub fn toy_instance() -> NetworkInstance {
    let pts: Vec<Point> = std::iter::once(BS).chain(SPOTS).collect();
    let mut overrides = Vec::new();
    for (i, &from) in pts.iter().enumerate() {
        for (j, &to) in pts.iter().enumerate() {
            if i != j {
                overrides.push(PairOverride { from, to, k_dis: 1.0, k_egy: RATES[i][j] });
            }
        }
    }
    let asym = AsymmetryField::new(7, Interval::new(1.0, 1.0), Interval::new(0.57, 1.43), 0.01).with_overrides(overrides);
    let nodes = NODES
        .iter()
        .enumerate()
        .map(|(id, &(x, y, e_d))| Node { id, pos: Point::new(x, y), e_b: 20.0, e_d, e_c: 80.0 })
        .collect();
    NetworkInstance::new(nodes, BS, DmcParams::default(), asym, 100.0).expect("toy instance is valid")
}

pub struct DemoReport {
    pub instance: NetworkInstance,
    pub ra: RaDmcsRun,
    pub o2o: (OperationSchedule, ScheduleMetrics),
}

pub fn run_demo(seed: u64) -> dmcsched::Result<DemoReport> {
    // exactly what the written instance file reads back as
    let instance = crate::io::canonical(&toy_instance())?;
    let ra = ra_dmcs_detailed(&instance, seed)?;
    let o2o = o2o_greedy(&instance)?;
    Ok(DemoReport { instance, ra, o2o })
}

fn label(p: Point) -> String {
    std::iter::once(BS)
        .chain(SPOTS)
        .position(|q| q == p)
        .map(|i| LABELS[i].to_string())
        .unwrap_or_else(|| format!("({}, {})", fmt_f(p.x), fmt_f(p.y)))
}

fn tour_lines(inst: &NetworkInstance, s: &OperationSchedule) -> Vec<String> {
    let mut out = Vec::new();
    let mut at = inst.bs_pos;
    for it in &s.items {
        match it.state {
            ItemState::Move => {
                let (e, _) = dmcsched::model::segment_move_energy_time(at, it.l, &inst.asym, &inst.dmc);
                out.push(format!("  move {} -> {}: {:.2} J, {:.2} s", label(at), label(it.l), e, it.t));
                at = it.l;
            }
            ItemState::Transmit => {
                out.push(format!("  transmit at {} psi = {:.4} rad for {:.2} s", label(at), it.psi, it.t));
            }
        }
    }
    out
}

/// Plain-text report: metric table, then both schedules.
pub fn render(rep: &DemoReport) -> String {
    let (o, r) = (&rep.o2o.1, &rep.ra.metrics);
    let rows = [
        ("Energy loss (J)", o.total_energy_loss, r.total_energy_loss),
        ("Time span (s)", o.time_span, r.time_span),
        ("Charging energy loss (J)", o.charging_energy_loss, r.charging_energy_loss),
        ("Movement energy (J)", o.movement_energy, r.movement_energy),
        ("Charging time (s)", o.charging_time, r.charging_time),
        ("Moving time (s)", o.moving_time, r.moving_time),
    ];
    let mut s = format!("{:<28}{:>14}{:>14}\n", "metric", "o2o_greedy", "ra_dmcs");
    for (name, a, b) in rows {
        s.push_str(&format!("{name:<28}{a:>14.2}{b:>14.2}\n"));
    }
    let spots: Vec<String> = rep.ra.positions.positions.iter().map(|&p| label(p)).collect();
    s.push_str(&format!("\nra_dmcs charging positions: {}\n", spots.join(", ")));
    s.push_str("ra_dmcs schedule:\n");
    s.push_str(&tour_lines(&rep.instance, &rep.ra.schedule).join("\n"));
    s.push_str("\no2o_greedy schedule:\n");
    s.push_str(&tour_lines(&rep.instance, &rep.o2o.0).join("\n"));
    s.push('\n');
    s
}
