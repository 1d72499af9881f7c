//! End-to-end scheduling: RA-DMCS, the one-to-one greedy baseline, and the
//! schedule evaluator.

use crate::directions::{build_coefficient_matrix, CoefficientMatrix};
use crate::error::{Error, Result};
use crate::model::{
    round_sig, segment_move_energy_time, transfer_coefficient, EnergyAccount, NetworkInstance, Point,
    RoutingMatrices,
};
use crate::positions::{kcpg, ChargingPositionSet};
use crate::routing::{atsp_greedy, atsp_lk, expand_tour, metric_closure, DirectedCostGraph, Tour, DEFAULT_BUDGET};
use crate::timing::{build_time_lp, solve_lp, LpSolution, LpStatus};
use std::time::Instant;

/// Slack allowed when checking schedule geometry and demand satisfaction.
pub const SCHEDULE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemState {
    Move,
    Transmit,
}

impl ItemState {
    pub fn code(self) -> u8 {
        match self {
            ItemState::Move => 0,
            ItemState::Transmit => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(ItemState::Move),
            1 => Ok(ItemState::Transmit),
            c => Err(Error::MalformedSchedule(format!("unknown item state {c}"))),
        }
    }
}

/// One step of the charger: travel to `l`, or transmit at `l` toward `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleItem {
    pub state: ItemState,
    pub l: Point,
    pub psi: f64,
    pub t: f64,
}

impl ScheduleItem {
    pub fn movement(to: Point, t: f64) -> Self {
        ScheduleItem { state: ItemState::Move, l: to, psi: 0.0, t }
    }

    pub fn transmission(at: Point, psi: f64, t: f64) -> Self {
        ScheduleItem { state: ItemState::Transmit, l: at, psi, t }
    }
}

/// Ordered charger operations. Starts and ends at the base station.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperationSchedule {
    pub items: Vec<ScheduleItem>,
}

impl OperationSchedule {
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_time(&self) -> f64 {
        self.items.iter().map(|i| i.t).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScheduleMetrics {
    pub total_energy_loss: f64,
    pub charging_energy_loss: f64,
    pub movement_energy: f64,
    pub tour_distance: f64,
    pub time_span: f64,
    pub charging_time: f64,
    pub moving_time: f64,
    /// Wall time of the scheduling call; 0 for a bare evaluation.
    pub algorithm_runtime: f64,
    pub received_total: f64,
    pub dmc_final_energy: f64,
    pub feasible: bool,
}

impl ScheduleMetrics {
    /// Largest relative violation of the internal identities
    /// (time span split and loss split).
    pub fn identity_error(&self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        rel(self.time_span, self.charging_time + self.moving_time)
            .max(rel(self.total_energy_loss, self.charging_energy_loss + self.movement_energy))
    }
}

/// Full evaluation result, including the per-node energy account.
#[derive(Debug, Clone)]
pub struct Execution {
    pub metrics: ScheduleMetrics,
    pub account: EnergyAccount,
    /// Raw energy delivered to each node before capacity clipping.
    pub delivered: Vec<f64>,
}

/// Simulates a schedule from the base station and accounts for every joule.
pub fn execute_detailed(instance: &NetworkInstance, s: &OperationSchedule) -> Result<Execution> {
    let dmc = &instance.dmc;
    let n = instance.nodes.len();
    let mut at = instance.bs_pos;
    let (mut move_energy, mut distance, mut move_time, mut tx_time, mut span) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut delivered = vec![0.0; n];
    for (idx, item) in s.items.iter().enumerate() {
        if !(item.t >= 0.0 && item.t.is_finite()) {
            return Err(Error::MalformedSchedule(format!("item {idx}: duration {} must be >= 0", item.t)));
        }
        if !(item.l.x.is_finite() && item.l.y.is_finite() && item.psi.is_finite()) {
            return Err(Error::MalformedSchedule(format!("item {idx}: non-finite field")));
        }
        span += item.t;
        match item.state {
            ItemState::Move => {
                let (e, dt) = segment_move_energy_time(at, item.l, &instance.asym, dmc);
                if (dt - item.t).abs() > SCHEDULE_EPS * dt.max(1.0) {
                    return Err(Error::MalformedSchedule(format!(
                        "item {idx}: move lasts {} s but the segment takes {dt} s",
                        item.t
                    )));
                }
                move_energy += e;
                distance += dt * dmc.v_bar;
                move_time += item.t;
                at = item.l;
            }
            ItemState::Transmit => {
                if at.distance(item.l) > SCHEDULE_EPS {
                    return Err(Error::MalformedSchedule(format!(
                        "item {idx}: transmission at ({}, {}) but the charger is at ({}, {})",
                        item.l.x, item.l.y, at.x, at.y
                    )));
                }
                add_transmission(instance, at, item.psi, item.t, &mut delivered);
                tx_time += item.t;
            }
        }
    }
    if at.distance(instance.bs_pos) > SCHEDULE_EPS {
        return Err(Error::MalformedSchedule("schedule does not return to the base station".into()));
    }
    let account = EnergyAccount::compute(instance, tx_time, move_energy, &delivered)?;
    let feasible = instance
        .nodes
        .iter()
        .zip(&account.node_final)
        .all(|(node, &f)| f >= node.e_b + node.e_d - SCHEDULE_EPS);
    let metrics = ScheduleMetrics {
        total_energy_loss: account.total_loss,
        charging_energy_loss: account.wpt_loss,
        movement_energy: move_energy,
        tour_distance: distance,
        time_span: span,
        charging_time: tx_time,
        moving_time: move_time,
        algorithm_runtime: 0.0,
        received_total: account.nodes_rcv,
        dmc_final_energy: account.f0,
        feasible,
    };
    Ok(Execution { metrics, account, delivered })
}

fn add_transmission(instance: &NetworkInstance, at: Point, psi: f64, t: f64, delivered: &mut [f64]) {
    let dmc = &instance.dmc;
    for (j, node) in instance.nodes.iter().enumerate() {
        let d = at.distance(node.pos);
        if d > dmc.charge_distance {
            continue;
        }
        let c = transfer_coefficient(psi, dmc.phi, at.angle_to(node.pos), d, dmc);
        delivered[j] += dmc.p0 * t * c;
    }
}

pub fn execute_schedule(instance: &NetworkInstance, s: &OperationSchedule) -> Result<ScheduleMetrics> {
    Ok(execute_detailed(instance, s)?.metrics)
}

/// Snaps a duration to the serialized precision without ever shortening it.
fn snap_up(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        round_sig(t * (1.0 + 1e-8))
    }
}

fn move_item(from: Point, to: Point, instance: &NetworkInstance) -> ScheduleItem {
    let (_, dt) = segment_move_energy_time(from, to, &instance.asym, &instance.dmc);
    ScheduleItem::movement(to, round_sig(dt))
}

/// Intermediate products of one RA-DMCS run.
#[derive(Debug, Clone)]
pub struct RaDmcsRun {
    pub k: usize,
    pub positions: ChargingPositionSet,
    pub coefficients: CoefficientMatrix,
    pub lp: LpSolution,
    /// Indices into `positions` that get at least one transmission.
    pub active: Vec<usize>,
    /// Expanded tour over `[bs] + active` (0 is the base station).
    pub tour: Tour,
    pub schedule: OperationSchedule,
    pub metrics: ScheduleMetrics,
}

/// Seed offset separating routing restarts from clustering.
const ROUTING_SALT: u64 = 0x726f757465;

pub fn ra_dmcs_detailed(instance: &NetworkInstance, seed: u64) -> Result<RaDmcsRun> {
    let start = Instant::now();
    instance.validate()?;
    let (k, positions) = kcpg(instance, seed)?;
    let coefficients = build_coefficient_matrix(&positions, instance)?;
    let lp = solve_lp(&build_time_lp(&coefficients, instance)?)?;
    if lp.status == LpStatus::Infeasible {
        return Err(Error::Infeasible);
    }

    let mut per_pos: Vec<Vec<(f64, f64)>> = vec![Vec::new(); positions.len()];
    for (row, &t) in coefficients.rows.iter().zip(&lp.t) {
        if t > 0.0 {
            per_pos[row.pos_index].push((row.psi, t));
        }
    }
    let active: Vec<usize> = (0..positions.len()).filter(|&p| !per_pos[p].is_empty()).collect();

    let mut points = vec![instance.bs_pos];
    points.extend(active.iter().map(|&p| positions.positions[p]));
    let mats = RoutingMatrices::build(points.clone(), &instance.asym, &instance.dmc);
    let closed = metric_closure(&DirectedCostGraph::new(mats.energy_matrix())?);
    let tour = if active.is_empty() {
        Tour { order: vec![0, 0], cost: 0.0 }
    } else {
        expand_tour(&atsp_lk(&closed, seed ^ ROUTING_SALT, DEFAULT_BUDGET), &closed)
    };

    let mut items = Vec::new();
    let mut served = vec![false; points.len()];
    served[0] = true;
    if !active.is_empty() {
        for w in tour.order.windows(2) {
            let (from, to) = (points[w[0]], points[w[1]]);
            items.push(move_item(from, to, instance));
            if !served[w[1]] {
                served[w[1]] = true;
                let mut dirs = per_pos[active[w[1] - 1]].clone();
                dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
                for (psi, t) in dirs {
                    items.push(ScheduleItem::transmission(to, round_sig(psi), snap_up(t)));
                }
            }
        }
    }
    let schedule = OperationSchedule { items };
    let mut metrics = execute_schedule(instance, &schedule)?;
    metrics.algorithm_runtime = start.elapsed().as_secs_f64();
    Ok(RaDmcsRun { k, positions, coefficients, lp, active, tour, schedule, metrics })
}

/// Many-to-many scheduling: positions by clustering, directions by angular
/// sweep, times by LP, and an asymmetric minimum-energy loop.
pub fn ra_dmcs(instance: &NetworkInstance, seed: u64) -> Result<(OperationSchedule, ScheduleMetrics)> {
    let run = ra_dmcs_detailed(instance, seed)?;
    Ok((run.schedule, run.metrics))
}

/// One-to-one baseline: the charger parks on every demanding node and
/// charges it alone; visiting order by nearest neighbour on movement energy.
pub fn o2o_greedy(instance: &NetworkInstance) -> Result<(OperationSchedule, ScheduleMetrics)> {
    let start = Instant::now();
    instance.validate()?;
    let needy: Vec<usize> = (0..instance.nodes.len()).filter(|&j| instance.nodes[j].e_d > 0.0).collect();
    let mut points = vec![instance.bs_pos];
    points.extend(needy.iter().map(|&j| instance.nodes[j].pos));
    let mut items = Vec::new();
    if !needy.is_empty() {
        let mats = RoutingMatrices::build(points.clone(), &instance.asym, &instance.dmc);
        let tour = atsp_greedy(&DirectedCostGraph::new(mats.energy_matrix())?);
        let rate = instance.dmc.p0 * instance.dmc.max_coefficient();
        for w in tour.order.windows(2) {
            let (from, to) = (points[w[0]], points[w[1]]);
            items.push(move_item(from, to, instance));
            if w[1] != 0 {
                let node = &instance.nodes[needy[w[1] - 1]];
                items.push(ScheduleItem::transmission(to, 0.0, snap_up(node.e_d / rate)));
            }
        }
    }
    let schedule = OperationSchedule { items };
    let mut metrics = execute_schedule(instance, &schedule)?;
    metrics.algorithm_runtime = start.elapsed().as_secs_f64();
    Ok((schedule, metrics))
}
