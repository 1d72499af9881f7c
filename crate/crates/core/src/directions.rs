//! Finite charging direction sets and the energy transfer coefficient matrix.
//!
//! At a fixed position the set of nodes reached by a sector only changes when
//! one of its edges crosses a node, i.e. at the angles `θ ± φ/2`. Sweeping
//! those events yields every distinct coverage subset; keeping one direction
//! per inclusion-maximal subset gives the smallest direction set that does
//! everything the continuum `[0, 2π)` can.

use crate::error::{Error, Result};
use crate::model::{covers, normalize_angle, transfer_coefficient, NetworkInstance, Point, APEX_EPS};
use crate::positions::ChargingPositionSet;
use std::f64::consts::TAU;

/// Events closer than this are merged.
const EVENT_EPS: f64 = 1e-12;

/// A node within charge distance of a position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InRange {
    pub id: usize,
    /// Direction of the node from the position, counterclockwise from +x.
    pub theta: f64,
    pub d: f64,
}

/// All nodes within charge distance of `pos`, in node order.
pub fn nodes_in_range(pos: Point, instance: &NetworkInstance) -> Vec<InRange> {
    instance
        .nodes
        .iter()
        .filter_map(|n| {
            let d = pos.distance(n.pos);
            (d <= instance.dmc.charge_distance).then(|| InRange { id: n.id, theta: pos.angle_to(n.pos), d })
        })
        .collect()
}

/// One representative direction with the node ids its sector covers.
#[derive(Debug, Clone, PartialEq)]
pub struct Representative {
    pub psi: f64,
    pub covered: Vec<usize>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Representative directions at `pos` with their coverage subsets, sorted by angle.
pub fn representatives(pos: Point, instance: &NetworkInstance) -> Vec<Representative> {
    let in_range = nodes_in_range(pos, instance);
    if in_range.is_empty() {
        return Vec::new();
    }
    let dmc = &instance.dmc;
    let half = dmc.phi / 2.0;
    let coverage = |psi: f64| -> Vec<usize> {
        in_range.iter().filter(|n| covers(psi, n.theta, n.d, dmc)).map(|n| n.id).collect()
    };

    let mut events: Vec<f64> = in_range
        .iter()
        .filter(|n| n.d > APEX_EPS)
        .flat_map(|n| [normalize_angle(n.theta - half), normalize_angle(n.theta + half)])
        .collect();
    events.sort_by(f64::total_cmp);
    events.dedup_by(|a, b| (*a - *b).abs() <= EVENT_EPS);
    if events.len() > 1 && events[0] + TAU - events[events.len() - 1] <= EVENT_EPS {
        events.pop();
    }

    let mut candidates: Vec<Representative> = if events.len() < 2 {
        // only apex nodes: every direction is equivalent
        vec![Representative { psi: 0.0, covered: coverage(0.0) }]
    } else {
        (0..events.len())
            .map(|k| {
                let start = events[k];
                let end = if k + 1 < events.len() { events[k + 1] } else { events[0] + TAU };
                let psi = normalize_angle((start + end) / 2.0);
                Representative { psi, covered: coverage(psi) }
            })
            .collect()
    };

    // identical subsets keep the smallest angle
    candidates.sort_by(|a, b| a.psi.total_cmp(&b.psi));
    let mut unique: Vec<Representative> = Vec::new();
    for c in candidates {
        if !c.covered.is_empty() && !unique.iter().any(|u| u.covered == c.covered) {
            unique.push(c);
        }
    }
    let maximal: Vec<Representative> = unique
        .iter()
        .filter(|c| {
            !unique
                .iter()
                .any(|o| o.covered.len() > c.covered.len() && is_subset(&c.covered, &o.covered))
        })
        .cloned()
        .collect();
    maximal
}

/// Minimum functional-representative direction set at `pos`, ascending.
pub fn mfrds(pos: Point, instance: &NetworkInstance) -> Vec<f64> {
    representatives(pos, instance).into_iter().map(|r| r.psi).collect()
}

/// A charging position paired with one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PosDirPair {
    pub pos_index: usize,
    pub psi: f64,
    pub covered: Vec<usize>,
}

/// Transfer coefficients from every Pos-Dir pair (rows) to every node (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    pub rows: Vec<PosDirPair>,
    pub entries: Vec<Vec<f64>>,
}

impl CoefficientMatrix {
    pub fn num_pairs(&self) -> usize {
        self.rows.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }
}

/// Builds the Pos-Dir pairs of every position (ordered by position, then
/// direction) and their coefficients to every node.
pub fn build_coefficient_matrix(
    positions: &ChargingPositionSet,
    instance: &NetworkInstance,
) -> Result<CoefficientMatrix> {
    let n = instance.nodes.len();
    let dmc = &instance.dmc;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut reached = vec![false; n];
    for (pi, &pos) in positions.positions.iter().enumerate() {
        for rep in representatives(pos, instance) {
            let row: Vec<f64> = instance
                .nodes
                .iter()
                .map(|node| {
                    let d = pos.distance(node.pos);
                    transfer_coefficient(rep.psi, dmc.phi, pos.angle_to(node.pos), d, dmc)
                })
                .collect();
            for (j, &c) in row.iter().enumerate() {
                reached[j] |= c > 0.0;
            }
            entries.push(row);
            rows.push(PosDirPair { pos_index: pi, psi: rep.psi, covered: rep.covered });
        }
    }
    if let Some(j) = reached.iter().position(|&r| !r) {
        return Err(Error::Internal(format!("node {j} is not covered by any Pos-Dir pair")));
    }
    Ok(CoefficientMatrix { rows, entries })
}
