//! Directional transfer coefficients and the energy bookkeeping of a schedule.

use super::{angular_distance, DmcParams, NetworkInstance};
use crate::error::{Error, Result};

/// Nodes closer than this to the charger sit at the sector apex and are
/// reached by every direction.
pub const APEX_EPS: f64 = 1e-9;

/// Tolerance on the closed angular interval of the sector.
const ANGLE_EPS: f64 = 1e-12;

/// Whether a node at angle `theta`, distance `d` lies in the sector of direction `psi`.
pub fn covers(psi: f64, theta: f64, d: f64, dmc: &DmcParams) -> bool {
    if d > dmc.charge_distance {
        return false;
    }
    d <= APEX_EPS || angular_distance(theta, psi) <= dmc.phi / 2.0 + ANGLE_EPS
}

/// Energy transfer coefficient from a charger pointing at `psi` with sector
/// angle `phi` to a node at angle `theta` and distance `d`.
pub fn transfer_coefficient(psi: f64, phi: f64, theta: f64, d: f64, dmc: &DmcParams) -> f64 {
    let dmc = DmcParams { phi, ..*dmc };
    if covers(psi, theta, d, &dmc) {
        dmc.delta / (dmc.alpha + d).powf(dmc.beta)
    } else {
        0.0
    }
}

/// Energy received by every node: `e_R[j] = p0 · Σ_i C[i][j] · t[i]`.
///
/// `c` is row-major with one row per Pos-Dir pair and one column per node.
pub fn received_energy(c: &[Vec<f64>], t: &[f64], p0: f64) -> Result<Vec<f64>> {
    if c.len() != t.len() {
        return Err(Error::Shape { expected: c.len(), got: t.len() });
    }
    let n = c.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for (row, &ti) in c.iter().zip(t) {
        if row.len() != n {
            return Err(Error::Shape { expected: n, got: row.len() });
        }
        if ti == 0.0 {
            continue;
        }
        for (o, &cij) in out.iter_mut().zip(row) {
            *o += cij * ti;
        }
    }
    out.iter_mut().for_each(|v| *v *= p0);
    Ok(out)
}

/// Final stored energy, `min(e_B + e_R, e_C)` elementwise.
pub fn final_node_energy(e_b: &[f64], e_r: &[f64], e_c: &[f64]) -> Vec<f64> {
    e_b.iter().zip(e_r).zip(e_c).map(|((b, r), c)| (b + r).min(*c)).collect()
}

/// Energy bookkeeping of a schedule, all values in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyAccount {
    /// Energy radiated by the charger.
    pub mc_tran: f64,
    /// Energy spent moving.
    pub mc_move: f64,
    pub mc_total: f64,
    /// Charger energy left at the end.
    pub f0: f64,
    /// Final stored energy per node.
    pub node_final: Vec<f64>,
    /// Energy actually stored by the nodes, `Σ (e_F - e_B)`.
    pub nodes_rcv: f64,
    /// Charging energy loss: radiated minus stored.
    pub wpt_loss: f64,
    /// Total energy loss: charger consumption minus stored.
    pub total_loss: f64,
    /// Total initial energy of the charger and all nodes.
    pub tb: f64,
    /// Total final energy of the charger and all nodes.
    pub tf: f64,
    /// The charger would run out of energy (`f0 < 0`).
    pub energy_deficit: bool,
}

impl EnergyAccount {
    /// `transmit_time` is the summed transmission time, `received` the raw
    /// (unclipped) energy delivered to each node.
    pub fn compute(
        instance: &NetworkInstance,
        transmit_time: f64,
        movement_energy: f64,
        received: &[f64],
    ) -> Result<Self> {
        let n = instance.nodes.len();
        if received.len() != n {
            return Err(Error::Shape { expected: n, got: received.len() });
        }
        let e_b = instance.initial_energies();
        let node_final = final_node_energy(&e_b, received, &instance.capacities());
        let mc_tran = instance.dmc.p0 * transmit_time;
        let mc_total = mc_tran + movement_energy;
        let f0 = instance.dmc.e_b0 - mc_tran - movement_energy;
        let nodes_rcv: f64 = node_final.iter().zip(&e_b).map(|(f, b)| f - b).sum();
        let mc_loss = instance.dmc.e_b0 - f0;
        let tb = instance.dmc.e_b0 + e_b.iter().sum::<f64>();
        let tf = f0 + node_final.iter().sum::<f64>();
        Ok(EnergyAccount {
            mc_tran,
            mc_move: movement_energy,
            mc_total,
            f0,
            nodes_rcv,
            wpt_loss: mc_tran - nodes_rcv,
            total_loss: mc_loss - nodes_rcv,
            tb,
            tf,
            energy_deficit: f0 < 0.0,
            node_final,
        })
    }
}
