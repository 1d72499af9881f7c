//! Domain types and the closed-form models used by every stage.

mod asymmetry;
mod energy;

pub use asymmetry::{
    ra_coefficients, ra_distance, segment_move_energy_time, tour_move_energy_time, AsymmetryField,
    Interval, PairOverride, RoutingMatrices,
};
pub use energy::{
    covers, final_node_energy, received_energy, transfer_coefficient, EnergyAccount, APEX_EPS,
};

use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Slack used when comparing energies against capacities.
pub const ENERGY_EPS: f64 = 1e-9;

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Direction of `other` seen from `self`, counterclockwise from the +x axis, in `[0, 2π)`.
    pub fn angle_to(self, other: Point) -> f64 {
        normalize_angle((other.y - self.y).atan2(other.x - self.x))
    }

    /// Rounds both coordinates to nine significant digits.
    pub fn snapped(self) -> Point {
        Point::new(round_sig(self.x), round_sig(self.y))
    }
}

/// Maps an angle onto `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Circular distance between two angles, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// Rounds to nine significant digits, the precision used by every file format.
///
/// A value that went through this function prints (shortest round-trip form)
/// with at most nine digits and parses back to the identical `f64`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// A rechargeable sensor node.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub pos: Point,
    /// Initial stored energy (J).
    pub e_b: f64,
    /// Energy demand (J).
    pub e_d: f64,
    /// Battery capacity (J).
    pub e_c: f64,
}

/// Parameters of the directional mobile charger and of the transfer model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmcParams {
    /// Transmission power (W).
    pub p0: f64,
    /// Initial energy of the charger (J).
    pub e_b0: f64,
    /// Moving speed (m/s).
    pub v_bar: f64,
    /// Base movement energy rate (J/m).
    pub w0: f64,
    /// Charge distance (m).
    pub charge_distance: f64,
    /// Sector angle (rad).
    pub phi: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for DmcParams {
    /// Default simulation parameters. The charger's initial energy is not part
    /// of the published table; it is set high enough that no generated
    /// instance exhausts it.
    fn default() -> Self {
        DmcParams {
            p0: 4.0,
            e_b0: 1.0e6,
            v_bar: 1.0,
            w0: 4.0,
            charge_distance: 20.0,
            phi: std::f64::consts::FRAC_PI_4,
            delta: 4000.0,
            alpha: 100.0,
            beta: 2.0,
        }
    }
}

impl DmcParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("p0", self.p0),
            ("e_b0", self.e_b0),
            ("v", self.v_bar),
            ("w0", self.w0),
            ("d", self.charge_distance),
            ("phi", self.phi),
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!("dmc.{name} must be positive, got {v}")));
            }
        }
        if self.phi >= TAU {
            return Err(Error::Validation(format!("dmc.phi must be below 2π, got {}", self.phi)));
        }
        Ok(())
    }

    /// Largest transfer coefficient, reached at distance zero.
    pub fn max_coefficient(&self) -> f64 {
        self.delta / self.alpha.powf(self.beta)
    }
}

/// The complete problem input.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    pub nodes: Vec<Node>,
    pub bs_pos: Point,
    pub dmc: DmcParams,
    pub asym: AsymmetryField,
    /// Side length of the square deployment area `[0, area]²` (m).
    pub area: f64,
}

impl NetworkInstance {
    /// Builds an instance and checks every input invariant.
    pub fn new(
        nodes: Vec<Node>,
        bs_pos: Point,
        dmc: DmcParams,
        asym: AsymmetryField,
        area: f64,
    ) -> Result<Self> {
        let inst = NetworkInstance { nodes, bs_pos, dmc, asym, area };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.dmc.validate()?;
        self.asym.validate()?;
        if !(self.area.is_finite() && self.area > 0.0) {
            return Err(Error::Validation(format!("area must be positive, got {}", self.area)));
        }
        if self.nodes.is_empty() {
            return Err(Error::Validation("instance has no nodes".into()));
        }
        let inside = |p: Point| (0.0..=self.area).contains(&p.x) && (0.0..=self.area).contains(&p.y);
        if !inside(self.bs_pos) {
            return Err(Error::Validation("base station lies outside the area".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::Validation(format!("node at index {i} has id {}", n.id)));
            }
            if !inside(n.pos) {
                return Err(Error::Validation(format!("node {i} lies outside the area")));
            }
            if !(n.e_b.is_finite() && n.e_b >= 0.0) {
                return Err(Error::Validation(format!("node {i}: e_b must be >= 0")));
            }
            if !(n.e_d.is_finite() && n.e_d >= 0.0) {
                return Err(Error::Validation(format!("node {i}: e_d must be >= 0")));
            }
            if !(n.e_c.is_finite() && n.e_c > 0.0) {
                return Err(Error::Validation(format!("node {i}: e_c must be > 0")));
            }
            if n.e_b + n.e_d > n.e_c + ENERGY_EPS {
                return Err(Error::Validation(format!(
                    "node {i}: e_b + e_d = {} exceeds capacity {}",
                    n.e_b + n.e_d,
                    n.e_c
                )));
            }
        }
        Ok(())
    }

    pub fn node_positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|n| n.pos).collect()
    }

    pub fn initial_energies(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.e_b).collect()
    }

    pub fn demands(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.e_d).collect()
    }

    pub fn capacities(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.e_c).collect()
    }
}
