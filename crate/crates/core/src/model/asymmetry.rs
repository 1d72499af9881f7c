//! Routing asymmetry: per-direction distance and energy-rate coefficients.

use super::{DmcParams, Point};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    fn lerp(self, u: f64) -> f64 {
        self.lo + u * (self.hi - self.lo)
    }
}

/// Explicit coefficients for one ordered point pair, taking precedence over the
/// hashed field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOverride {
    pub from: Point,
    pub to: Point,
    pub k_dis: f64,
    pub k_egy: f64,
}

type PairKey = (i64, i64, i64, i64);

/// Deterministic pseudo-random field of asymmetry coefficients.
///
/// Coordinates are quantized to `grid` meters, so every algorithm that looks
/// at the same ordered pair of points sees the same coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryField {
    pub seed: u64,
    pub k_dis: Interval,
    pub k_egy: Interval,
    pub grid: f64,
    overrides: Vec<PairOverride>,
    lookup: BTreeMap<PairKey, (f64, f64)>,
}

impl Default for AsymmetryField {
    fn default() -> Self {
        AsymmetryField::new(0, Interval::new(0.5, 1.5), Interval::new(1.0, 1.0), 0.01)
    }
}

impl AsymmetryField {
    pub fn new(seed: u64, k_dis: Interval, k_egy: Interval, grid: f64) -> Self {
        AsymmetryField { seed, k_dis, k_egy, grid, overrides: Vec::new(), lookup: BTreeMap::new() }
    }

    /// A field with both coefficients fixed to 1 everywhere.
    pub fn symmetric() -> Self {
        AsymmetryField::new(0, Interval::new(1.0, 1.0), Interval::new(1.0, 1.0), 0.01)
    }

    pub fn with_overrides(mut self, overrides: Vec<PairOverride>) -> Self {
        self.lookup = overrides
            .iter()
            .map(|o| (self.key(o.from, o.to), (o.k_dis, o.k_egy)))
            .collect();
        self.overrides = overrides;
        self
    }

    pub fn overrides(&self) -> &[PairOverride] {
        &self.overrides
    }

    pub fn validate(&self) -> Result<()> {
        for (name, iv) in [("k_dis", self.k_dis), ("k_egy", self.k_egy)] {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo > 0.0 && iv.lo <= iv.hi) {
                return Err(Error::Validation(format!(
                    "asym.{name} range [{}, {}] must be positive with lo <= hi",
                    iv.lo, iv.hi
                )));
            }
        }
        if !(self.grid.is_finite() && self.grid > 0.0) {
            return Err(Error::Validation(format!("asym.grid must be positive, got {}", self.grid)));
        }
        for o in &self.overrides {
            if !(o.k_dis > 0.0 && o.k_egy > 0.0 && o.k_dis.is_finite() && o.k_egy.is_finite()) {
                return Err(Error::Validation("asym override coefficients must be positive".into()));
            }
        }
        Ok(())
    }

    fn quantize(&self, v: f64) -> i64 {
        (v / self.grid).round() as i64
    }

    fn key(&self, from: Point, to: Point) -> PairKey {
        (self.quantize(from.x), self.quantize(from.y), self.quantize(to.x), self.quantize(to.y))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_from(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Returns `(k_dis, k_egy)` for the ordered pair `from → to`.
pub fn ra_coefficients(asym: &AsymmetryField, from: Point, to: Point) -> (f64, f64) {
    let key = asym.key(from, to);
    if key.0 == key.2 && key.1 == key.3 {
        return (1.0, 1.0);
    }
    if let Some(&k) = asym.lookup.get(&key) {
        return k;
    }
    let mut h = splitmix64(asym.seed);
    for part in [key.0, key.1, key.2, key.3] {
        h = splitmix64(h ^ part as u64);
    }
    let k_dis = asym.k_dis.lerp(unit_from(splitmix64(h ^ 0x0064_6973)));
    let k_egy = asym.k_egy.lerp(unit_from(splitmix64(h ^ 0x0065_6779)));
    (k_dis, k_egy)
}

/// Routing-asymmetric distance of the directed segment `from → to`.
pub fn ra_distance(from: Point, to: Point, asym: &AsymmetryField) -> f64 {
    ra_coefficients(asym, from, to).0 * from.distance(to)
}

/// Movement energy (J) and time (s) of the directed segment `from → to`.
pub fn segment_move_energy_time(
    from: Point,
    to: Point,
    asym: &AsymmetryField,
    dmc: &DmcParams,
) -> (f64, f64) {
    let (k_dis, k_egy) = ra_coefficients(asym, from, to);
    let d = k_dis * from.distance(to);
    (d * k_egy * dmc.w0, d / dmc.v_bar)
}

/// RA distances and energy rates between an ordered point list (base station first).
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingMatrices {
    pub positions: Vec<Point>,
    /// `dist[i][j]`: RA distance from `i` to `j` (m).
    pub dist: Vec<Vec<f64>>,
    /// `egy_rate[i][j]`: RA movement energy rate from `i` to `j` (J/m).
    pub egy_rate: Vec<Vec<f64>>,
}

impl RoutingMatrices {
    pub fn build(positions: Vec<Point>, asym: &AsymmetryField, dmc: &DmcParams) -> Self {
        let n = positions.len();
        let mut dist = vec![vec![0.0; n]; n];
        let mut egy_rate = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (k_dis, k_egy) = ra_coefficients(asym, positions[i], positions[j]);
                dist[i][j] = k_dis * positions[i].distance(positions[j]);
                egy_rate[i][j] = k_egy * dmc.w0;
            }
        }
        RoutingMatrices { positions, dist, egy_rate }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Movement energy of every directed segment (J), `dist ⊙ egy_rate`.
    pub fn energy_matrix(&self) -> Vec<Vec<f64>> {
        self.dist
            .iter()
            .zip(&self.egy_rate)
            .map(|(d, w)| d.iter().zip(w).map(|(d, w)| d * w).collect())
            .collect()
    }
}

/// Total movement energy (J) and time (s) along a tour of position indices.
pub fn tour_move_energy_time(
    tour: &[usize],
    mat: &RoutingMatrices,
    dmc: &DmcParams,
) -> Result<(f64, f64)> {
    if tour.len() < 2 {
        return Err(Error::MalformedTour(format!("tour has {} entries, need at least 2", tour.len())));
    }
    if tour[0] != 0 || tour[tour.len() - 1] != 0 {
        return Err(Error::MalformedTour("tour must start and end at index 0".into()));
    }
    if let Some(&bad) = tour.iter().find(|&&i| i >= mat.len()) {
        return Err(Error::MalformedTour(format!("index {bad} out of range")));
    }
    let (mut energy, mut time) = (0.0, 0.0);
    for w in tour.windows(2) {
        let (a, b) = (w[0], w[1]);
        energy += mat.dist[a][b] * mat.egy_rate[a][b];
        time += mat.dist[a][b] / dmc.v_bar;
    }
    Ok((energy, time))
}
