//! Random instances with the default simulation parameters.

use crate::error::{Error, Result};
use crate::model::{round_sig, AsymmetryField, DmcParams, Interval, NetworkInstance, Node, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// Side of the square area (m).
    pub area: f64,
    /// `None` puts the base station at the centre of the area.
    pub bs_pos: Option<Point>,
    pub dmc: DmcParams,
    pub e_c: Interval,
    pub e_b: Interval,
    pub e_d: Interval,
    pub k_dis: Interval,
    pub k_egy: Interval,
    pub grid: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            area: 200.0,
            bs_pos: None,
            dmc: DmcParams::default(),
            e_c: Interval::new(60.0, 90.0),
            e_b: Interval::new(6.0, 36.0),
            e_d: Interval::new(18.0, 75.0),
            k_dis: Interval::new(0.5, 1.5),
            k_egy: Interval::new(1.0, 1.0),
            grid: 0.01,
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, iv: Interval) -> f64 {
    if iv.hi > iv.lo {
        rng.gen_range(iv.lo..=iv.hi)
    } else {
        iv.lo
    }
}

/// `n` nodes uniform over the area. Demands are clamped so that
/// `e_b + e_d <= e_c`; every value is already at serialized precision.
pub fn generate_instance(n: usize, seed: u64, cfg: &GeneratorConfig) -> Result<NetworkInstance> {
    if n == 0 {
        return Err(Error::Parameter("node count must be at least 1".into()));
    }
    for iv in [cfg.e_c, cfg.e_b, cfg.e_d] {
        if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo >= 0.0 && iv.lo <= iv.hi) {
            return Err(Error::Parameter(format!("bad energy range [{}, {}]", iv.lo, iv.hi)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n);
    for id in 0..n {
        let pos = Point::new(uniform(&mut rng, Interval::new(0.0, cfg.area)), uniform(&mut rng, Interval::new(0.0, cfg.area)))
            .snapped();
        let e_c = round_sig(uniform(&mut rng, cfg.e_c));
        let e_b = round_sig(uniform(&mut rng, cfg.e_b)).min(e_c);
        let raw_d = uniform(&mut rng, cfg.e_d);
        let mut e_d = round_sig(raw_d.min(e_c - e_b).max(0.0));
        while e_b + e_d > e_c && e_d > 0.0 {
            // one unit in the ninth significant digit
            e_d = round_sig(e_d - 10f64.powi(e_d.log10().floor() as i32 - 8));
        }
        nodes.push(Node { id, pos, e_b, e_d, e_c });
    }
    let bs = cfg.bs_pos.unwrap_or(Point::new(cfg.area / 2.0, cfg.area / 2.0)).snapped();
    let asym = AsymmetryField::new(seed, cfg.k_dis, cfg.k_egy, cfg.grid);
    NetworkInstance::new(nodes, bs, cfg.dmc, asym, cfg.area)
}
