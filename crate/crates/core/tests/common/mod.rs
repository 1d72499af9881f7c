//! Independent reference implementations used to check the library.
//!
//! Everything here is written from the definitions, deliberately slow and
//! without reusing library internals beyond the shared data types.

#![allow(dead_code)]

use dmcsched::model::{NetworkInstance, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `min 1ᵀt s.t. A t >= b, t >= 0` by enumerating every basic solution.
/// Returns `None` when no vertex is feasible.
pub fn lp_vertex_enumeration(a: &[Vec<f64>], b: &[f64], k: usize) -> Option<f64> {
    // constraint i < a.len(): row of A; otherwise t[i - a.len()] >= 0
    let m = a.len() + k;
    let row = |i: usize| -> (Vec<f64>, f64) {
        if i < a.len() {
            (a[i].clone(), b[i])
        } else {
            let mut r = vec![0.0; k];
            r[i - a.len()] = 1.0;
            (r, 0.0)
        }
    };
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<(Vec<f64>, f64)> = pick.iter().map(|&i| row(i)).collect();
        if let Some(t) = solve_square(rows) {
            let feasible = t.iter().all(|&x| x >= -1e-9)
                && a.iter().zip(b).all(|(r, &bi)| dot(r, &t) >= bi - 1e-9 * (1.0 + bi.abs()));
            if feasible {
                let obj: f64 = t.iter().sum();
                if best.is_none_or(|bv| obj < bv) {
                    best = Some(obj);
                }
            }
        }
        // next k-combination of 0..m
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - k + i {
                pick[i] += 1;
                for j in i + 1..k {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_square(mut rows: Vec<(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let n = rows.len();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| rows[x].0[col].abs().total_cmp(&rows[y].0[col].abs()))?;
        if rows[p].0[col].abs() < 1e-12 {
            return None;
        }
        rows.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = rows[r].0[col] / rows[col].0[col];
                if f != 0.0 {
                    let (pivot_row, pivot_rhs) = (rows[col].0.clone(), rows[col].1);
                    for c in col..n {
                        rows[r].0[c] -= f * pivot_row[c];
                    }
                    rows[r].1 -= f * pivot_rhs;
                }
            }
        }
    }
    Some((0..n).map(|i| rows[i].1 / rows[i].0[i]).collect())
}

/// Minimum Hamiltonian cycle through 0 by trying all `(n-1)!` orders.
pub fn brute_force_atsp(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n <= 1 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |p| {
        let mut c = cost[0][p[0]];
        for w in p.windows(2) {
            c += cost[w[0]][w[1]];
        }
        c += cost[p[p.len() - 1]][0];
        if c < best {
            best = c;
        }
    });
    best
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Smallest circle through some 1-, 2- or 3-point support containing all points.
pub fn brute_force_mec(pts: &[Point]) -> (Point, f64) {
    let contains = |c: Point, r: f64| pts.iter().all(|p| c.distance(*p) <= r * (1.0 + 1e-9) + 1e-9);
    let mut best = (pts[0], f64::INFINITY);
    let mut consider = |c: Point, r: f64| {
        if r < best.1 && contains(c, r) {
            best = (c, r);
        }
    };
    for i in 0..pts.len() {
        consider(pts[i], 0.0);
        for j in i + 1..pts.len() {
            let c = Point::new((pts[i].x + pts[j].x) / 2.0, (pts[i].y + pts[j].y) / 2.0);
            consider(c, c.distance(pts[i]));
            for k in j + 1..pts.len() {
                if let Some(c) = circumcenter(pts[i], pts[j], pts[k]) {
                    consider(c, c.distance(pts[i]));
                }
            }
        }
    }
    best
}

fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-12 {
        return None;
    }
    let (a2, b2, c2) = (a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y, c.x * c.x + c.y * c.y);
    Some(Point::new(
        (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
        (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d,
    ))
}

/// Nodes lit by a sector pointing at `psi` from `pos`, straight from the
/// geometric definition (closed sector; a node at the apex is always lit).
pub fn sector_cover(pos: Point, psi: f64, inst: &NetworkInstance) -> BTreeSet<usize> {
    let half = inst.dmc.phi / 2.0;
    inst.nodes
        .iter()
        .filter(|n| {
            let d = pos.distance(n.pos);
            if d > inst.dmc.charge_distance {
                return false;
            }
            if d <= 1e-9 {
                return true;
            }
            let theta = (n.pos.y - pos.y).atan2(n.pos.x - pos.x);
            let mut diff = (theta - psi).rem_euclid(TAU);
            if diff > TAU / 2.0 {
                diff = TAU - diff;
            }
            diff <= half + 1e-12
        })
        .map(|n| n.id)
        .collect()
}

/// Inclusion-maximal nonempty coverage sets seen on a uniform angular grid.
pub fn grid_sweep_family(pos: Point, inst: &NetworkInstance, step: f64) -> BTreeSet<BTreeSet<usize>> {
    let steps = (TAU / step).ceil() as usize;
    let all: BTreeSet<BTreeSet<usize>> = (0..steps)
        .map(|i| sector_cover(pos, i as f64 * step, inst))
        .filter(|s| !s.is_empty())
        .collect();
    maximal_sets(&all)
}

pub fn maximal_sets(family: &BTreeSet<BTreeSet<usize>>) -> BTreeSet<BTreeSet<usize>> {
    family
        .iter()
        .filter(|s| !family.iter().any(|o| o.len() > s.len() && s.is_subset(o)))
        .cloned()
        .collect()
}

/// Random nonnegative directed cost matrix with zero diagonal.
pub fn random_costs(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { r.gen_range(1.0..100.0) }).collect())
        .collect()
}

/// Movement-energy matrix among random points under an instance's field,
/// computed from the coefficient definitions.
pub fn field_costs(inst: &NetworkInstance, pts: &[Point]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|&a| {
            pts.iter()
                .map(|&b| {
                    let (k_dis, k_egy) = dmcsched::model::ra_coefficients(&inst.asym, a, b);
                    inst.dmc.w0 * k_egy * k_dis * a.distance(b)
                })
                .collect()
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
