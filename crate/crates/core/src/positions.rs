//! Charging position selection: grow the number of k-means clusters until the
//! minimum enclosing circle of every cluster fits within the charge distance.

use crate::error::{Error, Result};
use crate::model::{NetworkInstance, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_LLOYD_ITERATIONS: usize = 100;
const CIRCLE_EPS: f64 = 1e-9;
/// Fixed shuffle seed so enclosing circles are reproducible.
const WELZL_SEED: u64 = 0x57E1_2100;

/// A group of nodes served from one charging position.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub member_ids: Vec<usize>,
    /// Center of the minimum enclosing circle of the members.
    pub center: Point,
    pub radius: f64,
}

/// Charging positions with the node assignment that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingPositionSet {
    pub positions: Vec<Point>,
    /// `assignment[node]` is the index of the position serving that node.
    pub assignment: Vec<usize>,
}

impl ChargingPositionSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Distance from each node to its assigned position.
    pub fn assigned_distances(&self, nodes: &[Point]) -> Vec<f64> {
        nodes.iter().zip(&self.assignment).map(|(p, &a)| p.distance(self.positions[a])).collect()
    }

    /// Farthest assigned node per position.
    pub fn max_assigned_distance(&self, nodes: &[Point]) -> Vec<f64> {
        let mut out = vec![0.0f64; self.positions.len()];
        for (d, &a) in self.assigned_distances(nodes).iter().zip(&self.assignment) {
            out[a] = out[a].max(*d);
        }
        out
    }
}

fn sq_dist(a: Point, b: Point) -> f64 {
    (a.x - b.x).powi(2) + (a.y - b.y).powi(2)
}

fn nearest(p: Point, centers: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &c) in centers.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// k-means++ seeding.
fn seed_centers(points: &[Point], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centers = vec![points[first]];
    let mut d2: Vec<f64> = points.iter().map(|&p| sq_dist(p, points[first])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // only duplicates remain
            (0..n).find(|&i| !chosen[i]).expect("k <= n")
        };
        chosen[pick] = true;
        centers.push(points[pick]);
        for (w, &p) in d2.iter_mut().zip(points) {
            *w = w.min(sq_dist(p, points[pick]));
        }
    }
    centers
}

/// Lloyd's k-means with k-means++ seeding. Each returned cluster carries the
/// minimum enclosing circle of its members; clusters that end up empty (only
/// possible with duplicate points) are dropped.
pub fn kmeans(points: &[Point], k: usize, seed: u64) -> Result<Vec<Cluster>> {
    if k == 0 || k > points.len() {
        return Err(Error::Parameter(format!("k = {k} must be in 1..={}", points.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(points, k, &mut rng);
    let mut labels: Vec<usize> = points.iter().map(|&p| nearest(p, &centers)).collect();

    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (&p, &l) in points.iter().zip(&labels) {
            sums[l].0 += p.x;
            sums[l].1 += p.y;
            sums[l].2 += 1;
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s.2 > 0 {
                *c = Point::new(s.0 / s.2 as f64, s.1 / s.2 as f64);
            }
        }
        let mut counts: Vec<usize> = sums.iter().map(|s| s.2).collect();
        // re-seed empty clusters from the point farthest from its center
        for empty in 0..k {
            if counts[empty] > 0 {
                continue;
            }
            let far = (0..points.len())
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&a, &b| {
                    sq_dist(points[a], centers[labels[a]])
                        .total_cmp(&sq_dist(points[b], centers[labels[b]]))
                        .then(b.cmp(&a))
                });
            if let Some(i) = far {
                counts[labels[i]] -= 1;
                counts[empty] = 1;
                labels[i] = empty;
                centers[empty] = points[i];
            }
        }
        let next: Vec<usize> = points.iter().map(|&p| nearest(p, &centers)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }

    let mut members = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    members
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|member_ids| {
            let pts: Vec<Point> = member_ids.iter().map(|&i| points[i]).collect();
            let (center, radius) = min_enclosing_circle(&pts)?;
            Ok(Cluster { member_ids, center, radius })
        })
        .collect()
}

fn circle_two(a: Point, b: Point) -> (Point, f64) {
    let c = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    (c, a.distance(b) / 2.0)
}

fn circle_three(a: Point, b: Point, c: Point) -> (Point, f64) {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
    if d.abs() <= 1e-12 * scale {
        // collinear: the farthest pair spans the circle
        return [circle_two(a, b), circle_two(a, c), circle_two(b, c)]
            .into_iter()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    (center, center.distance(a))
}

fn inside(circle: (Point, f64), p: Point) -> bool {
    circle.0.distance(p) <= circle.1 + CIRCLE_EPS * circle.1.max(1.0)
}

/// Smallest circle containing every point (randomized incremental Welzl).
///
/// The returned radius is the exact maximum distance from the center to the
/// input points.
pub fn min_enclosing_circle(points: &[Point]) -> Result<(Point, f64)> {
    if points.is_empty() {
        return Err(Error::Parameter("minimum enclosing circle of an empty point set".into()));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(WELZL_SEED));
    let mut circle = (pts[0], 0.0);
    for i in 1..pts.len() {
        if inside(circle, pts[i]) {
            continue;
        }
        circle = (pts[i], 0.0);
        for j in 0..i {
            if inside(circle, pts[j]) {
                continue;
            }
            circle = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if !inside(circle, pts[k]) {
                    circle = circle_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    let radius = points.iter().map(|p| circle.0.distance(*p)).fold(0.0, f64::max);
    Ok((circle.0, radius))
}

/// Whether every cluster's enclosing circle fits within `d` of its center.
fn clusters_fit(clusters: &[Cluster], d: f64) -> bool {
    clusters.iter().all(|c| c.radius <= d)
}

/// Smallest k (counting up from 1) whose seeded k-means clusters all have an
/// enclosing radius within the charge distance, together with the resulting
/// charging positions. Positions are rounded to nine significant digits so
/// they survive serialization unchanged.
pub fn kcpg(instance: &NetworkInstance, seed: u64) -> Result<(usize, ChargingPositionSet)> {
    let points = instance.node_positions();
    let d = instance.dmc.charge_distance;
    for k in 1..=points.len() {
        let clusters = kmeans(&points, k, seed)?;
        if !clusters_fit(&clusters, d) {
            continue;
        }
        let positions: Vec<Point> = clusters.iter().map(|c| c.center.snapped()).collect();
        let mut assignment = vec![0; points.len()];
        for (ci, c) in clusters.iter().enumerate() {
            for &m in &c.member_ids {
                assignment[m] = ci;
            }
        }
        let set = ChargingPositionSet { positions, assignment };
        // rounding may push a member sitting exactly on the circle out of reach
        if set.assigned_distances(&points).iter().all(|&x| x <= d) {
            return Ok((k, set));
        }
    }
    Err(Error::Internal("no cluster count produced a valid position set".into()))
}

/// Re-runs k-means with `k` clusters and reports whether some cluster is too wide.
pub fn kmeans_exceeds_radius(points: &[Point], k: usize, seed: u64, d: f64) -> Result<bool> {
    Ok(!clusters_fit(&kmeans(points, k, seed)?, d))
}
