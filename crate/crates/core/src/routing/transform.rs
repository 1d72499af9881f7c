//! Node-doubling reduction of a directed tour problem to a symmetric one.
//!
//! Vertex `i` becomes an in-copy `i` and an out-copy `n + i`. The pair is
//! joined by a zero edge (a `-M` bonus shifted by `M`), out-copy `i` to
//! in-copy `j` costs `c[i][j] + M`, and every other edge carries a sentinel.
//! Optimal symmetric tours then use all `n` pair edges, and a symmetric cost
//! equals the directed cost plus `n * M`.

use super::local_search::{atsp_greedy, tsp_lk};
use super::{DirectedCostGraph, Tour};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TransformedTsp {
    pub graph: DirectedCostGraph,
    pub n: usize,
    /// Shift applied to every edge (`S + 1`, `S` the sum of all directed costs).
    pub big_m: f64,
}

pub fn atsp_to_tsp_transform(g: &DirectedCostGraph) -> Result<TransformedTsp> {
    let n = g.len();
    let s: f64 = g.costs().iter().flatten().sum();
    let big_m = s + 1.0;
    let sentinel = 2.0 * s + 1.0 + big_m;
    if !((2 * n) as f64 * sentinel).is_finite() {
        return Err(Error::Validation("costs too large for the symmetric transform".into()));
    }
    let mut c = vec![vec![sentinel; 2 * n]; 2 * n];
    for i in 0..2 * n {
        c[i][i] = 0.0;
    }
    for i in 0..n {
        c[i][n + i] = 0.0;
        c[n + i][i] = 0.0;
        for j in 0..n {
            if i != j {
                c[n + i][j] = g.cost(i, j) + big_m;
                c[j][n + i] = g.cost(i, j) + big_m;
            }
        }
    }
    Ok(TransformedTsp { graph: DirectedCostGraph::new(c)?, n, big_m })
}

impl TransformedTsp {
    /// Symmetric cost minus the `n * M` offset.
    pub fn reported_cost(&self, tsp: &Tour) -> f64 {
        tsp.cost - self.n as f64 * self.big_m
    }

    /// Maps a symmetric tour back to a directed tour on `original`. Fails if
    /// some pair edge is missing.
    pub fn decode(&self, tsp: &Tour, original: &DirectedCostGraph) -> Result<Tour> {
        let n = self.n;
        tsp.validate(2 * n)?;
        let mut cyc: Vec<usize> = tsp.order[..tsp.order.len() - 1].to_vec();
        if cyc.len() != 2 * n {
            return Err(Error::MalformedTour("symmetric tour revisits a vertex".into()));
        }
        if n == 1 {
            return Ok(Tour::from_order(vec![0, 0], original));
        }
        if cyc[1] != n {
            cyc[1..].reverse();
        }
        let mut order = Vec::with_capacity(n + 1);
        for pair in cyc.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a >= n || b != a + n {
                return Err(Error::MalformedTour(format!("pair edge missing at {a}")));
            }
            order.push(a);
        }
        order.push(0);
        Ok(Tour::from_order(order, original))
    }
}

/// Directed tour found by the symmetric local search on the transformed graph.
pub fn transform_lk(g: &DirectedCostGraph, seed: u64, budget: usize) -> Result<Tour> {
    let t = atsp_to_tsp_transform(g)?;
    let tsp = tsp_lk(&t.graph, seed, budget)?;
    t.decode(&tsp, g)
}

/// Directed tour from nearest-neighbour on the transformed graph.
pub fn transform_greedy(g: &DirectedCostGraph) -> Result<Tour> {
    let t = atsp_to_tsp_transform(g)?;
    t.decode(&atsp_greedy(&t.graph), g)
}
