//! Charging tour construction on a directed (asymmetric) cost graph.
//!
//! Revisiting positions is allowed, so tours are searched on the metric
//! closure of the movement-energy graph and each closure arc is expanded back
//! into its witness path afterwards.

mod exact;
mod io;
mod local_search;
mod transform;

pub use exact::{held_karp, HELD_KARP_MAX};
pub use io::{read_cost_matrix, write_cost_matrix};
pub use local_search::{atsp_greedy, atsp_lk, tsp_lk, DEFAULT_BUDGET};
pub use transform::{transform_greedy, transform_lk};
pub use transform::{atsp_to_tsp_transform, TransformedTsp};

use crate::error::{Error, Result};

/// Square cost matrix with shortest-path witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedCostGraph {
    cost: Vec<Vec<f64>>,
    /// `next_hop[i][j]`: first vertex after `i` on the cheapest known `i → j` path.
    next_hop: Vec<Vec<usize>>,
}

impl DirectedCostGraph {
    pub fn new(cost: Vec<Vec<f64>>) -> Result<Self> {
        let n = cost.len();
        for (i, row) in cost.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape { expected: n, got: row.len() });
            }
            for (j, &c) in row.iter().enumerate() {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::Validation(format!("cost[{i}][{j}] = {c} must be finite and >= 0")));
                }
                if i == j && c != 0.0 {
                    return Err(Error::Validation(format!("cost[{i}][{i}] must be 0")));
                }
            }
        }
        let next_hop = (0..n).map(|_| (0..n).collect()).collect();
        Ok(DirectedCostGraph { cost, next_hop })
    }

    pub fn len(&self) -> usize {
        self.cost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cost.is_empty()
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i][j]
    }

    pub fn costs(&self) -> &[Vec<f64>] {
        &self.cost
    }

    pub fn next_hop(&self, i: usize, j: usize) -> usize {
        self.next_hop[i][j]
    }

    /// Summed arc cost of a closed order that starts and ends at the same vertex.
    pub fn path_cost(&self, order: &[usize]) -> f64 {
        order.windows(2).map(|w| self.cost[w[0]][w[1]]).sum()
    }

    /// Whether the directed triangle inequality holds everywhere (up to rounding).
    pub fn satisfies_triangle_inequality(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|k| {
                (0..n).all(|j| self.cost[i][j] <= (self.cost[i][k] + self.cost[k][j]) * (1.0 + 1e-12))
            })
        })
    }
}

/// Closed tour over the vertices of a cost graph; starts and ends at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    pub fn from_order(order: Vec<usize>, g: &DirectedCostGraph) -> Self {
        let cost = g.path_cost(&order);
        Tour { order, cost }
    }

    /// Checks start/end at 0 and that every vertex `0..n` appears.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.order.len() < 2 || self.order[0] != 0 || *self.order.last().unwrap() != 0 {
            return Err(Error::MalformedTour("tour must start and end at 0".into()));
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v >= n {
                return Err(Error::MalformedTour(format!("vertex {v} out of range")));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedTour(format!("vertex {v} is never visited")));
        }
        Ok(())
    }
}

/// All-pairs shortest directed paths (Floyd–Warshall) with witnesses.
pub fn metric_closure(g: &DirectedCostGraph) -> DirectedCostGraph {
    let n = g.len();
    let mut out = g.clone();
    for k in 0..n {
        for i in 0..n {
            let cik = out.cost[i][k];
            if i == k {
                continue;
            }
            for j in 0..n {
                let via = cik + out.cost[k][j];
                // strict relative margin keeps the closure idempotent under rounding
                if via < out.cost[i][j] * (1.0 - 1e-12) {
                    out.cost[i][j] = via;
                    out.next_hop[i][j] = out.next_hop[i][k];
                }
            }
        }
    }
    out
}

/// Replaces every arc of a tour on the closure by its witness path. The
/// expanded order may revisit vertices; its cost is unchanged.
pub fn expand_tour(tour: &Tour, g_closed: &DirectedCostGraph) -> Tour {
    let mut order = vec![tour.order[0]];
    for w in tour.order.windows(2) {
        let (mut at, to) = (w[0], w[1]);
        let mut guard = 0;
        while at != to && guard <= g_closed.len() {
            at = g_closed.next_hop[at][to];
            order.push(at);
            guard += 1;
        }
    }
    Tour::from_order(order, g_closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(c: Vec<Vec<f64>>) -> DirectedCostGraph {
        DirectedCostGraph::new(c).unwrap()
    }

    #[test]
    fn rejects_negative_and_ragged() {
        assert!(matches!(
            DirectedCostGraph::new(vec![vec![0.0, -1.0], vec![1.0, 0.0]]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(DirectedCostGraph::new(vec![vec![0.0, 1.0], vec![1.0]]), Err(Error::Shape { .. })));
    }

    #[test]
    fn closure_routes_through_cheaper_vertex() {
        // a=0, b=1, c=2
        let g = graph(vec![vec![0.0, 10.0, 1.0], vec![5.0, 0.0, 5.0], vec![5.0, 2.0, 0.0]]);
        let cl = metric_closure(&g);
        assert_eq!(cl.cost(0, 1), 3.0);
        assert_eq!(cl.next_hop(0, 1), 2);
        assert!(cl.satisfies_triangle_inequality());
        assert_eq!(metric_closure(&cl), cl);

        let tour = Tour::from_order(vec![0, 1, 0], &cl);
        let exp = expand_tour(&tour, &cl);
        assert_eq!(exp.order, vec![0, 2, 1, 0]);
        assert!((exp.cost - tour.cost).abs() < 1e-9);
        assert!((g.path_cost(&exp.order) - tour.cost).abs() < 1e-9);
    }

    #[test]
    fn closure_of_metric_graph_is_identity() {
        let g = graph(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]);
        let cl = metric_closure(&g);
        assert_eq!(cl, g);
        let t = Tour::from_order(vec![0, 1, 2, 0], &cl);
        assert_eq!(expand_tour(&t, &cl), t);
    }

    #[test]
    fn tour_validation() {
        let t = Tour { order: vec![0, 2, 0], cost: 0.0 };
        assert!(t.validate(3).is_err());
        let t = Tour { order: vec![0, 2, 1, 2, 0], cost: 0.0 };
        assert!(t.validate(3).is_ok());
    }
}
