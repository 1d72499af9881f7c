//! Transmission times: minimize the total transmission time subject to every
//! node receiving at least its demand.
//!
//! The problem `min cᵀt, A t ≥ b, t ≥ 0` has `A ≥ 0`, `b ≥ 0`, `c > 0`, so its dual
//! `max bᵀy, Aᵀy ≤ c, y ≥ 0` starts feasible at `y = 0`. The solver runs a dense
//! primal simplex on the dual and reads `t` from the reduced costs of the dual
//! slacks.

use crate::directions::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::model::NetworkInstance;

const PIVOT_EPS: f64 = 1e-11;
const OPT_EPS: f64 = 1e-11;
/// Degenerate pivots in a row before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 32;
const MAX_PIVOTS: usize = 200_000;

/// `min costᵀt  s.t.  a·t ≥ b, t ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    /// One row per constraint, one column per variable.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    /// Original Pos-Dir pair index of each variable.
    pub var_pairs: Vec<usize>,
    /// Number of Pos-Dir pairs before dropping empty rows.
    pub num_pairs: usize,
    /// Pairs whose coefficient row was all zero.
    pub dropped_pairs: Vec<usize>,
}

impl LpProblem {
    /// A plain problem where variable `i` is pair `i`.
    pub fn new(cost: Vec<f64>, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let k = cost.len();
        if a.len() != b.len() {
            return Err(Error::Shape { expected: a.len(), got: b.len() });
        }
        if let Some(row) = a.iter().find(|r| r.len() != k) {
            return Err(Error::Shape { expected: k, got: row.len() });
        }
        let bad = |v: &f64| !v.is_finite() || *v < 0.0;
        if cost.iter().any(bad) || b.iter().any(bad) || a.iter().flatten().any(bad) {
            return Err(Error::Validation("LP data must be finite and non-negative".into()));
        }
        Ok(LpProblem { cost, a, b, var_pairs: (0..k).collect(), num_pairs: k, dropped_pairs: Vec::new() })
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Time per original Pos-Dir pair (s); dropped pairs get 0.
    pub t: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
}

/// Builds the transmission-time problem: for every node with positive demand,
/// `Σ_i p0·C[i][j]·t[i] ≥ e_D[j]`.
pub fn build_time_lp(c: &CoefficientMatrix, instance: &NetworkInstance) -> Result<LpProblem> {
    let n = instance.nodes.len();
    if c.num_pairs() > 0 && c.num_nodes() != n {
        return Err(Error::Shape { expected: n, got: c.num_nodes() });
    }
    let (kept, dropped): (Vec<usize>, Vec<usize>) =
        (0..c.num_pairs()).partition(|&i| c.entries[i].iter().any(|&v| v > 0.0));
    let p0 = instance.dmc.p0;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for node in instance.nodes.iter().filter(|n| n.e_d > 0.0) {
        let row: Vec<f64> = kept.iter().map(|&i| p0 * c.entries[i][node.id]).collect();
        if row.iter().all(|&v| v == 0.0) {
            return Err(Error::Uncoverable { node: node.id, demand: node.e_d });
        }
        a.push(row);
        b.push(node.e_d);
    }
    Ok(LpProblem {
        cost: vec![1.0; kept.len()],
        a,
        b,
        var_pairs: kept,
        num_pairs: c.num_pairs(),
        dropped_pairs: dropped,
    })
}

struct Tableau {
    /// rows × (m + k + 1); last column is the right-hand side
    rows: Vec<Vec<f64>>,
    z: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let width = self.z.len();
        let p = self.rows[r][col];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[col] = 0.0;
            }
        }
        let f = self.z[col];
        if f != 0.0 {
            for j in 0..width {
                self.z[j] -= f * pivot_row[j];
            }
            self.z[col] = 0.0;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }
}

/// Solves the problem with a dense simplex (Dantzig pricing, Bland's rule
/// after a run of degenerate pivots). Deterministic.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    let k = p.num_vars();
    let m = p.b.len();
    let zero = || LpSolution { t: vec![0.0; p.num_pairs], objective: 0.0, status: LpStatus::Optimal };
    if m == 0 || p.b.iter().all(|&v| v == 0.0) {
        return Ok(zero());
    }
    if k == 0 {
        return Ok(LpSolution { status: LpStatus::Infeasible, ..zero() });
    }

    let width = m + k + 1;
    let rhs = width - 1;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row = vec![0.0; width];
            for j in 0..m {
                row[j] = p.a[j][i];
            }
            row[m + i] = 1.0;
            row[rhs] = p.cost[i];
            row
        })
        .collect();
    let mut z = vec![0.0; width];
    for j in 0..m {
        z[j] = -p.b[j];
    }
    let mut tab = Tableau { rows, z, basis: (m..m + k).collect() };

    let mut streak = 0;
    for _ in 0..MAX_PIVOTS {
        let entering = if streak >= DEGENERATE_STREAK {
            (0..rhs).find(|&j| tab.z[j] < -OPT_EPS)
        } else {
            (0..rhs)
                .filter(|&j| tab.z[j] < -OPT_EPS)
                .min_by(|&a, &b| tab.z[a].total_cmp(&tab.z[b]).then(a.cmp(&b)))
        };
        let Some(col) = entering else {
            let t_active: Vec<f64> = (0..k).map(|i| tab.z[m + i].max(0.0)).collect();
            let mut t = vec![0.0; p.num_pairs];
            for (v, &pair) in p.var_pairs.iter().enumerate() {
                t[pair] = t_active[v];
            }
            let objective = t_active.iter().zip(&p.cost).map(|(t, c)| t * c).sum();
            return Ok(LpSolution { t, objective, status: LpStatus::Optimal });
        };

        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in tab.rows.iter().enumerate() {
            let a = row[col];
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = row[rhs] / a;
            leave = match leave {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * br.abs().max(1.0);
                    if ratio < br && !tie || tie && tab.basis[i] < tab.basis[bi] {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        // dual unbounded means the primal is infeasible
        let Some((r, ratio)) = leave else {
            return Ok(LpSolution { status: LpStatus::Infeasible, ..zero() });
        };
        streak = if ratio.abs() <= 1e-14 { streak + 1 } else { 0 };
        tab.pivot(r, col);
    }
    Err(Error::Internal("simplex pivot limit reached".into()))
}

/// Largest shortfall `b - a·t` over all constraints (≤ 0 when feasible).
pub fn max_violation(p: &LpProblem, t_vars: &[f64]) -> f64 {
    p.a.iter()
        .zip(&p.b)
        .map(|(row, &b)| b - row.iter().zip(t_vars).map(|(a, t)| a * t).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Restricts a per-pair time vector to the problem's variables.
pub fn vars_of(p: &LpProblem, t: &[f64]) -> Vec<f64> {
    p.var_pairs.iter().map(|&i| t[i]).collect()
}
