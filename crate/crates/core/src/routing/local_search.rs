use super::{DirectedCostGraph, Tour};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Non-improving restarts before [`atsp_lk`] gives up.
pub const DEFAULT_BUDGET: usize = 20;

const IMPROVE_EPS: f64 = 1e-9;

/// Nearest-neighbour tour from vertex 0; ties go to the lower index.
pub fn atsp_greedy(g: &DirectedCostGraph) -> Tour {
    Tour::from_order(close(greedy_cycle(g)), g)
}

fn greedy_cycle(g: &DirectedCostGraph) -> Vec<usize> {
    let n = g.len();
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut at = 0;
    if n > 0 {
        order.push(0);
        used[0] = true;
    }
    for _ in 1..n {
        let mut best = usize::MAX;
        for j in 0..n {
            if !used[j] && (best == usize::MAX || g.cost(at, j) < g.cost(at, best)) {
                best = j;
            }
        }
        used[best] = true;
        order.push(best);
        at = best;
    }
    order
}

fn close(mut cycle: Vec<usize>) -> Vec<usize> {
    if cycle.is_empty() {
        cycle.push(0);
    }
    cycle.push(0);
    cycle
}

fn cycle_cost(g: &DirectedCostGraph, o: &[usize]) -> f64 {
    let n = o.len();
    (0..n).map(|p| g.cost(o[p], o[(p + 1) % n])).sum()
}

/// Gain of exchanging the adjacent segments `o[i+1..=j]` and `o[j+1..=k]`.
#[inline]
fn swap_delta(g: &DirectedCostGraph, o: &[usize], i: usize, j: usize, k: usize) -> f64 {
    let n = o.len();
    let after_k = o[(k + 1) % n];
    g.cost(o[i], o[j + 1]) + g.cost(o[k], o[i + 1]) + g.cost(o[j], after_k)
        - g.cost(o[i], o[i + 1])
        - g.cost(o[j], o[j + 1])
        - g.cost(o[k], after_k)
}

fn apply_swap(o: &mut [usize], i: usize, j: usize, k: usize) {
    o[i + 1..=k].rotate_left(j - i);
}

/// Segment exchange where at least one segment has length <= 3 (Or-opt).
fn or_opt_pass(g: &DirectedCostGraph, o: &mut [usize]) -> bool {
    let n = o.len();
    for i in 0..n {
        for j in i + 1..n {
            let k_hi = if j - i <= 3 { n - 1 } else { (j + 3).min(n - 1) };
            for k in j + 1..=k_hi {
                if swap_delta(g, o, i, j, k) < -IMPROVE_EPS {
                    apply_swap(o, i, j, k);
                    return true;
                }
            }
        }
    }
    false
}

/// Unrestricted orientation-preserving 3-opt exchange.
fn three_opt_pass(g: &DirectedCostGraph, o: &mut [usize]) -> bool {
    let n = o.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if swap_delta(g, o, i, j, k) < -IMPROVE_EPS {
                    apply_swap(o, i, j, k);
                    return true;
                }
            }
        }
    }
    false
}

/// Segment reversal; only valid on symmetric costs.
fn two_opt_pass(g: &DirectedCostGraph, o: &mut [usize]) -> bool {
    let n = o.len();
    for i in 0..n {
        for j in i + 2..n {
            let after_j = o[(j + 1) % n];
            if after_j == o[i] {
                continue;
            }
            let d = g.cost(o[i], o[j]) + g.cost(o[i + 1], after_j) - g.cost(o[i], o[i + 1]) - g.cost(o[j], after_j);
            if d < -IMPROVE_EPS {
                o[i + 1..=j].reverse();
                return true;
            }
        }
    }
    false
}

fn descend(g: &DirectedCostGraph, o: &mut [usize], symmetric: bool) {
    loop {
        if or_opt_pass(g, o) || (symmetric && two_opt_pass(g, o)) || three_opt_pass(g, o) {
            continue;
        }
        break;
    }
}

/// Random orientation-preserving segment permutation that a single
/// adjacent-segment exchange cannot undo.
fn kick(o: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = o.len();
    let cuts = if n >= 5 { 4 } else { 3 };
    let mut c: Vec<usize> = Vec::with_capacity(cuts);
    while c.len() < cuts {
        let p = rng.gen_range(1..n);
        if !c.contains(&p) {
            c.push(p);
        }
    }
    c.sort_unstable();
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&o[..c[0]]);
    if cuts == 4 {
        // A B C D E -> A D C B E
        out.extend_from_slice(&o[c[2]..c[3]]);
        out.extend_from_slice(&o[c[1]..c[2]]);
        out.extend_from_slice(&o[c[0]..c[1]]);
        out.extend_from_slice(&o[c[3]..]);
    } else {
        // A B C D -> A C B D
        out.extend_from_slice(&o[c[1]..c[2]]);
        out.extend_from_slice(&o[c[0]..c[1]]);
        out.extend_from_slice(&o[c[2]..]);
    }
    out
}

fn iterated_search(g: &DirectedCostGraph, seed: u64, budget: usize, symmetric: bool) -> Tour {
    let mut best = greedy_cycle(g);
    if best.len() <= 2 {
        return Tour::from_order(close(best), g);
    }
    descend(g, &mut best, symmetric);
    let mut best_cost = cycle_cost(g, &best);
    if best.len() >= 4 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fails = 0;
        while fails < budget {
            let mut cand = kick(&best, &mut rng);
            descend(g, &mut cand, symmetric);
            let c = cycle_cost(g, &cand);
            if c < best_cost - IMPROVE_EPS {
                best = cand;
                best_cost = c;
                fails = 0;
            } else {
                fails += 1;
            }
        }
    }
    Tour::from_order(close(best), g)
}

/// Directed local search: greedy start, Or-opt and 3-opt segment exchanges,
/// then seeded perturbation restarts until `budget` consecutive restarts fail
/// to improve. Deterministic for a given seed.
pub fn atsp_lk(g: &DirectedCostGraph, seed: u64, budget: usize) -> Tour {
    iterated_search(g, seed, budget, false)
}

/// Same search with 2-opt reversals added; the graph must be symmetric.
pub fn tsp_lk(g: &DirectedCostGraph, seed: u64, budget: usize) -> Result<Tour> {
    let n = g.len();
    for i in 0..n {
        for j in i + 1..n {
            if g.cost(i, j) != g.cost(j, i) {
                return Err(Error::Validation(format!("cost[{i}][{j}] != cost[{j}][{i}]")));
            }
        }
    }
    Ok(iterated_search(g, seed, budget, true))
}
