use super::{DirectedCostGraph, Tour};
use crate::error::{Error, Result};

/// Largest vertex count accepted by [`held_karp`].
pub const HELD_KARP_MAX: usize = 14;

/// Exact minimum-cost Hamiltonian cycle through vertex 0 (subset DP).
pub fn held_karp(g: &DirectedCostGraph) -> Result<Tour> {
    let n = g.len();
    if n > HELD_KARP_MAX {
        return Err(Error::Size { n, max: HELD_KARP_MAX });
    }
    if n <= 1 {
        return Ok(Tour { order: vec![0, 0], cost: 0.0 });
    }
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![f64::INFINITY; (1 << m) * m];
    let mut parent = vec![u8::MAX; (1 << m) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = g.cost(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = dp[mask * m + j];
            if !cur.is_finite() {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = cur + g.cost(j + 1, k + 1);
                if cand < dp[next * m + k] {
                    dp[next * m + k] = cand;
                    parent[next * m + k] = j as u8;
                }
            }
        }
    }
    let (mut last, mut best) = (0, f64::INFINITY);
    for j in 0..m {
        let c = dp[full * m + j] + g.cost(j + 1, 0);
        if c < best {
            best = c;
            last = j;
        }
    }
    let mut rev = Vec::with_capacity(n + 1);
    let mut mask = full;
    let mut j = last;
    loop {
        rev.push(j + 1);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    let mut order = vec![0];
    order.extend(rev.into_iter().rev());
    order.push(0);
    Ok(Tour::from_order(order, g))
}
