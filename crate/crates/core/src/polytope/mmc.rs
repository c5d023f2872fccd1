//! Maximum mean cycle by Karp's dynamic program, exact over integer weights.
//!
//! Each edge weighs `weights[digit]`; the mean of a cycle is therefore the
//! dot product of the weight vector with the cycle's digit frequencies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::polytope::graph::{DigitEdge, DigitGraph};
use crate::rational::Rational;

/// An optimal cycle and its mean weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCycle {
    pub value: Rational,
    /// Digits read along the cycle.
    pub digits: Vec<u8>,
}

/// Mean as a reduced fraction `num/den`, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        let g = num.gcd(&den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    fn cmp(&self, other: &Frac) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Maximum cycle mean of `g` in a rational direction of ℝ³.
pub fn max_mean_cycle(g: &DigitGraph, direction: &[Rational; 3]) -> Result<MeanCycle> {
    let lcm = direction
        .iter()
        .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let scaled: Vec<BigInt> = direction.iter().map(|r| (r * &lcm).to_integer()).collect();
    let weights = [0, 1, 2].map(|i| scaled[i].to_i64());
    let [Some(a), Some(b), Some(c)] = weights else {
        return Err(Error::Domain(
            "direction too large for integer weights".into(),
        ));
    };
    let best = max_mean_cycle_int(g, [a, b, c])?;
    Ok(MeanCycle {
        value: best.value / Rational::from_integer(lcm),
        digits: best.digits,
    })
}

/// Maximum cycle mean for integer digit weights.
pub fn max_mean_cycle_int(g: &DigitGraph, weights: [i64; 3]) -> Result<MeanCycle> {
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(g.node_count(), g.edges().len());
    let ids: Vec<_> = (0..g.node_count()).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(ids[e.from], ids[e.to], ());
    }
    let mut comp_of = vec![usize::MAX; g.node_count()];
    let sccs = tarjan_scc(&pg);
    for (ci, comp) in sccs.iter().enumerate() {
        for n in comp {
            comp_of[n.index()] = ci;
        }
    }
    let mut per_comp: Vec<Vec<DigitEdge>> = vec![Vec::new(); sccs.len()];
    for e in g.edges() {
        if comp_of[e.from] == comp_of[e.to] {
            per_comp[comp_of[e.from]].push(*e);
        }
    }

    let mut best: Option<(Frac, Vec<u8>)> = None;
    for (ci, comp) in sccs.iter().enumerate() {
        if per_comp[ci].is_empty() {
            continue;
        }
        let mut nodes: Vec<usize> = comp.iter().map(|n| n.index()).collect();
        nodes.sort_unstable();
        let local = |v: usize| nodes.binary_search(&v).expect("node in component");
        let edges: Vec<(usize, usize, i128, u8)> = per_comp[ci]
            .iter()
            .map(|e| {
                (
                    local(e.from),
                    local(e.to),
                    weights[e.digit as usize] as i128,
                    e.digit,
                )
            })
            .collect();
        let mean = karp(nodes.len(), &edges);
        if best
            .as_ref()
            .is_some_and(|(b, _)| mean.cmp(b) != std::cmp::Ordering::Greater)
        {
            continue;
        }
        let cycle = tight_cycle(nodes.len(), &edges, mean)?;
        best = Some((mean, cycle));
    }
    let (mean, digits) = best.ok_or_else(|| Error::Domain("graph has no cycle".into()))?;
    Ok(MeanCycle {
        value: Rational::new(BigInt::from(mean.num), BigInt::from(mean.den)),
        digits,
    })
}

/// Karp's theorem on a strongly connected component.
fn karp(n: usize, edges: &[(usize, usize, i128, u8)]) -> Frac {
    let mut table: Vec<Vec<Option<i128>>> = vec![vec![None; n]; n + 1];
    table[0][0] = Some(0);
    for k in 1..=n {
        let (prev, cur) = table.split_at_mut(k);
        let (prev, cur) = (&prev[k - 1], &mut cur[0]);
        for &(u, v, w, _) in edges {
            if let Some(du) = prev[u] {
                let cand = du + w;
                if cur[v].is_none_or(|dv| cand > dv) {
                    cur[v] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Frac> = None;
    for (v, last) in table[n].iter().enumerate() {
        let Some(dn) = *last else { continue };
        let worst = (0..n)
            .filter_map(|k| table[k][v].map(|dk| Frac::new(dn - dk, (n - k) as i128)))
            .min_by(|a, b| a.cmp(b));
        if let Some(w) = worst {
            if best.is_none_or(|b| w.cmp(&b) == std::cmp::Ordering::Greater) {
                best = Some(w);
            }
        }
    }
    best.expect("strongly connected component with an edge has a cycle")
}

/// Finds a cycle of mean exactly `mean`: after shifting weights by the mean
/// every cycle is nonpositive, and a cycle through edges that are tight for
/// longest-path potentials has weight zero.
fn tight_cycle(n: usize, edges: &[(usize, usize, i128, u8)], mean: Frac) -> Result<Vec<u8>> {
    let shifted: Vec<i128> = edges.iter().map(|e| mean.den * e.2 - mean.num).collect();
    let mut pot = vec![0i128; n];
    for _ in 0..=n {
        let mut changed = false;
        for (i, &(u, v, _, _)) in edges.iter().enumerate() {
            let cand = pot[u] + shifted[i];
            if cand > pot[v] {
                pot[v] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut adj: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    for (i, &(u, v, _, d)) in edges.iter().enumerate() {
        if pot[u] + shifted[i] == pot[v] {
            adj[u].push((v, d));
        }
    }
    for a in adj.iter_mut() {
        a.sort_by_key(|&(v, d)| (d, v));
    }

    // Iterative DFS; a back edge closes a cycle.
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut path_digits: Vec<u8> = Vec::new();
        color[root] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < adj[u].len() {
                let (v, d) = adj[u][*next];
                *next += 1;
                match color[v] {
                    0 => {
                        color[v] = 1;
                        path_digits.push(d);
                        stack.push((v, 0));
                    }
                    1 => {
                        let pos = stack
                            .iter()
                            .position(|&(x, _)| x == v)
                            .expect("gray node on stack");
                        let mut cycle = path_digits[pos..].to_vec();
                        cycle.push(d);
                        return Ok(cycle);
                    }
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
                path_digits.pop();
            }
        }
    }
    Err(Error::Internal("no tight cycle at the optimal mean".into()))
}

/// Digit counts of a cycle, for callers that need the frequency vector.
pub fn cycle_counts(digits: &[u8]) -> [u64; 3] {
    let mut c = [0u64; 3];
    for &d in digits {
        c[d as usize] += 1;
    }
    c
}
