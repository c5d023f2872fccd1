//! Finite digit-labelled graphs presenting (outer models of) β-shifts.

use crate::error::{domain, Result};
use crate::word::{is_maximal, longest_border, DigitWord, Maximality, TOP_DIGIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitEdge {
    pub from: usize,
    pub to: usize,
    pub digit: u8,
}

/// A directed multigraph whose edges carry digits; cycles read off periodic
/// words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DigitGraph {
    nodes: usize,
    edges: Vec<DigitEdge>,
}

impl DigitGraph {
    pub fn new(nodes: usize, mut edges: Vec<DigitEdge>) -> Self {
        edges.sort_by_key(|e| (e.from, e.digit, e.to));
        Self { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[DigitEdge] {
        &self.edges
    }

    /// Outgoing edge lists, digit-ascending.
    pub fn adjacency(&self) -> Vec<Vec<DigitEdge>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for e in &self.edges {
            adj[e.from].push(*e);
        }
        adj
    }
}

fn windows_le(len: usize, bound: &[u8]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; len];
    loop {
        if cur.as_slice() <= bound {
            out.push(cur.clone());
        }
        // Odometer increment, last position fastest, so `out` stays sorted.
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < TOP_DIGIT {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Order-`n` window model: nodes are the admissible (n−1)-windows, and
/// each n-window ≤ `u[..n]` is an edge from its first n−1 symbols to its
/// last n−1 symbols, labelled by its first digit.
#[derive(Clone, Debug)]
pub struct SftGraph {
    order: usize,
    windows: Vec<Vec<u8>>,
    graph: DigitGraph,
}

impl SftGraph {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn windows(&self) -> &[Vec<u8>] {
        &self.windows
    }

    pub fn graph(&self) -> &DigitGraph {
        &self.graph
    }
}

/// Builds the full order-`n` window graph for the reference prefix `u`.
pub fn build_sft(u: &DigitWord, n: usize) -> Result<SftGraph> {
    if n < 2 {
        return domain("window order must be at least 2");
    }
    let prefix = u.prefix(n);
    if prefix.len() < n {
        return domain(format!("reference word {u} is shorter than the order {n}"));
    }
    if let Maximality::No(r) = is_maximal(&u.truncate(n)) {
        return domain(format!("{u} is not a prefix of a maximal word (shift {r})"));
    }
    let windows = windows_le(n - 1, &prefix[..n - 1]);
    let index = |w: &[u8]| windows.binary_search_by(|x| x.as_slice().cmp(w)).ok();
    let mut edges = Vec::new();
    for (from, w) in windows.iter().enumerate() {
        for c in 0..=TOP_DIGIT {
            let mut full = w.clone();
            full.push(c);
            if full.as_slice() > prefix.as_slice() {
                continue;
            }
            // A window whose tail exceeds u[..n-1] cannot be continued.
            if let Some(to) = index(&full[1..]) {
                edges.push(DigitEdge {
                    from,
                    to,
                    digit: full[0],
                });
            }
        }
    }
    let graph = DigitGraph::new(windows.len(), edges);
    Ok(SftGraph {
        order: n,
        windows,
        graph,
    })
}

/// Compact presentation of a β-shift by tight-match states: state `k` means
/// the most recent `k` symbols equal the first `k` symbols of the reference
/// word, and no longer suffix does.
#[derive(Clone, Debug)]
pub struct BetaAutomaton {
    exact: bool,
    order: usize,
    graph: DigitGraph,
}

impl BetaAutomaton {
    /// Exact presentation of B(w) for an eventually periodic maximal `w`.
    pub fn exact(w: &DigitWord) -> Result<Self> {
        if w.is_finite() {
            return domain("exact automaton needs an eventually periodic word");
        }
        if is_maximal(w) != Maximality::Yes {
            return domain(format!("{w} is not maximal"));
        }
        let m = w.preperiod().len();
        let states = w.cycle_bound();
        let mut edges = Vec::new();
        for k in 0..states {
            let top = w.digit(k).expect("infinite word");
            for c in 0..top {
                edges.push(DigitEdge {
                    from: k,
                    to: 0,
                    digit: c,
                });
            }
            let to = if k + 1 == states { m } else { k + 1 };
            edges.push(DigitEdge {
                from: k,
                to,
                digit: top,
            });
        }
        Ok(Self {
            exact: true,
            order: states,
            graph: DigitGraph::new(states, edges),
        })
    }

    /// Outer model from the first `n` symbols of `w`: a full match of length
    /// `n` is forgotten down to its longest border. Accepts the same
    /// sequences as the order-`n` window model.
    pub fn window(w: &DigitWord, n: usize) -> Result<Self> {
        if n < 1 {
            return domain("automaton order must be positive");
        }
        let u = w.prefix(n);
        if u.len() < n {
            return domain(format!("reference word {w} is shorter than the order {n}"));
        }
        if let Maximality::No(r) = is_maximal(&w.truncate(n)) {
            return domain(format!("{w} is not a prefix of a maximal word (shift {r})"));
        }
        let border = longest_border(&u);
        let mut edges = Vec::new();
        for (k, &top) in u.iter().enumerate() {
            for c in 0..top {
                edges.push(DigitEdge {
                    from: k,
                    to: 0,
                    digit: c,
                });
            }
            let to = if k + 1 == n { border } else { k + 1 };
            edges.push(DigitEdge {
                from: k,
                to,
                digit: top,
            });
        }
        Ok(Self {
            exact: false,
            order: n,
            graph: DigitGraph::new(n, edges),
        })
    }

    /// True when the automaton presents B(w) itself rather than an outer model.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn graph(&self) -> &DigitGraph {
        &self.graph
    }
}
