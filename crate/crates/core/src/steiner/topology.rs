//! Enumeration of Steiner tree topologies: trees on the labeled terminals
//! plus unlabeled internal nodes of degree at least three.
//!
//! Trees are generated by inserting one label at a time. Each tree on
//! k+1 labels arises from exactly one tree on k labels by exactly one of
//! four productions (attach a new leaf to a node, attach it through a new
//! internal node subdividing an edge, place the label on an edge
//! midpoint, or place it on an existing internal node), so enumeration is
//! complete and duplicate-free without isomorphism testing.

use crate::error::{Error, Result};

pub const MAX_TERMINALS: usize = 7;

/// A node of a topology: a labeled terminal or an unlabeled internal
/// (Steiner) node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopNode {
    Terminal(usize),
    Steiner(usize),
}

/// An unweighted tree on the terminals plus Steiner nodes, canonically
/// numbered: terminals carry their label index, Steiner nodes are
/// numbered by first visit of a traversal from terminal 0, and the edge
/// list is sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Topology {
    n_terminals: usize,
    n_steiner: usize,
    edges: Vec<(TopNode, TopNode)>,
}

impl Topology {
    pub fn n_terminals(&self) -> usize {
        self.n_terminals
    }

    pub fn n_steiner(&self) -> usize {
        self.n_steiner
    }

    pub fn n_nodes(&self) -> usize {
        self.n_terminals + self.n_steiner
    }

    pub fn edges(&self) -> &[(TopNode, TopNode)] {
        &self.edges
    }

    /// Dense node id: terminals first, then Steiner nodes.
    pub fn node_id(&self, node: TopNode) -> usize {
        match node {
            TopNode::Terminal(i) => i,
            TopNode::Steiner(i) => self.n_terminals + i,
        }
    }

    /// For each edge, the set of terminals on its first-endpoint side,
    /// as a bitmask over terminal indices.
    pub fn edge_sides(&self) -> Vec<u32> {
        let k = self.n_nodes();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
        for (e, (a, b)) in self.edges.iter().enumerate() {
            let (ai, bi) = (self.node_id(*a), self.node_id(*b));
            adj[ai].push((bi, e));
            adj[bi].push((ai, e));
        }
        self.edges
            .iter()
            .enumerate()
            .map(|(e, (a, _))| {
                let start = self.node_id(*a);
                let mut seen = vec![false; k];
                seen[start] = true;
                let mut stack = vec![start];
                let mut mask = 0u32;
                while let Some(u) = stack.pop() {
                    if u < self.n_terminals {
                        mask |= 1 << u;
                    }
                    for &(v, through) in &adj[u] {
                        if through != e && !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                mask
            })
            .collect()
    }
}

#[derive(Clone)]
struct Draft {
    // kind[i]: Some(label) for a terminal, None for a Steiner node.
    kinds: Vec<Option<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Draft {
    fn steiner_count(&self) -> usize {
        self.kinds.iter().filter(|k| k.is_none()).count()
    }

    fn canonical(&self, n_terminals: usize) -> Topology {
        let k = self.kinds.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (a, b) in &self.edges {
            adj[*a].push(*b);
            adj[*b].push(*a);
        }
        // Number Steiner nodes by first visit order of a DFS from label 0,
        // exploring neighbors in draft order.
        let start = self
            .kinds
            .iter()
            .position(|kind| *kind == Some(0))
            .expect("label 0 exists");
        let mut steiner_rank: Vec<Option<usize>> = vec![None; k];
        let mut next_rank = 0usize;
        let mut seen = vec![false; k];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            if self.kinds[u].is_none() {
                steiner_rank[u] = Some(next_rank);
                next_rank += 1;
            }
            // Reverse keeps draft order on the stack.
            for &v in adj[u].iter().rev() {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        let node = |i: usize| match self.kinds[i] {
            Some(label) => TopNode::Terminal(label),
            None => TopNode::Steiner(steiner_rank[i].expect("visited")),
        };
        let mut edges: Vec<(TopNode, TopNode)> = self
            .edges
            .iter()
            .map(|(a, b)| {
                let (x, y) = (node(*a), node(*b));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        edges.sort();
        Topology {
            n_terminals,
            n_steiner: next_rank,
            edges,
        }
    }
}

/// All tree topologies on the n labeled terminals with at most
/// `max_steiner` unlabeled internal nodes, every one of degree >= 3.
/// Deterministic order; includes the spanning trees on the terminals
/// alone. `max_steiner` above n-2 is vacuous (the degree bound forbids
/// more) and is clamped.
pub fn enumerate_topologies(n: usize, max_steiner: usize) -> Result<Vec<Topology>> {
    if n == 0 {
        return Err(Error::Input("no terminals".into()));
    }
    if n > MAX_TERMINALS {
        return Err(Error::SizeCap {
            n,
            cap: MAX_TERMINALS,
        });
    }
    let max_steiner = max_steiner.min(n.saturating_sub(2));
    let mut current = vec![Draft {
        kinds: vec![Some(0)],
        edges: vec![],
    }];
    for label in 1..n {
        let remaining_after = n - label - 1;
        let mut next = Vec::new();
        for draft in &current {
            // (i) new leaf attached to an existing node.
            for v in 0..draft.kinds.len() {
                let mut d = draft.clone();
                d.kinds.push(Some(label));
                d.edges.push((v, d.kinds.len() - 1));
                next.push(d);
            }
            // (ii) new leaf through a fresh internal node on an edge.
            for e in 0..draft.edges.len() {
                let mut d = draft.clone();
                let (a, b) = d.edges[e];
                let s = d.kinds.len();
                d.kinds.push(None);
                let t = d.kinds.len();
                d.kinds.push(Some(label));
                d.edges[e] = (a, s);
                d.edges.push((s, b));
                d.edges.push((s, t));
                next.push(d);
            }
            // (iii) the label subdivides an edge.
            for e in 0..draft.edges.len() {
                let mut d = draft.clone();
                let (a, b) = d.edges[e];
                let t = d.kinds.len();
                d.kinds.push(Some(label));
                d.edges[e] = (a, t);
                d.edges.push((t, b));
                next.push(d);
            }
            // (iv) the label lands on an existing internal node.
            for v in 0..draft.kinds.len() {
                if draft.kinds[v].is_none() {
                    let mut d = draft.clone();
                    d.kinds[v] = Some(label);
                    next.push(d);
                }
            }
        }
        // Labels still to come can each absorb one internal node via (iv).
        next.retain(|d| d.steiner_count() <= max_steiner + remaining_after);
        current = next;
    }
    Ok(current
        .iter()
        .filter(|d| d.steiner_count() <= max_steiner)
        .map(|d| d.canonical(n))
        .collect())
}
