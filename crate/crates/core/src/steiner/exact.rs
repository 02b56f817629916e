//! Exact metric Steiner trees by Dreyfus-Wagner dynamic programming over
//! (terminal subset, root node) states on the shortest-path closure.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rat::Rat;

pub const MAX_GRAPH_NODES: usize = 64;
pub const MAX_DW_TERMINALS: usize = 10;

/// An undirected graph with positive rational edge weights.
#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(usize, usize, Rat)>,
}

impl Graph {
    pub fn new(names: Vec<String>, edges: Vec<(String, String, Rat)>) -> Result<Self> {
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Input(format!("duplicate node `{a}`")));
            }
        }
        if names.is_empty() {
            return Err(Error::Input("graph has no nodes".into()));
        }
        if names.len() > MAX_GRAPH_NODES {
            return Err(Error::SizeCap {
                n: names.len(),
                cap: MAX_GRAPH_NODES,
            });
        }
        let index = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownElement(name.to_string()))
        };
        let mut resolved = Vec::with_capacity(edges.len());
        for (u, v, w) in &edges {
            if !w.is_positive() {
                return Err(Error::Input(format!(
                    "edge {u}-{v} must have positive weight"
                )));
            }
            let (ui, vi) = (index(u)?, index(v)?);
            if ui == vi {
                return Err(Error::Input(format!("self-loop at `{u}`")));
            }
            resolved.push((ui, vi, w.clone()));
        }
        Ok(Graph {
            names,
            edges: resolved,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[(usize, usize, Rat)] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<&Rat> {
        self.edges
            .iter()
            .filter(|(u, v, _)| (*u == a && *v == b) || (*u == b && *v == a))
            .map(|(_, _, w)| w)
            .min()
    }
}

/// All-pairs shortest paths with a deterministic intermediate-node record
/// for path expansion (strict improvements only, so ties resolve to the
/// smallest intermediate in loop order).
pub struct ShortestPaths {
    pub dist: Vec<Vec<Option<Rat>>>,
    through: Vec<Vec<Option<usize>>>,
}

impl ShortestPaths {
    pub fn of_graph(g: &Graph) -> Result<Self> {
        let n = g.node_count();
        let mut dist: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
        let mut through: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = Some(Rat::zero());
        }
        for (u, v, w) in g.edges() {
            let better = dist[*u][*v].as_ref().map_or(true, |cur| w < cur);
            if better {
                dist[*u][*v] = Some(w.clone());
                dist[*v][*u] = Some(w.clone());
            }
        }
        for k in 0..n {
            for i in 0..n {
                let Some(dik) = dist[i][k].clone() else {
                    continue;
                };
                for j in 0..n {
                    let Some(dkj) = dist[k][j].clone() else {
                        continue;
                    };
                    let cand = &dik + &dkj;
                    if dist[i][j].as_ref().map_or(true, |cur| cand < *cur) {
                        dist[i][j] = Some(cand);
                        through[i][j] = Some(k);
                    }
                }
            }
        }
        if dist.iter().flatten().any(|d| d.is_none()) {
            return Err(Error::Disconnected);
        }
        Ok(ShortestPaths { dist, through })
    }

    /// Exact metric matrix as a complete "graph" (direct edges only).
    pub fn of_matrix(matrix: &[Vec<Rat>]) -> Self {
        let n = matrix.len();
        let dist = matrix
            .iter()
            .map(|row| row.iter().cloned().map(Some).collect())
            .collect();
        ShortestPaths {
            dist,
            through: vec![vec![None; n]; n],
        }
    }

    pub fn d(&self, i: usize, j: usize) -> &Rat {
        self.dist[i][j].as_ref().expect("connected")
    }

    /// Expands the recorded shortest path into direct edges.
    pub fn expand(&self, i: usize, j: usize, out: &mut BTreeSet<(usize, usize)>) {
        if i == j {
            return;
        }
        match self.through[i][j] {
            Some(k) => {
                self.expand(i, k, out);
                self.expand(k, j, out);
            }
            None => {
                out.insert((i.min(j), i.max(j)));
            }
        }
    }
}

/// Dreyfus-Wagner tables: for every subset T of the terminal list and
/// node v, the minimum length of a tree spanning T plus v.
pub struct DwTables {
    terminal_nodes: Vec<usize>,
    cost: Vec<Vec<Rat>>,
    // Recovery data: for |T| >= 2, the (split-node, first-part) choice.
    choice: Vec<Vec<Option<(usize, u32)>>>,
}

impl DwTables {
    pub fn build(paths: &ShortestPaths, terminal_nodes: &[usize]) -> Result<Self> {
        let tn = terminal_nodes.len();
        if tn > MAX_DW_TERMINALS {
            return Err(Error::SizeCap {
                n: tn,
                cap: MAX_DW_TERMINALS,
            });
        }
        let vn = paths.dist.len();
        let tcount = 1usize << tn;
        let mut cost: Vec<Vec<Rat>> = vec![vec![Rat::zero(); vn]; tcount];
        let mut choice: Vec<Vec<Option<(usize, u32)>>> = vec![vec![None; vn]; tcount];
        for t in 0..tn {
            for v in 0..vn {
                cost[1 << t][v] = paths.d(terminal_nodes[t], v).clone();
            }
        }
        for t_set in 1..tcount as u32 {
            if t_set.count_ones() < 2 {
                continue;
            }
            let low = t_set.trailing_zeros();
            let others = t_set & !(1 << low);
            // Cheapest split of t_set at each node u.
            let mut merged: Vec<Option<(Rat, u32)>> = vec![None; vn];
            let mut part = (others.wrapping_sub(1)) & others; // proper submasks of others
            loop {
                let first = part | 1 << low;
                let second = t_set & !first;
                debug_assert!(second != 0);
                for u in 0..vn {
                    let cand = &cost[first as usize][u] + &cost[second as usize][u];
                    let better = merged[u].as_ref().map_or(true, |(cur, _)| cand < *cur);
                    if better {
                        merged[u] = Some((cand, first));
                    }
                }
                if part == 0 {
                    break;
                }
                part = (part - 1) & others;
            }
            // Closure: attach the split point to v by a shortest path.
            for v in 0..vn {
                let mut best: Option<(Rat, usize)> = None;
                for u in 0..vn {
                    let (m, _) = merged[u].as_ref().expect("split exists");
                    let cand = m + paths.d(u, v);
                    if best.as_ref().map_or(true, |(cur, _)| cand < *cur) {
                        best = Some((cand, u));
                    }
                }
                let (val, u) = best.expect("nonempty");
                cost[t_set as usize][v] = val;
                choice[t_set as usize][v] = Some((u, merged[u].as_ref().unwrap().1));
            }
        }
        Ok(DwTables {
            terminal_nodes: terminal_nodes.to_vec(),
            cost,
            choice,
        })
    }

    /// Minimum Steiner length for the terminal subset given as a bitmask
    /// over the terminal list.
    pub fn length(&self, subset: u32) -> Rat {
        match subset.count_ones() {
            0 | 1 => Rat::zero(),
            _ => {
                let low = subset.trailing_zeros();
                let rest = subset & !(1 << low);
                self.cost[rest as usize][self.terminal_nodes[low as usize]].clone()
            }
        }
    }

    /// Reconstructs one optimal tree (as direct edges) for the subset.
    pub fn tree(&self, paths: &ShortestPaths, subset: u32) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        if subset.count_ones() >= 2 {
            let low = subset.trailing_zeros();
            let rest = subset & !(1 << low);
            self.recover(paths, rest, self.terminal_nodes[low as usize], &mut out);
        }
        out
    }

    fn recover(
        &self,
        paths: &ShortestPaths,
        t_set: u32,
        v: usize,
        out: &mut BTreeSet<(usize, usize)>,
    ) {
        if t_set.count_ones() == 1 {
            let t = t_set.trailing_zeros() as usize;
            paths.expand(self.terminal_nodes[t], v, out);
            return;
        }
        let (u, first) = self.choice[t_set as usize][v].expect("recorded");
        paths.expand(u, v, out);
        self.recover(paths, first, u, out);
        self.recover(paths, t_set & !first, u, out);
    }
}
