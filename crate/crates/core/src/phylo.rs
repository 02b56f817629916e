//! Finite edge-weighted trees as desk-scale real trees: subtree-length
//! diversities, the four-point condition, and exact reconstruction of a
//! tree from a diversity.

use std::collections::BTreeMap;

use crate::diversity::{FiniteDiversity, FiniteMetric};
use crate::error::{Error, Result};
use crate::ground::{GroundSet, SubsetMask};
use crate::rat::Rat;

/// A connected acyclic graph with positive rational edge weights.
/// Zero-weight edges are contracted on construction. `leaf_labels`, when
/// present, names the nodes identified with a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    nodes: Vec<String>,
    edges: Vec<(usize, usize, Rat)>,
    leaf_labels: Option<Vec<String>>,
}

impl WeightedTree {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(String, String, Rat)>,
        leaf_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        for (i, a) in nodes.iter().enumerate() {
            if nodes[..i].contains(a) {
                return Err(Error::Input(format!("duplicate node `{a}`")));
            }
        }
        if nodes.is_empty() {
            return Err(Error::Input("tree has no nodes".into()));
        }
        let index = |name: &str| -> Result<usize> {
            nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownElement(name.to_string()))
        };
        let mut resolved = Vec::with_capacity(edges.len());
        for (u, v, w) in &edges {
            if w.is_negative() {
                return Err(Error::Input(format!("negative weight on edge {u}-{v}")));
            }
            let (ui, vi) = (index(u)?, index(v)?);
            if ui == vi {
                return Err(Error::Input(format!("self-loop at `{u}`")));
            }
            resolved.push((ui, vi, w.clone()));
        }
        if resolved.len() + 1 != nodes.len() {
            return Err(Error::Input(format!(
                "a tree on {} nodes needs {} edges, got {}",
                nodes.len(),
                nodes.len() - 1,
                resolved.len()
            )));
        }
        // Contract zero-weight edges through a union-find over node ids.
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (u, v, w) in &resolved {
            if w.is_zero() {
                let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
                if ru != rv {
                    // Keep the smaller id as representative.
                    let (lo, hi) = (ru.min(rv), ru.max(rv));
                    parent[hi] = lo;
                }
            }
        }
        let mut kept_nodes = Vec::new();
        let mut remap = vec![usize::MAX; nodes.len()];
        for i in 0..nodes.len() {
            if find(&mut parent, i) == i {
                remap[i] = kept_nodes.len();
                kept_nodes.push(nodes[i].clone());
            }
        }
        let mut kept_edges = Vec::new();
        for (u, v, w) in resolved {
            if w.is_zero() {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            kept_edges.push((remap[ru], remap[rv], w));
        }
        let tree = WeightedTree {
            nodes: kept_nodes,
            edges: kept_edges,
            leaf_labels,
        };
        tree.check_connected_acyclic()?;
        Ok(tree)
    }

    fn check_connected_acyclic(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.edges.len() + 1 != n {
            return Err(Error::Input("zero-edge contraction produced a cycle".into()));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for (a, b, _) in &self.edges {
                let other = if *a == u {
                    *b
                } else if *b == u {
                    *a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    count += 1;
                    stack.push(other);
                }
            }
        }
        if count != n {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, Rat)] {
        &self.edges
    }

    pub fn leaf_labels(&self) -> Option<&[String]> {
        self.leaf_labels.as_deref()
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn total_weight(&self) -> Rat {
        self.edges.iter().map(|(_, _, w)| w).sum()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (e, (u, v, _)) in self.edges.iter().enumerate() {
            adj[*u].push((*v, e));
            adj[*v].push((*u, e));
        }
        adj
    }

    /// Path distance between two nodes.
    pub fn distance(&self, a: usize, b: usize) -> Rat {
        if a == b {
            return Rat::zero();
        }
        let adj = self.adjacency();
        let mut dist: Vec<Option<Rat>> = vec![None; self.nodes.len()];
        dist[a] = Some(Rat::zero());
        let mut stack = vec![a];
        while let Some(u) = stack.pop() {
            for &(v, e) in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].clone().unwrap() + self.edges[e].2.clone());
                    stack.push(v);
                }
            }
        }
        dist[b].clone().expect("tree is connected")
    }

    /// Node sequence of the unique path between two nodes.
    fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev: Vec<Option<usize>> = vec![None; self.nodes.len()];
        prev[a] = Some(a);
        let mut stack = vec![a];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if prev[v].is_none() {
                    prev[v] = Some(u);
                    stack.push(v);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur].expect("connected");
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Subtree-length diversity: the value of A is the total weight of the
/// minimal subtree spanning A. An edge contributes exactly when A has
/// elements on both of its sides.
pub fn tree_diversity(tree: &WeightedTree, x: &[String]) -> Result<FiniteDiversity> {
    if x.is_empty() {
        return Err(Error::Input("ground set is empty".into()));
    }
    let ground = GroundSet::new(x.to_vec())?;
    let ids: Vec<usize> = x
        .iter()
        .map(|name| tree.node_index(name))
        .collect::<Result<_>>()?;
    for (i, a) in ids.iter().enumerate() {
        if ids[..i].contains(a) {
            return Err(Error::Input(format!(
                "elements `{}` and `{}` coincide in the tree (zero-weight contraction)",
                x[ids[..i].iter().position(|b| b == a).unwrap()],
                x[i]
            )));
        }
    }
    // Mask of ground elements on the "a" side of each edge.
    let n_nodes = tree.nodes.len();
    let adj = tree.adjacency();
    let mut side_masks: Vec<SubsetMask> = Vec::with_capacity(tree.edges.len());
    for (e, (a, _, _)) in tree.edges.iter().enumerate() {
        // Collect nodes reachable from `a` without crossing edge e.
        let mut seen = vec![false; n_nodes];
        seen[*a] = true;
        let mut stack = vec![*a];
        while let Some(u) = stack.pop() {
            for &(v, through) in &adj[u] {
                if through != e && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        let mut mask = SubsetMask::EMPTY;
        for (gi, id) in ids.iter().enumerate() {
            if seen[*id] {
                mask = mask.with(gi);
            }
        }
        side_masks.push(mask);
    }
    let full = ground.full_mask();
    let values: Vec<Rat> = ground
        .masks()
        .map(|a| {
            if a.card() < 2 {
                return Rat::zero();
            }
            let mut total = Rat::zero();
            for (e, (_, _, w)) in tree.edges.iter().enumerate() {
                let inside = a.inter(side_masks[e]);
                let outside = a.inter(full.diff(side_masks[e]));
                if !inside.is_empty() && !outside.is_empty() {
                    total += w.clone();
                }
            }
            total
        })
        .collect();
    Ok(FiniteDiversity::trusted(ground, values))
}

/// Witness quadruple for a four-point failure, with the three pair sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourPointWitness {
    pub quad: [usize; 4],
    pub sums: [Rat; 3],
}

/// Additivity test: for every quadruple the two largest of the three pair
/// sums must be equal.
pub fn four_point_check(d: &FiniteMetric) -> (bool, Option<FourPointWitness>) {
    let n = d.n();
    for w in 0..n {
        for x in w + 1..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let s1 = d.dist(w, x) + d.dist(y, z);
                    let s2 = d.dist(w, y) + d.dist(x, z);
                    let s3 = d.dist(w, z) + d.dist(x, y);
                    let mut sorted = [s1.clone(), s2.clone(), s3.clone()];
                    sorted.sort();
                    if sorted[1] != sorted[2] {
                        return (
                            false,
                            Some(FourPointWitness {
                                quad: [w, x, y, z],
                                sums: [s1, s2, s3],
                            }),
                        );
                    }
                }
            }
        }
    }
    (true, None)
}

/// Why reconstruction failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReconstructFailure {
    /// The induced metric is not additive; carries a four-point witness
    /// when one exists (always for n >= 4).
    MetricNotAdditive { witness: Option<FourPointWitness> },
    /// The metric is additive but a higher-order subset value disagrees
    /// with the subtree length forced by the pairwise tree.
    HigherOrderMismatch {
        subset: SubsetMask,
        expected: Rat,
        actual: Rat,
    },
}

/// Rebuilds the unique weighted tree realizing a diversity, when one
/// exists.
///
/// Pairwise distances drive an exact insertion procedure (deepest Gromov
/// meet), after which every subset value (not only pairs) is verified
/// against the subtree lengths of the result; a diversity whose induced
/// metric is additive can still fail on a higher-order set.
pub fn reconstruct_tree(
    delta: &FiniteDiversity,
) -> std::result::Result<WeightedTree, ReconstructFailure> {
    let ground = delta.ground();
    let n = ground.len();
    let labels = ground.labels();
    let d = |i: usize, j: usize| -> Rat {
        if i == j {
            Rat::zero()
        } else {
            delta
                .value(SubsetMask::singleton(i).union(SubsetMask::singleton(j)))
                .clone()
        }
    };

    let mut nodes: Vec<String> = vec![labels[0].clone()];
    let mut labeled: Vec<bool> = vec![true];
    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    // Ids of already-inserted ground elements within `nodes`.
    let mut placed: Vec<usize> = vec![0];
    let mut fresh = 0usize;

    if n >= 2 {
        nodes.push(labels[1].clone());
        labeled.push(true);
        edges.push((0, 1, d(0, 1)));
        placed.push(1);
    }

    for z in 2..n {
        // Attachment depth from the anchor x0 = element 0: the deepest
        // Gromov meet over the inserted elements.
        let mut alpha = Rat::zero();
        let mut best_v = 1usize;
        for v in 1..z {
            let g = Rat::frac(1, 2) * (d(0, z) + d(0, v) - d(v, z));
            if g > alpha {
                alpha = g;
                best_v = v;
            }
        }
        let pendant = d(0, z) - &alpha;

        // Walk from the anchor toward best_v and find the point at
        // distance alpha, subdividing an edge if needed.
        let tree_view = WeightedTree {
            nodes: nodes.clone(),
            edges: edges.clone(),
            leaf_labels: None,
        };
        let path = tree_view.path(placed[0], placed[best_v]);
        let mut covered = Rat::zero();
        let mut attach: Option<usize> = None;
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if covered == alpha {
                attach = Some(a);
                break;
            }
            let eidx = edges
                .iter()
                .position(|(u, v, _)| (*u == a && *v == b) || (*u == b && *v == a))
                .expect("path edge exists");
            let w = edges[eidx].2.clone();
            let reach = &covered + &w;
            if reach > alpha {
                // Subdivide edge (a, b) at distance alpha - covered from a.
                let first = &alpha - &covered;
                let second = &reach - &alpha;
                let mid = nodes.len();
                fresh += 1;
                nodes.push(format!("#{fresh}"));
                labeled.push(false);
                let (u, v, _) = edges[eidx].clone();
                let (from_a, from_b) = if u == a { (u, v) } else { (v, u) };
                edges[eidx] = (from_a, mid, first);
                edges.push((mid, from_b, second));
                attach = Some(mid);
                break;
            }
            covered = reach;
            if covered == alpha {
                attach = Some(b);
                break;
            }
        }
        let attach = attach.unwrap_or(*path.last().unwrap());

        if pendant.is_zero() {
            if labeled[attach] {
                // Two ground elements at distance zero: not a metric that
                // this input can represent; report as non-additive.
                return Err(not_additive(delta));
            }
            nodes[attach] = labels[z].clone();
            labeled[attach] = true;
            placed.push(attach);
        } else {
            let id = nodes.len();
            nodes.push(labels[z].clone());
            labeled.push(true);
            edges.push((attach, id, pendant));
            placed.push(id);
        }
    }

    // Suppress unlabeled degree-2 nodes left over from subdivision chains.
    let named_edges: Vec<(String, String, Rat)> = edges
        .iter()
        .map(|(u, v, w)| (nodes[*u].clone(), nodes[*v].clone(), w.clone()))
        .collect();
    let tree = WeightedTree::new(nodes.clone(), named_edges, Some(labels.to_vec()))
        .map_err(|_| not_additive(delta))?;
    let tree = canonicalize(&tree).map_err(|_| not_additive(delta))?;

    // Exact verification of every subset value: pairs first (a pair
    // mismatch means the metric was not additive), then larger sets by
    // cardinality.
    let realized = tree_diversity(&tree, labels).map_err(|_| not_additive(delta))?;
    let mut order: Vec<SubsetMask> = ground.masks().filter(|m| m.card() >= 2).collect();
    order.sort_by_key(|m| (m.card(), m.bits()));
    for m in order {
        if realized.value(m) != delta.value(m) {
            if m.card() == 2 {
                return Err(not_additive(delta));
            }
            return Err(ReconstructFailure::HigherOrderMismatch {
                subset: m,
                expected: delta.value(m).clone(),
                actual: realized.value(m).clone(),
            });
        }
    }
    Ok(tree)
}

fn not_additive(delta: &FiniteDiversity) -> ReconstructFailure {
    let metric = crate::diversity::induced_metric(delta);
    let (_, witness) = four_point_check(&metric);
    ReconstructFailure::MetricNotAdditive { witness }
}

/// Canonical form: unlabeled leaves pruned, unlabeled degree-2 nodes
/// suppressed, internal nodes renamed to the sorted label set of their
/// far side from the smallest label, edges sorted. Canonically equal
/// trees are isomorphic with identical weights.
pub fn canonicalize(tree: &WeightedTree) -> Result<WeightedTree> {
    let labeled: Vec<bool> = match tree.leaf_labels() {
        Some(ls) => tree
            .nodes
            .iter()
            .map(|n| ls.contains(n))
            .collect(),
        None => vec![true; tree.nodes.len()],
    };
    let mut nodes: Vec<Option<String>> = tree.nodes.iter().cloned().map(Some).collect();
    let mut edges: Vec<(usize, usize, Rat)> = tree.edges.clone();

    // Prune unlabeled leaves until none remain.
    loop {
        let mut degree = BTreeMap::new();
        for (u, v, _) in &edges {
            *degree.entry(*u).or_insert(0) += 1;
            *degree.entry(*v).or_insert(0) += 1;
        }
        let victim = nodes.iter().enumerate().find_map(|(i, name)| {
            if name.is_some() && !labeled[i] && degree.get(&i).copied().unwrap_or(0) <= 1 {
                Some(i)
            } else {
                None
            }
        });
        match victim {
            Some(i) => {
                nodes[i] = None;
                edges.retain(|(u, v, _)| *u != i && *v != i);
            }
            None => break,
        }
    }

    // Suppress unlabeled degree-2 nodes, merging edge weights.
    loop {
        let mut degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, (u, v, _)) in edges.iter().enumerate() {
            degree.entry(*u).or_default().push(e);
            degree.entry(*v).or_default().push(e);
        }
        let victim = nodes.iter().enumerate().find_map(|(i, name)| {
            if name.is_some()
                && !labeled[i]
                && degree.get(&i).map(|es| es.len()) == Some(2)
            {
                Some((i, degree[&i].clone()))
            } else {
                None
            }
        });
        match victim {
            Some((i, es)) => {
                let (e1, e2) = (es[0], es[1]);
                let other = |e: usize| {
                    let (u, v, _) = &edges[e];
                    if *u == i {
                        *v
                    } else {
                        *u
                    }
                };
                let (a, b) = (other(e1), other(e2));
                let w = &edges[e1].2 + &edges[e2].2;
                let mut remove = [e1, e2];
                remove.sort_unstable_by(|x, y| y.cmp(x));
                for e in remove {
                    edges.remove(e);
                }
                edges.push((a, b, w));
                nodes[i] = None;
            }
            None => break,
        }
    }

    let live: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| n.as_ref().map(|_| i))
        .collect();
    if live.is_empty() {
        return Err(Error::Input("tree has no labeled nodes".into()));
    }

    // Rename internal nodes by the sorted set of labels on their far side
    // from the root label.
    let root = live
        .iter()
        .copied()
        .filter(|&i| labeled[i])
        .min_by_key(|&i| nodes[i].clone().unwrap())
        .ok_or_else(|| Error::Input("tree has no labeled nodes".into()))?;
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (e, (u, v, _)) in edges.iter().enumerate() {
        adj.entry(*u).or_default().push((*v, e));
        adj.entry(*v).or_default().push((*u, e));
    }
    // Labels in the subtree of each node seen from the root.
    fn collect(
        node: usize,
        parent: Option<usize>,
        adj: &BTreeMap<usize, Vec<(usize, usize)>>,
        labeled: &[bool],
        nodes: &[Option<String>],
        out: &mut BTreeMap<usize, Vec<String>>,
    ) -> Vec<String> {
        let mut mine = Vec::new();
        if labeled[node] {
            mine.push(nodes[node].clone().unwrap());
        }
        for &(next, _) in adj.get(&node).into_iter().flatten() {
            if Some(next) != parent {
                mine.extend(collect(next, Some(node), adj, labeled, nodes, out));
            }
        }
        mine.sort();
        out.insert(node, mine.clone());
        mine
    }
    let mut below = BTreeMap::new();
    collect(root, None, &adj, &labeled, &nodes, &mut below);

    let mut final_names: BTreeMap<usize, String> = BTreeMap::new();
    for &i in &live {
        let name = if labeled[i] {
            nodes[i].clone().unwrap()
        } else {
            format!("{{{}}}", below[&i].join(","))
        };
        final_names.insert(i, name);
    }

    let mut named: Vec<(String, String, Rat)> = edges
        .iter()
        .map(|(u, v, w)| {
            let (a, b) = (final_names[u].clone(), final_names[v].clone());
            if a <= b {
                (a, b, w.clone())
            } else {
                (b, a, w.clone())
            }
        })
        .collect();
    named.sort();
    let mut out_nodes: Vec<String> = final_names.values().cloned().collect();
    out_nodes.sort();
    WeightedTree::new(out_nodes, named, tree.leaf_labels.clone())
}
