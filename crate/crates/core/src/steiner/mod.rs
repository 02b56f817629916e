//! Steiner tree problems: the exact metric solver, the pairwise and
//! full-diversity weight LPs over enumerated topologies, and the
//! truncation lower-bound ladder.

mod exact;
mod lp;
mod topology;

pub use exact::{Graph, ShortestPaths, MAX_DW_TERMINALS, MAX_GRAPH_NODES};
pub use lp::{lp_solve, LinearProgram, LpSolution};
pub use topology::{enumerate_topologies, TopNode, Topology, MAX_TERMINALS};


use crate::diversity::{truncate, FiniteDiversity, FiniteMetric};
use crate::error::{Error, Result};
use crate::ground::{GroundSet, SubsetMask};
use crate::rat::Rat;

use exact::DwTables;

/// A Steiner instance: a weighted graph with named terminals, or a bare
/// finite metric whose points are all terminals.
#[derive(Clone, Debug)]
pub enum MetricInstance {
    Graph { graph: Graph, terminals: Vec<usize> },
    Metric { metric: FiniteMetric },
}

impl MetricInstance {
    pub fn from_graph(graph: Graph, terminal_names: &[String]) -> Result<Self> {
        if terminal_names.is_empty() {
            return Err(Error::Input("no terminals".into()));
        }
        let mut terminals = Vec::with_capacity(terminal_names.len());
        for name in terminal_names {
            let id = graph.node_index(name)?;
            if terminals.contains(&id) {
                return Err(Error::Input(format!("repeated terminal `{name}`")));
            }
            terminals.push(id);
        }
        Ok(MetricInstance::Graph { graph, terminals })
    }

    pub fn from_metric(metric: FiniteMetric) -> Self {
        MetricInstance::Metric { metric }
    }

    pub fn terminal_names(&self) -> Vec<String> {
        match self {
            MetricInstance::Graph { graph, terminals } => terminals
                .iter()
                .map(|&i| graph.names()[i].clone())
                .collect(),
            MetricInstance::Metric { metric } => metric.ground().labels().to_vec(),
        }
    }

    pub fn node_names(&self) -> Vec<String> {
        match self {
            MetricInstance::Graph { graph, .. } => graph.names().to_vec(),
            MetricInstance::Metric { metric } => metric.ground().labels().to_vec(),
        }
    }

    fn paths(&self) -> Result<ShortestPaths> {
        match self {
            MetricInstance::Graph { graph, .. } => ShortestPaths::of_graph(graph),
            MetricInstance::Metric { metric } => Ok(ShortestPaths::of_matrix(metric.matrix())),
        }
    }

    fn terminal_nodes(&self) -> Vec<usize> {
        match self {
            MetricInstance::Graph { terminals, .. } => terminals.clone(),
            MetricInstance::Metric { metric } => (0..metric.n()).collect(),
        }
    }

    /// Weight of a direct connection, when one exists: a graph edge, or
    /// the metric distance between two points.
    pub fn direct_weight(&self, u: usize, v: usize) -> Option<Rat> {
        match self {
            MetricInstance::Graph { graph, .. } => graph.edge_weight(u, v).cloned(),
            MetricInstance::Metric { metric } => {
                if u < metric.n() && v < metric.n() {
                    Some(metric.dist(u, v).clone())
                } else {
                    None
                }
            }
        }
    }
}

/// An optimal Steiner tree within the instance: direct edges by node id,
/// with the exact total length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTree {
    pub edges: Vec<(usize, usize)>,
    pub length: Rat,
}

/// Exact minimum-length tree spanning the subset `a` of terminal names.
pub fn metric_steiner_exact(instance: &MetricInstance, a: &[String]) -> Result<SteinerTree> {
    if a.is_empty() {
        return Err(Error::Input("empty terminal subset".into()));
    }
    let paths = instance.paths()?;
    let terminal_nodes = instance.terminal_nodes();
    let names = instance.node_names();
    let mut subset = 0u32;
    for name in a {
        let node = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.clone()))?;
        let t = terminal_nodes
            .iter()
            .position(|&tn| tn == node)
            .ok_or_else(|| Error::Input(format!("`{name}` is not a terminal")))?;
        subset |= 1 << t;
    }
    let dw = DwTables::build(&paths, &terminal_nodes)?;
    let length = dw.length(subset);
    let edges: Vec<(usize, usize)> = dw.tree(&paths, subset).into_iter().collect();
    let total: Rat = edges.iter().map(|(u, v)| paths.d(*u, *v).clone()).sum();
    if total != length {
        return Err(Error::Input(
            "internal: reconstructed tree length disagrees with the table".into(),
        ));
    }
    Ok(SteinerTree { edges, length })
}

/// The Steiner-length diversity on the terminals: the value of A is the
/// exact minimum length of a tree connecting A within the instance.
pub fn steiner_length_diversity(instance: &MetricInstance) -> Result<FiniteDiversity> {
    let paths = instance.paths()?;
    let terminal_nodes = instance.terminal_nodes();
    let dw = DwTables::build(&paths, &terminal_nodes)?;
    let ground = GroundSet::new(instance.terminal_names())?;
    let values: Vec<Rat> = ground.masks().map(|m| dw.length(m.bits())).collect();
    Ok(FiniteDiversity::trusted(ground, values))
}

/// A topology with optimal edge weights and total length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSolution {
    pub topology: Topology,
    pub weights: Vec<Rat>,
    pub length: Rat,
}

fn optimize_over_topologies<F>(n: usize, constraint_builder: F) -> Result<SteinerSolution>
where
    F: Fn(&Topology) -> Vec<(Vec<Rat>, Rat)>,
{
    let topologies = enumerate_topologies(n, n.saturating_sub(2))?;
    let mut best: Option<SteinerSolution> = None;
    for topology in topologies {
        let constraints = constraint_builder(&topology);
        let lp = LinearProgram {
            objective: vec![Rat::one(); topology.edges().len()],
            constraints,
        };
        let sol = lp_solve(&lp)?;
        if best.as_ref().map_or(true, |b| sol.value < b.length) {
            best = Some(SteinerSolution {
                topology,
                weights: sol.primal,
                length: sol.value,
            });
        }
    }
    best.ok_or_else(|| Error::Input("no topologies".into()))
}

/// Cheapest tree with nonnegative edge weights whose path lengths
/// dominate the given metric on every terminal pair.
pub fn abstract_steiner(d: &FiniteMetric) -> Result<SteinerSolution> {
    let n = d.n();
    optimize_over_topologies(n, |topology| {
        let sides = topology.edge_sides();
        let mut constraints = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                let row: Vec<Rat> = sides
                    .iter()
                    .map(|side| {
                        let split = (side >> x & 1) != (side >> y & 1);
                        if split {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect();
                constraints.push((row, d.dist(x, y).clone()));
            }
        }
        constraints
    })
}

/// Cheapest tree whose subtree lengths dominate the diversity on every
/// subset of the terminals.
pub fn diversity_steiner(delta: &FiniteDiversity) -> Result<SteinerSolution> {
    let n = delta.n();
    optimize_over_topologies(n, |topology| {
        let sides = topology.edge_sides();
        let full = delta.ground().full_mask().bits();
        let mut constraints = Vec::new();
        for m in delta.ground().masks() {
            if m.card() < 2 {
                continue;
            }
            let y = m.bits();
            let row: Vec<Rat> = sides
                .iter()
                .map(|side| {
                    let split = y & side != 0 && y & (full & !side) != 0;
                    if split {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            constraints.push((row, delta.value(m).clone()));
        }
        constraints
    })
}

/// The truncation ladder: for each k, the diversity Steiner optimum of
/// the order-k truncation of the Steiner-length diversity, ending at the
/// exact metric Steiner length.
#[derive(Clone, Debug)]
pub struct BoundLadder {
    /// (k, optimal solution for the order-k truncation), ascending in k.
    pub bounds: Vec<(usize, SteinerSolution)>,
    pub exact: SteinerTree,
}

pub fn steiner_lower_bounds(instance: &MetricInstance, kmax: usize) -> Result<BoundLadder> {
    let terminal_names = instance.terminal_names();
    let n = terminal_names.len();
    if n > MAX_TERMINALS {
        return Err(Error::SizeCap {
            n,
            cap: MAX_TERMINALS,
        });
    }
    if kmax < 2 || kmax > n {
        return Err(Error::Parameter(format!(
            "kmax must lie in 2..={n}, got {kmax}"
        )));
    }
    let lengths = steiner_length_diversity(instance)?;
    let mut bounds = Vec::new();
    for k in 2..=kmax {
        let truncated = truncate(&lengths, k)?;
        bounds.push((k, diversity_steiner(&truncated)?));
    }
    let exact = metric_steiner_exact(instance, &terminal_names)?;
    for pair in bounds.windows(2) {
        if pair[0].1.length > pair[1].1.length {
            return Err(Error::Input("internal: ladder is not monotone".into()));
        }
    }
    if let Some((_, last)) = bounds.last() {
        if last.length > exact.length {
            return Err(Error::Input("internal: ladder exceeds the exact optimum".into()));
        }
    }
    if kmax == n && bounds.last().map(|(_, s)| &s.length) != Some(&exact.length) {
        return Err(Error::Input(
            "internal: full-order bound must equal the exact optimum".into(),
        ));
    }
    Ok(BoundLadder { bounds, exact })
}

/// Convenience: the Steiner length of every subset as a plain map, used
/// by witnesses and tests.
pub fn subtree_length(topology: &Topology, weights: &[Rat], y: SubsetMask) -> Rat {
    let sides = topology.edge_sides();
    let full = (1u32 << topology.n_terminals()) - 1;
    let mut total = Rat::zero();
    for (e, side) in sides.iter().enumerate() {
        let bits = y.bits();
        if bits & side != 0 && bits & (full & !side) != 0 {
            total += weights[e].clone();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::{check_axioms, induced_metric, CheckMode};
    use crate::phylo::tests::quartet_tree;
    use crate::phylo::tree_diversity;
    use crate::steiner::exact::tests::{square_with_center, star_graph};

    fn r(s: &str) -> Rat {
        Rat::parse(s).unwrap()
    }

    fn s(v: &str) -> String {
        v.to_string()
    }

    fn star_instance() -> MetricInstance {
        MetricInstance::from_graph(star_graph(), &[s("a"), s("b"), s("c")]).unwrap()
    }

    fn square_instance() -> MetricInstance {
        MetricInstance::from_graph(square_with_center(), &[s("1"), s("2"), s("3"), s("4")])
            .unwrap()
    }

    #[test]
    fn star_exact_tree() {
        let tree = metric_steiner_exact(&star_instance(), &[s("a"), s("b"), s("c")]).unwrap();
        assert_eq!(tree.length, r("3"));
        assert_eq!(tree.edges.len(), 3);
        let pair = metric_steiner_exact(&star_instance(), &[s("a"), s("b")]).unwrap();
        assert_eq!(pair.length, r("2"));
    }

    #[test]
    fn steiner_length_diversity_values() {
        let d = steiner_length_diversity(&star_instance()).unwrap();
        for pair in [0b011, 0b101, 0b110] {
            assert_eq!(*d.value(SubsetMask(pair)), r("2"));
        }
        assert_eq!(*d.value(SubsetMask(0b111)), r("3"));
        assert!(d.value(SubsetMask(0b001)).is_zero());
        let report = check_axioms(d.ground(), d.values(), CheckMode::Full).unwrap();
        assert!(report.pass);

        let d = steiner_length_diversity(&square_instance()).unwrap();
        assert_eq!(*d.value(SubsetMask(0b0011)), r("4"));
        assert_eq!(*d.value(SubsetMask(0b0101)), r("6"));
        assert_eq!(*d.value(SubsetMask(0b1111)), r("12"));
    }

    #[test]
    fn abstract_steiner_examples() {
        // Equilateral metric, distance 2: the star with unit legs wins.
        let ground = GroundSet::new(["1", "2", "3"]).unwrap();
        let two = r("2");
        let matrix: Vec<Vec<Rat>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Rat::zero() } else { two.clone() })
                    .collect()
            })
            .collect();
        let d = FiniteMetric::new(ground, matrix).unwrap();
        let sol = abstract_steiner(&d).unwrap();
        assert_eq!(sol.length, r("3"));
        assert_eq!(sol.topology.n_steiner(), 1);
        assert!(sol.weights.iter().all(|w| *w == Rat::one()));

        // Two points at distance 5: a single edge of weight 5.
        let ground = GroundSet::new(["x", "y"]).unwrap();
        let d = FiniteMetric::new(
            ground,
            vec![vec![r("0"), r("5")], vec![r("5"), r("0")]],
        )
        .unwrap();
        let sol = abstract_steiner(&d).unwrap();
        assert_eq!(sol.length, r("5"));

        // Square metric: adjacent 4, opposite 6. The double-Y with all
        // weights 2 is feasible (cherry paths 4, cross paths 6) at total
        // 10, and 10 is forced: the two opposite-pair constraints give
        // total >= 12 - m while the cherries give total >= 8 + m.
        let square = induced_metric(&steiner_length_diversity(&square_instance()).unwrap());
        let sol = abstract_steiner(&square).unwrap();
        assert_eq!(sol.length, r("10"));
        assert_eq!(sol.topology.n_steiner(), 2);
    }

    #[test]
    fn diversity_steiner_examples() {
        // Pairs 2, triple 4: optimum 4.
        let delta = crate::tightspan::tests::three_point("2", "2", "2", "4");
        let sol = diversity_steiner(&delta).unwrap();
        assert_eq!(sol.length, r("4"));
        for m in delta.ground().masks() {
            if m.card() >= 2 {
                assert!(subtree_length(&sol.topology, &sol.weights, m) >= *delta.value(m));
            }
        }

        // A tree diversity is recovered at its own total weight.
        let labels = [s("a"), s("b"), s("c"), s("d")];
        let tree_delta = tree_diversity(&quartet_tree(), &labels).unwrap();
        let sol = diversity_steiner(&tree_delta).unwrap();
        assert_eq!(sol.length, r("5"));

        // Truncation at pairs coincides with the pairwise problem.
        let t2 = truncate(&tree_delta, 2).unwrap();
        let via_pairs = abstract_steiner(&induced_metric(&tree_delta)).unwrap();
        let via_truncation = diversity_steiner(&t2).unwrap();
        assert_eq!(via_truncation.length, via_pairs.length);
    }

    #[test]
    fn ladder_on_fixtures() {
        // Square with center: pairwise constraints alone admit the
        // double-Y of total 10; the full-order bound reaches the exact
        // graph optimum 12.
        let ladder = steiner_lower_bounds(&square_instance(), 4).unwrap();
        assert_eq!(ladder.exact.length, r("12"));
        let ks: Vec<usize> = ladder.bounds.iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![2, 3, 4]);
        assert_eq!(ladder.bounds[0].1.length, r("10"));
        assert_eq!(ladder.bounds[2].1.length, r("12"));
        for pair in ladder.bounds.windows(2) {
            assert!(pair[0].1.length <= pair[1].1.length);
        }

        let ladder = steiner_lower_bounds(&star_instance(), 3).unwrap();
        assert_eq!(ladder.exact.length, r("3"));
        for (_, sol) in &ladder.bounds {
            assert_eq!(sol.length, r("3"));
        }
    }

    #[test]
    fn ladder_parameter_checks() {
        assert!(steiner_lower_bounds(&star_instance(), 1).is_err());
        assert!(steiner_lower_bounds(&star_instance(), 4).is_err());
    }

    #[test]
    fn metric_instance_without_graph() {
        let delta = crate::tightspan::tests::three_point("2", "2", "2", "3");
        let metric = induced_metric(&delta);
        let instance = MetricInstance::from_metric(metric);
        // Steiner points are restricted to the three given points, so the
        // best tree is a path of length 4.
        let tree = metric_steiner_exact(&instance, &[s("1"), s("2"), s("3")]).unwrap();
        assert_eq!(tree.length, r("4"));
    }
}
