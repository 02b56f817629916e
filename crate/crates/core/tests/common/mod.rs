//! Seeded random instance generators shared by the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dvy_core::diversity::{CheckMode, FiniteDiversity, FiniteMetric, PointSet};
use dvy_core::phylo::WeightedTree;
use dvy_core::rat::Rat;
use dvy_core::steiner::{Graph, MetricInstance};
use dvy_core::GroundSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_pos(rng: &mut ChaCha8Rng) -> Rat {
    Rat::frac(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random metric: shortest-path closure of random positive complete
/// weights.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetric {
    let mut d = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = small_pos(rng);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetric::new(GroundSet::new(labels(n)).unwrap(), d).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointSet {
    loop {
        let coords: Vec<Vec<Rat>> = (0..n)
            .map(|_| {
                (0..dim)
                    .map(|_| Rat::frac(rng.gen_range(-8..=8), rng.gen_range(1..=3)))
                    .collect()
            })
            .collect();
        // Distinct points keep the L1 diversity positive on pairs.
        let distinct = (0..n).all(|i| (0..i).all(|j| coords[i] != coords[j]));
        if distinct {
            return PointSet::new(GroundSet::new(labels(n)).unwrap(), coords).unwrap();
        }
    }
}

/// Random tree with the given leaf names and unlabeled internal nodes:
/// iterative leaf insertion by subdividing a random edge.
pub fn random_tree(rng: &mut ChaCha8Rng, leaf_names: &[String]) -> WeightedTree {
    let n = leaf_names.len();
    assert!(n >= 2);
    let mut nodes: Vec<String> = vec![leaf_names[0].clone(), leaf_names[1].clone()];
    let mut edges: Vec<(String, String, Rat)> =
        vec![(nodes[0].clone(), nodes[1].clone(), small_pos(rng))];
    for (k, leaf) in leaf_names.iter().enumerate().skip(2) {
        let e = rng.gen_range(0..edges.len());
        let (a, b, w) = edges[e].clone();
        // Split w into two positive rational halves.
        let t = Rat::frac(rng.gen_range(1..=3), 4);
        let first = &w * &t;
        let second = &w - &first;
        let mid = format!("i{k}");
        edges[e] = (a, mid.clone(), first);
        edges.push((mid.clone(), b, second));
        edges.push((mid.clone(), leaf.clone(), small_pos(rng)));
        nodes.push(mid);
        nodes.push(leaf.clone());
    }
    WeightedTree::new(nodes, edges, Some(leaf_names.to_vec())).unwrap()
}

/// Random connected graph instance with the given number of terminals
/// and a few extra nodes and edges.
pub fn random_graph_instance(
    rng: &mut ChaCha8Rng,
    n_terminals: usize,
    max_nodes: usize,
) -> MetricInstance {
    let extra = rng.gen_range(0..=max_nodes.saturating_sub(n_terminals).min(7));
    let total = n_terminals + extra;
    let names: Vec<String> = (0..n_terminals)
        .map(|i| format!("e{i}"))
        .chain((0..extra).map(|i| format!("x{i}")))
        .collect();
    let mut edges: Vec<(String, String, Rat)> = Vec::new();
    // Random spanning tree, then extra edges.
    for i in 1..total {
        let j = rng.gen_range(0..i);
        edges.push((
            names[i].clone(),
            names[j].clone(),
            Rat::from_int(rng.gen_range(1..=9)),
        ));
    }
    for _ in 0..rng.gen_range(0..=total) {
        let i = rng.gen_range(0..total);
        let j = rng.gen_range(0..total);
        if i != j {
            edges.push((
                names[i].clone(),
                names[j].clone(),
                Rat::from_int(rng.gen_range(1..=9)),
            ));
        }
    }
    let graph = Graph::new(names.clone(), edges).unwrap();
    MetricInstance::from_graph(graph, &names[..n_terminals]).unwrap()
}

fn scale(delta: &FiniteDiversity, factor: &Rat) -> Vec<Rat> {
    delta.values().iter().map(|v| v * factor).collect()
}

/// Random diversity: a positive combination of one or two of the stock
/// constructions on a shared ground set (diversities form a cone).
pub fn random_diversity(rng: &mut ChaCha8Rng, n: usize) -> FiniteDiversity {
    let ground = GroundSet::new(labels(n)).unwrap();
    let component = |rng: &mut ChaCha8Rng| -> FiniteDiversity {
        match rng.gen_range(0..5) {
            0 => dvy_core::diameter_diversity(&random_metric(rng, n)),
            1 => {
                if n >= 2 {
                    let tree = random_tree(rng, &labels(n));
                    dvy_core::phylo::tree_diversity(&tree, &labels(n)).unwrap()
                } else {
                    dvy_core::diameter_diversity(&random_metric(rng, n))
                }
            }
            2 => {
                let dim = rng.gen_range(1..=3);
                dvy_core::l1_diversity(&random_points(rng, n, dim))
            }
            3 => {
                let instance = random_graph_instance(rng, n, n + 3);
                dvy_core::steiner::steiner_length_diversity(&instance).unwrap()
            }
            _ => {
                let base = dvy_core::diameter_diversity(&random_metric(rng, n));
                if n >= 3 {
                    let k = rng.gen_range(2..=n);
                    dvy_core::truncate(&base, k).unwrap()
                } else {
                    base
                }
            }
        }
    };
    let first = component(rng);
    let mut values = scale(&first, &small_pos(rng));
    if rng.gen_range(0..2) == 0 {
        let second = component(rng);
        let factor = small_pos(rng);
        for (acc, v) in values.iter_mut().zip(second.values()) {
            *acc = &*acc + &(v * &factor);
        }
    }
    FiniteDiversity::new(ground, values, CheckMode::Fast).unwrap()
}
