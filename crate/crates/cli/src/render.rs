//! Payload builders. Every failure payload carries a witness that is
//! re-verified against the raw data before printing.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use dvy_core::diversity::{AxiomReport, AxiomViolation, FiniteDiversity, FiniteMetric};
use dvy_core::ground::GroundSet;
use dvy_core::phylo::{FourPointWitness, ReconstructFailure, WeightedTree};
use dvy_core::rat::Rat;
use dvy_core::steiner::{
    BoundLadder, MetricInstance, SteinerSolution, SteinerTree, TopNode,
};
use dvy_core::tightspan::{CoverWitness, MembershipReport, SpanFunction, ThreePointComplex};
use dvy_core::{Error, SubsetMask};

use crate::Outcome;

fn names(ground: &GroundSet, m: SubsetMask) -> Value {
    json!(ground.names_of(m))
}

fn internal_witness_error() -> Error {
    Error::Input("internal: a reported witness failed re-verification".into())
}

pub fn axiom_report(
    ground: &GroundSet,
    values: &[Rat],
    report: &AxiomReport,
) -> Outcome {
    if report.pass {
        return Outcome::pass(json!({"pass": true}), "axioms: PASS".into());
    }
    let mut out = Vec::new();
    let mut lines = vec!["axioms: FAIL".to_string()];
    for v in &report.violations {
        assert!(
            dvy_core::diversity::verify_violation(values, v),
            "witness failed re-verification"
        );
        match v {
            AxiomViolation::Positivity { set, value } => {
                lines.push(format!(
                    "  positivity: value({{{}}}) = {value}",
                    ground.names_of(*set).join(",")
                ));
                out.push(json!({
                    "axiom": "positivity",
                    "set": names(ground, *set),
                    "value": value.to_string(),
                }));
            }
            AxiomViolation::Monotonicity {
                sub,
                sup,
                sub_value,
                sup_value,
            } => {
                lines.push(format!(
                    "  monotonicity: value({{{}}}) = {sub_value} > {sup_value} = value({{{}}})",
                    ground.names_of(*sub).join(","),
                    ground.names_of(*sup).join(",")
                ));
                out.push(json!({
                    "axiom": "monotonicity",
                    "sub": names(ground, *sub),
                    "sup": names(ground, *sup),
                    "subValue": sub_value.to_string(),
                    "supValue": sup_value.to_string(),
                }));
            }
            AxiomViolation::Triangle { a, b, c, lhs, rhs } => {
                lines.push(format!(
                    "  triangle: value({{{}}}) = {lhs} > {rhs} via pivot {{{}}}",
                    ground.names_of(a.union(*c)).join(","),
                    ground.names_of(*b).join(",")
                ));
                out.push(json!({
                    "axiom": "triangle",
                    "A": names(ground, *a),
                    "B": names(ground, *b),
                    "C": names(ground, *c),
                    "lhs": lhs.to_string(),
                    "rhs": rhs.to_string(),
                }));
            }
        }
    }
    Outcome::fail(
        json!({"pass": false, "violations": out, "truncated": report.truncated}),
        lines.join("\n"),
    )
}

fn cover_witness_json(ground: &GroundSet, w: &CoverWitness) -> Value {
    json!({
        "S": names(ground, w.set),
        "cover": w.cover.iter().map(|b| names(ground, *b)).collect::<Vec<_>>(),
        "cost": w.cover_cost.to_string(),
        "required": w.required.to_string(),
    })
}

pub fn membership(
    delta: &FiniteDiversity,
    f: &SpanFunction,
    report: &MembershipReport,
) -> Outcome {
    let ground = delta.ground();
    if report.in_t {
        return Outcome::pass(
            json!({"in_P": true, "in_T": true}),
            "member of the tight span".into(),
        );
    }
    if let Some(w) = &report.cover_witness {
        if !w.verify(delta, f) {
            let err = internal_witness_error();
            return Outcome::fail(json!({"error": err.to_string()}), err.to_string());
        }
        return Outcome::fail(
            json!({
                "in_P": false,
                "in_T": false,
                "witness": cover_witness_json(ground, w),
            }),
            format!(
                "not feasible: cover of {{{}}} costs {} < {}",
                ground.names_of(w.set).join(","),
                w.cover_cost,
                w.required
            ),
        );
    }
    let w = report.slack_witness.as_ref().expect("some witness");
    if !w.verify(delta, f) {
        let err = internal_witness_error();
        return Outcome::fail(json!({"error": err.to_string()}), err.to_string());
    }
    Outcome::fail(
        json!({
            "in_P": true,
            "in_T": false,
            "witness": {"A": names(ground, w.set)},
        }),
        format!(
            "feasible but not tight: value({{{}}}) = {} exceeds best support {}",
            ground.names_of(w.set).join(","),
            w.value,
            w.support
        ),
    )
}

pub fn not_in_p(
    delta: &FiniteDiversity,
    set: SubsetMask,
    cover: &[SubsetMask],
    cost: &str,
) -> Outcome {
    let ground = delta.ground();
    Outcome::fail(
        json!({
            "in_P": false,
            "witness": {
                "S": names(ground, set),
                "cover": cover.iter().map(|b| names(ground, *b)).collect::<Vec<_>>(),
                "cost": cost,
            },
        }),
        format!(
            "not feasible: cover of {{{}}} costs {cost}",
            ground.names_of(set).join(",")
        ),
    )
}

fn four_point_witness_json(ground: &GroundSet, w: &FourPointWitness) -> Value {
    json!({
        "quad": w.quad.iter().map(|&i| ground.label(i)).collect::<Vec<_>>(),
        "sums": w.sums.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    })
}

fn verify_four_point(metric: &FiniteMetric, w: &FourPointWitness) -> bool {
    let [a, b, c, d] = w.quad;
    let s1 = metric.dist(a, b) + metric.dist(c, d);
    let s2 = metric.dist(a, c) + metric.dist(b, d);
    let s3 = metric.dist(a, d) + metric.dist(b, c);
    if [s1, s2, s3] != w.sums {
        return false;
    }
    let mut sorted = w.sums.clone();
    sorted.sort();
    sorted[1] != sorted[2]
}

pub fn four_point(
    metric: &FiniteMetric,
    ok: bool,
    witness: Option<&FourPointWitness>,
) -> Outcome {
    if ok {
        return Outcome::pass(json!({"pass": true}), "four-point condition: PASS".into());
    }
    let w = witness.expect("witness on failure");
    assert!(
        verify_four_point(metric, w),
        "witness failed re-verification"
    );
    Outcome::fail(
        json!({"pass": false, "witness": four_point_witness_json(metric.ground(), w)}),
        format!(
            "four-point condition fails on ({}) with sums {}, {}, {}",
            w.quad
                .iter()
                .map(|&i| metric.ground().label(i).to_string())
                .collect::<Vec<_>>()
                .join(","),
            w.sums[0],
            w.sums[1],
            w.sums[2]
        ),
    )
}

pub fn reconstruct_failure(delta: &FiniteDiversity, failure: &ReconstructFailure) -> Outcome {
    let ground = delta.ground();
    match failure {
        ReconstructFailure::MetricNotAdditive { witness } => {
            let metric = dvy_core::induced_metric(delta);
            let witness_json = match witness {
                Some(w) => {
                    assert!(
                        verify_four_point(&metric, w),
                        "witness failed re-verification"
                    );
                    four_point_witness_json(ground, w)
                }
                None => Value::Null,
            };
            Outcome::fail(
                json!({"ok": false, "reason": "metric-not-additive", "witness": witness_json}),
                "reconstruction failed: the induced metric is not additive".into(),
            )
        }
        ReconstructFailure::HigherOrderMismatch {
            subset,
            expected,
            actual,
        } => {
            assert_eq!(
                delta.value(*subset),
                expected,
                "witness failed re-verification"
            );
            Outcome::fail(
                json!({
                    "ok": false,
                    "reason": "higher-order-mismatch",
                    "subset": names(ground, *subset),
                    "expected": expected.to_string(),
                    "forced": actual.to_string(),
                }),
                format!(
                    "reconstruction failed: value({{{}}}) = {expected} but the pairwise tree forces {actual}",
                    ground.names_of(*subset).join(",")
                ),
            )
        }
    }
}

pub fn steiner_tree(instance: &MetricInstance, tree: &SteinerTree) -> Outcome {
    let node_names = instance.node_names();
    let edges: Vec<Value> = tree
        .edges
        .iter()
        .map(|(u, v)| {
            let w = instance
                .direct_weight(*u, *v)
                .expect("tree uses direct edges");
            json!([node_names[*u], node_names[*v], w.to_string()])
        })
        .collect();
    Outcome::pass(
        json!({"length": tree.length.to_string(), "edges": edges}),
        format!(
            "length {} over {} edges",
            tree.length,
            tree.edges.len()
        ),
    )
}

fn topology_tree_json(labels: &[String], sol: &SteinerSolution) -> Value {
    let name = |node: TopNode| -> String {
        match node {
            TopNode::Terminal(i) => labels[i].clone(),
            TopNode::Steiner(i) => format!("s{}", i + 1),
        }
    };
    let mut nodes: Vec<String> = (0..sol.topology.n_terminals())
        .map(|i| labels[i].clone())
        .collect();
    for i in 0..sol.topology.n_steiner() {
        nodes.push(format!("s{}", i + 1));
    }
    let edges: Vec<Value> = sol
        .topology
        .edges()
        .iter()
        .zip(&sol.weights)
        .map(|((a, b), w)| json!([name(*a), name(*b), w.to_string()]))
        .collect();
    json!({"nodes": nodes, "edges": edges})
}

pub fn steiner_solution(labels: &[String], sol: &SteinerSolution) -> Outcome {
    let tree = topology_tree_json(labels, sol);
    Outcome::pass(
        json!({"length": sol.length.to_string(), "tree": tree}),
        format!(
            "length {} using {} internal node(s)",
            sol.length,
            sol.topology.n_steiner()
        ),
    )
}

pub fn ladder(instance: &MetricInstance, ladder: &BoundLadder) -> Outcome {
    let labels = instance.terminal_names();
    let node_names = instance.node_names();
    let mut bounds = BTreeMap::new();
    let mut trees = BTreeMap::new();
    for (k, sol) in &ladder.bounds {
        bounds.insert(k.to_string(), sol.length.to_string());
        trees.insert(k.to_string(), topology_tree_json(&labels, sol));
    }
    let exact_edges: Vec<Value> = ladder
        .exact
        .edges
        .iter()
        .map(|(u, v)| {
            let w = instance
                .direct_weight(*u, *v)
                .expect("tree uses direct edges");
            json!([node_names[*u], node_names[*v], w.to_string()])
        })
        .collect();
    trees.insert("exact".to_string(), json!({"edges": exact_edges}));
    let pretty = ladder
        .bounds
        .iter()
        .map(|(k, sol)| format!("k={k}: {}", sol.length))
        .chain(std::iter::once(format!("exact: {}", ladder.exact.length)))
        .collect::<Vec<_>>()
        .join("\n");
    Outcome::pass(
        json!({
            "bounds": bounds,
            "exact": ladder.exact.length.to_string(),
            "trees": trees,
        }),
        pretty,
    )
}

pub fn pretty_metric(metric: &FiniteMetric) -> String {
    let ground = metric.ground();
    let mut lines = Vec::new();
    for i in 0..ground.len() {
        for j in i + 1..ground.len() {
            lines.push(format!(
                "d({},{}) = {}",
                ground.label(i),
                ground.label(j),
                metric.dist(i, j)
            ));
        }
    }
    lines.join("\n")
}

pub fn pretty_diversity(delta: &FiniteDiversity) -> String {
    let ground = delta.ground();
    let mut masks: Vec<SubsetMask> = ground.masks().filter(|m| m.card() >= 2).collect();
    masks.sort_by_key(|m| (m.card(), m.bits()));
    masks
        .into_iter()
        .map(|m| {
            format!(
                "value({{{}}}) = {}",
                ground.names_of(m).join(","),
                delta.value(m)
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn pretty_function(f: &SpanFunction) -> String {
    let ground = f.ground();
    let mut masks: Vec<SubsetMask> = ground.masks().filter(|m| !m.is_empty()).collect();
    masks.sort_by_key(|m| (m.card(), m.bits()));
    masks
        .into_iter()
        .map(|m| {
            format!(
                "f({{{}}}) = {}",
                ground.names_of(m).join(","),
                f.value(m)
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn pretty_tree(tree: &WeightedTree) -> String {
    tree.edges()
        .iter()
        .map(|(u, v, w)| {
            format!(
                "{} - {}: {}",
                tree.nodes()[*u],
                tree.nodes()[*v],
                w
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn point_str(p: &[Rat; 3]) -> String {
    format!("({}, {}, {})", p[0], p[1], p[2])
}

pub fn pretty_complex(c: &ThreePointComplex) -> String {
    let mut lines = vec![format!("beta = {}", c.beta)];
    for (i, v) in c.v.iter().enumerate() {
        lines.push(format!("v{} = {}", i + 1, point_str(v)));
    }
    for (i, u) in c.u.iter().enumerate() {
        lines.push(format!("u{} = {}", i, point_str(u)));
    }
    lines.join("\n")
}
