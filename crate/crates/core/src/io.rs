//! JSON file formats.
//!
//! Sets serialize as sorted element-name lists; scalars as canonical
//! rational strings (integers stay bare in input, print as `"p"`).
//! Formats:
//!
//! - diversity: `{"elements": [...], "values": [{"set": [...], "value": v}]}`
//!   (empty set and singletons may be omitted; larger subsets must all be
//!   present)
//! - metric: `{"elements": [...], "matrix": [[...]]}`
//! - point set: `{"elements": [...], "coords": [[...]]}`
//! - span function: `{"elements": [...], "function": [{"set": ..., "value": ...}]}`
//!   (all nonempty subsets required)
//! - tree: `{"nodes": [...], "edges": [["u","v","3/2"], ...], "leaves": [...]}`
//! - graph: `{"nodes": [...], "edges": [["u","v","4"], ...], "terminals": [...]}`
//! - extension constraints: `{"constraints": [{"radius": r, "functions": [...]}]}`

use serde::{Deserialize, Serialize};

use crate::diversity::{FiniteDiversity, FiniteMetric, PointSet};
use crate::error::{Error, Result};
use crate::ground::{GroundSet, SubsetMask};
use crate::phylo::WeightedTree;
use crate::rat::Rat;
use crate::steiner::{Graph, MetricInstance};
use crate::tightspan::{Constraint, SpanFunction, ThreePointComplex};

#[derive(Serialize, Deserialize)]
pub struct SubsetValue {
    pub set: Vec<String>,
    pub value: Rat,
}

#[derive(Serialize, Deserialize)]
pub struct DiversityJson {
    pub elements: Vec<String>,
    pub values: Vec<SubsetValue>,
}

#[derive(Serialize, Deserialize)]
pub struct MetricJson {
    pub elements: Vec<String>,
    pub matrix: Vec<Vec<Rat>>,
}

#[derive(Serialize, Deserialize)]
pub struct PointSetJson {
    pub elements: Vec<String>,
    pub coords: Vec<Vec<Rat>>,
}

#[derive(Serialize, Deserialize)]
pub struct FunctionJson {
    pub elements: Vec<String>,
    pub function: Vec<SubsetValue>,
}

#[derive(Serialize, Deserialize)]
pub struct TreeJson {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, Rat)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaves: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, Rat)>,
    pub terminals: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct ConstraintJson {
    pub radius: Rat,
    pub functions: Vec<FunctionJson>,
}

#[derive(Serialize, Deserialize)]
pub struct ConstraintsJson {
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Serialize)]
pub struct Complex3Json {
    pub beta: Rat,
    pub v: Vec<Vec<Rat>>,
    pub u: Vec<Vec<Rat>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("bad JSON: {e}")))
}

/// Reads the raw (ground, total value map) of a diversity file without
/// checking the axioms; the empty set and singletons default to zero,
/// every larger subset must be present exactly once.
pub fn read_diversity_raw(text: &str) -> Result<(GroundSet, Vec<Rat>)> {
    let json: DiversityJson = parse(text)?;
    let ground = GroundSet::new(json.elements)?;
    let mut values: Vec<Option<Rat>> = vec![None; ground.subset_count()];
    values[0] = Some(Rat::zero());
    for entry in json.values {
        let mask = ground.mask_of(&entry.set)?;
        if values[mask.index()].is_some() {
            return Err(Error::Input(format!(
                "duplicate entry for {{{}}}",
                entry.set.join(",")
            )));
        }
        values[mask.index()] = Some(entry.value);
    }
    let mut out = Vec::with_capacity(values.len());
    for m in ground.masks() {
        match (&values[m.index()], m.card()) {
            (Some(v), _) => out.push(v.clone()),
            (None, 0 | 1) => out.push(Rat::zero()),
            (None, _) => {
                return Err(Error::Input(format!(
                    "missing value for {{{}}}",
                    ground.names_of(m).join(",")
                )))
            }
        }
    }
    Ok((ground, out))
}

pub fn write_diversity(delta: &FiniteDiversity) -> DiversityJson {
    let ground = delta.ground();
    let mut masks: Vec<SubsetMask> = ground.masks().filter(|m| m.card() >= 2).collect();
    masks.sort_by_key(|m| (m.card(), m.bits()));
    DiversityJson {
        elements: ground.labels().to_vec(),
        values: masks
            .into_iter()
            .map(|m| SubsetValue {
                set: ground.names_of(m),
                value: delta.value(m).clone(),
            })
            .collect(),
    }
}

pub fn read_metric(text: &str) -> Result<FiniteMetric> {
    let json: MetricJson = parse(text)?;
    let ground = GroundSet::new(json.elements)?;
    FiniteMetric::new(ground, json.matrix)
}

pub fn write_metric(metric: &FiniteMetric) -> MetricJson {
    MetricJson {
        elements: metric.ground().labels().to_vec(),
        matrix: metric.matrix().to_vec(),
    }
}

pub fn read_points(text: &str) -> Result<PointSet> {
    let json: PointSetJson = parse(text)?;
    let ground = GroundSet::new(json.elements)?;
    PointSet::new(ground, json.coords)
}

/// Reads a span function; all nonempty subsets are required, the empty
/// set is optional and must be zero when present.
pub fn read_function(text: &str) -> Result<SpanFunction> {
    let json: FunctionJson = parse(text)?;
    read_function_json(json)
}

pub fn read_function_json(json: FunctionJson) -> Result<SpanFunction> {
    let ground = GroundSet::new(json.elements)?;
    let mut values: Vec<Option<Rat>> = vec![None; ground.subset_count()];
    for entry in json.function {
        let mask = ground.mask_of(&entry.set)?;
        if values[mask.index()].is_some() {
            return Err(Error::Input(format!(
                "duplicate entry for {{{}}}",
                entry.set.join(",")
            )));
        }
        values[mask.index()] = Some(entry.value);
    }
    if values[0].is_none() {
        values[0] = Some(Rat::zero());
    }
    let mut out = Vec::with_capacity(values.len());
    for m in ground.masks() {
        match &values[m.index()] {
            Some(v) => out.push(v.clone()),
            None => {
                return Err(Error::Input(format!(
                    "missing value for {{{}}}",
                    ground.names_of(m).join(",")
                )))
            }
        }
    }
    SpanFunction::new(ground, out)
}

pub fn write_function(f: &SpanFunction) -> FunctionJson {
    let ground = f.ground();
    let mut masks: Vec<SubsetMask> = ground.masks().filter(|m| !m.is_empty()).collect();
    masks.sort_by_key(|m| (m.card(), m.bits()));
    FunctionJson {
        elements: ground.labels().to_vec(),
        function: masks
            .into_iter()
            .map(|m| SubsetValue {
                set: ground.names_of(m),
                value: f.value(m).clone(),
            })
            .collect(),
    }
}

pub fn read_tree(text: &str) -> Result<WeightedTree> {
    let json: TreeJson = parse(text)?;
    WeightedTree::new(json.nodes, json.edges, json.leaves)
}

pub fn write_tree(tree: &WeightedTree) -> TreeJson {
    TreeJson {
        nodes: tree.nodes().to_vec(),
        edges: tree
            .edges()
            .iter()
            .map(|(u, v, w)| {
                (
                    tree.nodes()[*u].clone(),
                    tree.nodes()[*v].clone(),
                    w.clone(),
                )
            })
            .collect(),
        leaves: tree.leaf_labels().map(|l| l.to_vec()),
    }
}

pub fn read_graph_instance(text: &str) -> Result<MetricInstance> {
    let json: GraphJson = parse(text)?;
    let graph = Graph::new(json.nodes, json.edges)?;
    MetricInstance::from_graph(graph, &json.terminals)
}

pub fn read_constraints(text: &str, delta_ground: &GroundSet) -> Result<Vec<Constraint>> {
    let json: ConstraintsJson = parse(text)?;
    let mut out = Vec::new();
    for c in json.constraints {
        let mut family = Vec::new();
        for f in c.functions {
            let func = read_function_json(f)?;
            if func.ground() != delta_ground {
                return Err(Error::GroundMismatch);
            }
            family.push(func);
        }
        out.push(Constraint::new(family, c.radius)?);
    }
    Ok(out)
}

pub fn write_complex(c: &ThreePointComplex) -> Complex3Json {
    Complex3Json {
        beta: c.beta.clone(),
        v: c.v.iter().map(|p| p.to_vec()).collect(),
        u: c.u.iter().map(|p| p.to_vec()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::CheckMode;

    #[test]
    fn diversity_round_trip() {
        let text = r#"{
            "elements": ["a", "b", "c"],
            "values": [
                {"set": ["a", "b"], "value": 2},
                {"set": ["a", "c"], "value": "2"},
                {"set": ["b", "c"], "value": "2"},
                {"set": ["a", "b", "c"], "value": "3"}
            ]
        }"#;
        let (ground, values) = read_diversity_raw(text).unwrap();
        let delta = FiniteDiversity::new(ground, values, CheckMode::Full).unwrap();
        assert_eq!(*delta.value(SubsetMask(0b111)), Rat::from_int(3));
        let out = write_diversity(&delta);
        let (g2, v2) = read_diversity_raw(&serde_json::to_string(&out).unwrap()).unwrap();
        assert_eq!(g2, *delta.ground());
        assert_eq!(v2, delta.values());
    }

    #[test]
    fn diversity_missing_subset_rejected() {
        let text = r#"{
            "elements": ["a", "b", "c"],
            "values": [{"set": ["a", "b"], "value": 2}]
        }"#;
        assert!(matches!(read_diversity_raw(text), Err(Error::Input(_))));
    }

    #[test]
    fn decimal_strings_parse_exactly() {
        let text = r#"{
            "elements": ["a", "b"],
            "values": [{"set": ["a", "b"], "value": "0.6"}]
        }"#;
        let (_, values) = read_diversity_raw(text).unwrap();
        assert_eq!(values[3], Rat::frac(3, 5));
    }

    #[test]
    fn float_values_rejected() {
        let text = r#"{
            "elements": ["a", "b"],
            "values": [{"set": ["a", "b"], "value": 0.6}]
        }"#;
        assert!(read_diversity_raw(text).is_err());
    }

    #[test]
    fn function_requires_singletons() {
        let text = r#"{
            "elements": ["a", "b"],
            "function": [{"set": ["a", "b"], "value": "2"}]
        }"#;
        assert!(read_function(text).is_err());
        let full = r#"{
            "elements": ["a", "b"],
            "function": [
                {"set": ["a"], "value": "0"},
                {"set": ["b"], "value": "2"},
                {"set": ["a", "b"], "value": "2"}
            ]
        }"#;
        let f = read_function(full).unwrap();
        assert_eq!(*f.value(SubsetMask(0b10)), Rat::from_int(2));
    }

    #[test]
    fn tree_and_graph_formats() {
        let tree = read_tree(
            r#"{"nodes": ["a", "b"], "edges": [["a", "b", "3/2"]], "leaves": ["a", "b"]}"#,
        )
        .unwrap();
        assert_eq!(tree.total_weight(), Rat::frac(3, 2));
        let json = write_tree(&tree);
        assert_eq!(json.edges.len(), 1);

        let instance = read_graph_instance(
            r#"{"nodes": ["u", "v"], "edges": [["u", "v", "4"]], "terminals": ["u", "v"]}"#,
        )
        .unwrap();
        assert_eq!(instance.terminal_names(), vec!["u", "v"]);
    }
}
