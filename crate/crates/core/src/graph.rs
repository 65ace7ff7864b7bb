//! Directed or undirected, optionally weighted graphs of persons.
//!
//! Node ids are dense and assigned in insertion order. Undirected ties are
//! stored once under the `(min, max)` endpoint pair. Tie weights are the
//! integer contact levels 1..=5 of the friendship question and are never
//! interpreted as path lengths.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocabulary::{GraphMetric, NodeMetric};

pub type NodeId = usize;

pub const MIN_WEIGHT: u8 = 1;
pub const MAX_WEIGHT: u8 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node label must not be empty")]
    EmptyLabel,
    #[error("node label {0:?} contains a double quote or a control character")]
    InvalidLabel(String),
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("self-tie on node {0}")]
    SelfTie(NodeId),
    #[error("tie weight {0} outside 1..=5")]
    WeightOutOfRange(u8),
    #[error("weighted graph requires a weight on every tie")]
    MissingWeight,
    #[error("unweighted graph cannot carry tie weights")]
    UnexpectedWeight,
    #[error("operation requires a weighted graph")]
    NotWeighted,
    #[error("operation requires a directed graph")]
    NotDirected,
}

/// Scalar node attribute (gender, audit_zone, fas_band, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl AttrValue {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            AttrValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<&str> for AttrValue {
    fn from(s: &str) -> Self {
        AttrValue::Text(s.to_owned())
    }
}

impl From<String> for AttrValue {
    fn from(s: String) -> Self {
        AttrValue::Text(s)
    }
}

impl From<i64> for AttrValue {
    fn from(v: i64) -> Self {
        AttrValue::Int(v)
    }
}

impl From<f64> for AttrValue {
    fn from(v: f64) -> Self {
        AttrValue::Real(v)
    }
}

pub type Attributes = BTreeMap<String, AttrValue>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRef {
    pub id: NodeId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub label: String,
    #[serde(default)]
    pub attrs: Attributes,
    #[serde(default)]
    pub annotations: BTreeMap<NodeMetric, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tie {
    pub src: NodeId,
    pub dst: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct SocialGraph {
    name: String,
    directed: bool,
    weighted: bool,
    nodes: Vec<Node>,
    labels: BTreeMap<String, NodeId>,
    ties: BTreeMap<(NodeId, NodeId), Option<u8>>,
    annotations: BTreeMap<GraphMetric, f64>,
}

impl SocialGraph {
    pub fn new(name: impl Into<String>, directed: bool, weighted: bool) -> Self {
        SocialGraph {
            name: name.into(),
            directed,
            weighted,
            nodes: Vec::new(),
            labels: BTreeMap::new(),
            ties: BTreeMap::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn tie_count(&self) -> usize {
        self.ties.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Node, GraphError> {
        self.nodes.get(id).ok_or(GraphError::UnknownNode(id))
    }

    pub fn node_by_label(&self, label: &str) -> Option<&Node> {
        self.labels.get(label).map(|&id| &self.nodes[id])
    }

    pub fn add_node(&mut self, label: &str, attrs: Attributes) -> Result<NodeRef, GraphError> {
        validate_label(label)?;
        if self.labels.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_owned()));
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            label: label.to_owned(),
            attrs,
            annotations: BTreeMap::new(),
        });
        self.labels.insert(label.to_owned(), id);
        Ok(NodeRef {
            id,
            label: label.to_owned(),
        })
    }

    pub fn set_attr(&mut self, id: NodeId, name: &str, value: AttrValue) -> Result<(), GraphError> {
        let node = self.nodes.get_mut(id).ok_or(GraphError::UnknownNode(id))?;
        node.attrs.insert(name.to_owned(), value);
        Ok(())
    }

    /// Adds or re-weights the tie `src -> dst` (or `{src, dst}` when undirected).
    pub fn add_tie(&mut self, src: NodeId, dst: NodeId, weight: Option<u8>) -> Result<(), GraphError> {
        for id in [src, dst] {
            if id >= self.nodes.len() {
                return Err(GraphError::UnknownNode(id));
            }
        }
        if src == dst {
            return Err(GraphError::SelfTie(src));
        }
        match (self.weighted, weight) {
            (true, None) => return Err(GraphError::MissingWeight),
            (false, Some(_)) => return Err(GraphError::UnexpectedWeight),
            (true, Some(w)) if !(MIN_WEIGHT..=MAX_WEIGHT).contains(&w) => {
                return Err(GraphError::WeightOutOfRange(w))
            }
            _ => {}
        }
        self.ties.insert(self.key(src, dst), weight);
        Ok(())
    }

    fn key(&self, src: NodeId, dst: NodeId) -> (NodeId, NodeId) {
        if self.directed {
            (src, dst)
        } else {
            (src.min(dst), src.max(dst))
        }
    }

    /// `Some(weight)` when the tie exists; the inner option is the weight.
    pub fn tie(&self, src: NodeId, dst: NodeId) -> Option<Option<u8>> {
        self.ties.get(&self.key(src, dst)).copied()
    }

    pub fn has_tie(&self, src: NodeId, dst: NodeId) -> bool {
        self.tie(src, dst).is_some()
    }

    /// Ties in ascending `(src, dst)` order.
    pub fn ties(&self) -> impl Iterator<Item = Tie> + '_ {
        self.ties.iter().map(|(&(src, dst), &weight)| Tie { src, dst, weight })
    }

    pub fn annotations(&self) -> &BTreeMap<GraphMetric, f64> {
        &self.annotations
    }

    pub fn annotation(&self, metric: GraphMetric) -> Option<f64> {
        self.annotations.get(&metric).copied()
    }

    pub fn node_annotation(&self, id: NodeId, metric: NodeMetric) -> Option<f64> {
        self.nodes.get(id)?.annotations.get(&metric).copied()
    }

    pub(crate) fn set_annotation(&mut self, metric: GraphMetric, value: f64) {
        self.annotations.insert(metric, value);
    }

    pub(crate) fn set_node_annotation(&mut self, id: NodeId, metric: NodeMetric, value: f64) {
        self.nodes[id].annotations.insert(metric, value);
    }

    pub(crate) fn clear_annotations(&mut self) {
        self.annotations.clear();
        for node in &mut self.nodes {
            node.annotations.clear();
        }
    }

    /// Same nodes (attributes kept, annotations dropped), no ties.
    pub fn empty_like(&self, name: &str, directed: bool, weighted: bool) -> SocialGraph {
        let mut g = SocialGraph::new(name, directed, weighted);
        g.nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                annotations: BTreeMap::new(),
                ..n.clone()
            })
            .collect();
        g.labels = self.labels.clone();
        g
    }

    /// Keeps the ties whose weight is at least `min_weight`.
    pub fn filter_min_weight(&self, min_weight: u8) -> Result<SocialGraph, GraphError> {
        if !self.weighted {
            return Err(GraphError::NotWeighted);
        }
        if !(MIN_WEIGHT..=MAX_WEIGHT).contains(&min_weight) {
            return Err(GraphError::WeightOutOfRange(min_weight));
        }
        let mut g = self.empty_like(&self.name, self.directed, true);
        g.ties = self
            .ties
            .iter()
            .filter(|(_, w)| w.is_some_and(|w| w >= min_weight))
            .map(|(&k, &w)| (k, w))
            .collect();
        Ok(g)
    }

    /// Undirected, unweighted graph with `{u, v}` iff both `u -> v` and
    /// `v -> u` exist with weight at least `min_weight`.
    pub fn mutual_projection(&self, min_weight: u8) -> Result<SocialGraph, GraphError> {
        if !self.directed {
            return Err(GraphError::NotDirected);
        }
        let strong = self.filter_min_weight(min_weight)?;
        let mut g = self.empty_like(&self.name, false, false);
        for &(u, v) in strong.ties.keys() {
            if u < v && strong.ties.contains_key(&(v, u)) {
                g.ties.insert((u, v), None);
            }
        }
        Ok(g)
    }

    /// Direction and weights dropped.
    pub fn undirected_projection(&self) -> SocialGraph {
        let mut g = self.empty_like(&self.name, false, false);
        for &(u, v) in self.ties.keys() {
            g.ties.insert((u.min(v), u.max(v)), None);
        }
        g
    }
}

fn validate_label(label: &str) -> Result<(), GraphError> {
    if label.is_empty() {
        return Err(GraphError::EmptyLabel);
    }
    if label.chars().any(|c| c == '"' || c.is_control()) {
        return Err(GraphError::InvalidLabel(label.to_owned()));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    name: String,
    directed: bool,
    weighted: bool,
    nodes: Vec<Node>,
    ties: Vec<Tie>,
    #[serde(default)]
    annotations: BTreeMap<GraphMetric, f64>,
}

impl From<SocialGraph> for GraphRepr {
    fn from(g: SocialGraph) -> Self {
        GraphRepr {
            ties: g.ties().collect(),
            name: g.name,
            directed: g.directed,
            weighted: g.weighted,
            nodes: g.nodes,
            annotations: g.annotations,
        }
    }
}

impl TryFrom<GraphRepr> for SocialGraph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        let mut g = SocialGraph::new(r.name, r.directed, r.weighted);
        for (expected, node) in r.nodes.into_iter().enumerate() {
            if node.id != expected {
                return Err(GraphError::UnknownNode(node.id));
            }
            let id = g.add_node(&node.label, node.attrs)?.id;
            g.nodes[id].annotations = node.annotations;
        }
        for tie in r.ties {
            g.add_tie(tie.src, tie.dst, tie.weight)?;
        }
        g.annotations = r.annotations;
        Ok(g)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn graph(name: &str, directed: bool, labels: &[&str], ties: &[(usize, usize)]) -> SocialGraph {
        let mut g = SocialGraph::new(name, directed, false);
        for l in labels {
            g.add_node(l, Attributes::new()).unwrap();
        }
        for &(u, v) in ties {
            g.add_tie(u, v, None).unwrap();
        }
        g
    }

    pub fn cyc3() -> SocialGraph {
        graph("cyc3", true, &["a", "b", "c"], &[(0, 1), (1, 2), (2, 0)])
    }

    pub fn line4() -> SocialGraph {
        graph("line4", false, &["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3)])
    }

    pub fn star4() -> SocialGraph {
        graph("star4", false, &["s", "x", "y", "z"], &[(0, 1), (0, 2), (0, 3)])
    }

    pub fn k3d() -> SocialGraph {
        graph(
            "k3d",
            true,
            &["a", "b", "c"],
            &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)],
        )
    }

    pub fn weighted(directed: bool, labels: &[&str], ties: &[(usize, usize, u8)]) -> SocialGraph {
        let mut g = SocialGraph::new("weighted", directed, true);
        for l in labels {
            g.add_node(l, Attributes::new()).unwrap();
        }
        for &(u, v, w) in ties {
            g.add_tie(u, v, Some(w)).unwrap();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn add_nodes_and_duplicate_label() {
        let mut g = SocialGraph::new("t", true, false);
        for l in ["a", "b", "c"] {
            g.add_node(l, Attributes::new()).unwrap();
        }
        assert_eq!(g.node_count(), 3);
        assert_eq!(
            g.add_node("a", Attributes::new()),
            Err(GraphError::DuplicateLabel("a".into()))
        );
        assert_eq!(g.add_node("", Attributes::new()), Err(GraphError::EmptyLabel));
    }

    #[test]
    fn attributes_read_back() {
        let mut g = SocialGraph::new("t", true, false);
        let mut attrs = Attributes::new();
        attrs.insert("gender".into(), "F".into());
        let n = g.add_node("a", attrs).unwrap();
        assert_eq!(g.node(n.id).unwrap().attrs["gender"].as_text(), Some("F"));
    }

    #[test]
    fn tie_validation() {
        let mut g = weighted(true, &["a", "b"], &[]);
        g.add_tie(0, 1, Some(4)).unwrap();
        assert_eq!(g.tie(0, 1), Some(Some(4)));
        assert_eq!(g.add_tie(0, 0, Some(3)), Err(GraphError::SelfTie(0)));
        assert_eq!(g.add_tie(0, 1, Some(6)), Err(GraphError::WeightOutOfRange(6)));
        assert_eq!(g.add_tie(0, 1, Some(0)), Err(GraphError::WeightOutOfRange(0)));
        assert_eq!(g.add_tie(0, 7, Some(2)), Err(GraphError::UnknownNode(7)));
        assert_eq!(g.add_tie(0, 1, None), Err(GraphError::MissingWeight));
        g.add_tie(0, 1, Some(2)).unwrap();
        assert_eq!(g.tie(0, 1), Some(Some(2)));
        assert_eq!(g.tie_count(), 1);
    }

    #[test]
    fn undirected_ties_are_symmetric() {
        let g = line4();
        assert!(g.has_tie(1, 0));
        assert!(g.has_tie(0, 1));
        assert_eq!(g.tie_count(), 3);
    }

    #[test]
    fn filter_min_weight_cases() {
        let g = weighted(true, &["a", "b", "c"], &[(0, 1, 2), (1, 2, 3), (2, 0, 5)]);
        assert_eq!(g.filter_min_weight(3).unwrap().tie_count(), 2);
        assert_eq!(g.filter_min_weight(1).unwrap().tie_count(), 3);
        let all4 = weighted(true, &["a", "b"], &[(0, 1, 4), (1, 0, 4)]);
        assert_eq!(all4.filter_min_weight(5).unwrap().tie_count(), 0);
        assert_eq!(cyc3().filter_min_weight(2), Err(GraphError::NotWeighted));
    }

    #[test]
    fn mutual_projection_requires_reciprocity() {
        let g = weighted(true, &["a", "b"], &[(0, 1, 4), (1, 0, 5)]);
        let m = g.mutual_projection(4).unwrap();
        assert!(!m.is_directed());
        assert!(m.has_tie(0, 1));

        let g = weighted(true, &["a", "b"], &[(0, 1, 4), (1, 0, 3)]);
        assert_eq!(g.mutual_projection(4).unwrap().tie_count(), 0);

        let empty = weighted(true, &[], &[]);
        assert_eq!(empty.mutual_projection(4).unwrap().node_count(), 0);
        assert_eq!(line4().mutual_projection(4), Err(GraphError::NotDirected));
    }

    #[test]
    fn json_roundtrip_validates() {
        let g = weighted(true, &["a", "b", "c"], &[(0, 1, 2), (2, 1, 5)]);
        let text = serde_json::to_string(&g).unwrap();
        let back: SocialGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);

        let bad = text.replace("\"weight\":5", "\"weight\":9");
        assert!(serde_json::from_str::<SocialGraph>(&bad).is_err());
    }
}
