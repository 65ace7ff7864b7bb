//! Social network analysis measures.
//!
//! All distances are hop counts. On directed graphs only direction-respecting
//! paths are considered; undirected graphs count each unordered pair once
//! where a measure sums over pairs.

mod annotate;
mod community;
mod groups;
mod paths;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, SocialGraph};

pub use annotate::{annotate, graph_metrics, node_metrics};
pub use community::{communities, modularity, Partition};
pub use groups::{
    cliques, components, k_plexes, n_cliques, triads, GroupEnumerator, DEFAULT_MAX_ENUMERATION_NODES,
};
pub use paths::{
    betweenness, betweenness_all, closeness, closeness_all, diameter, ego_mediation, geodesic_matrix,
    normalized_betweenness, Geodesics,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("density is undefined for {0} node(s); at least 2 are required")]
    UndefinedDensity(usize),
    #[error("diameter is undefined for {0} node(s); at least 2 are required")]
    UndefinedDiameter(usize),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("n-degree is only defined for n = 1 or n = 2, got {0}")]
    UnsupportedDegreeOrder(u32),
    #[error("operation requires an undirected graph")]
    RequiresUndirected,
    #[error("operation requires a directed graph")]
    RequiresDirected,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph has {nodes} nodes, above the enumeration limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Component,
    Clique,
    NClique,
    KPlex,
    Triad,
    Community,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupStructure {
    pub kind: GroupKind,
    /// Sorted ascending.
    pub members: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<u32>,
}

impl GroupStructure {
    pub(crate) fn new(kind: GroupKind, mut members: Vec<NodeId>, parameter: Option<u32>) -> Self {
        members.sort_unstable();
        GroupStructure {
            kind,
            members,
            parameter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub in_degree: usize,
    pub out_degree: usize,
    pub total_degree: usize,
    pub reach: usize,
    pub closeness_out: f64,
    pub closeness_in: f64,
    pub betweenness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    /// `None` below two nodes.
    pub density: Option<f64>,
    pub diameter: Option<u32>,
    pub unreachable_pairs: Option<usize>,
    pub component_count: usize,
    pub community_count: usize,
    pub modularity: f64,
}

/// Sorted out- and in-neighbour lists. For undirected graphs both lists hold
/// the neighbourhood.
#[derive(Debug, Clone)]
pub(crate) struct Adjacency {
    pub directed: bool,
    pub out: Vec<Vec<NodeId>>,
    pub inc: Vec<Vec<NodeId>>,
}

impl Adjacency {
    pub fn new(g: &SocialGraph) -> Self {
        let n = g.node_count();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for tie in g.ties() {
            out[tie.src].push(tie.dst);
            inc[tie.dst].push(tie.src);
            if !g.is_directed() {
                out[tie.dst].push(tie.src);
                inc[tie.src].push(tie.dst);
            }
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_unstable();
        }
        Adjacency {
            directed: g.is_directed(),
            out,
            inc,
        }
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn neighbours(&self, v: NodeId, direction: Direction) -> &[NodeId] {
        match direction {
            Direction::Out => &self.out[v],
            Direction::In => &self.inc[v],
        }
    }

    /// Symmetric boolean matrix of the undirected projection.
    pub fn undirected_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut m = vec![vec![false; n]; n];
        for (u, list) in self.out.iter().enumerate() {
            for &v in list {
                m[u][v] = true;
                m[v][u] = true;
            }
        }
        m
    }
}

fn check_node(g: &SocialGraph, v: NodeId) -> Result<(), MetricError> {
    if v < g.node_count() {
        Ok(())
    } else {
        Err(MetricError::UnknownNode(v))
    }
}

/// Realized ties over possible ties: `m / n(n-1)` directed, `m / (n(n-1)/2)`
/// undirected.
pub fn density(g: &SocialGraph) -> Result<f64, MetricError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricError::UndefinedDensity(n));
    }
    let possible = if g.is_directed() { n * (n - 1) } else { n * (n - 1) / 2 };
    Ok(g.tie_count() as f64 / possible as f64)
}

/// `(in, out, total)`. Total counts distinct neighbours; undirected graphs
/// report the incident edge count three times.
pub fn degrees(g: &SocialGraph, v: NodeId) -> Result<(usize, usize, usize), MetricError> {
    check_node(g, v)?;
    let adj = Adjacency::new(g);
    Ok(degrees_in(&adj, v))
}

pub(crate) fn degrees_in(adj: &Adjacency, v: NodeId) -> (usize, usize, usize) {
    let (inc, out) = (&adj.inc[v], &adj.out[v]);
    if !adj.directed {
        return (out.len(), out.len(), out.len());
    }
    // Both lists are sorted: count the union with a merge.
    let (mut i, mut j, mut total) = (0, 0, 0);
    while i < inc.len() || j < out.len() {
        match (inc.get(i), out.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => i += 1,
            (Some(_), None) => i += 1,
            _ => j += 1,
        }
        total += 1;
    }
    (inc.len(), out.len(), total)
}

/// Number of other actors within `n` hops (out-direction on directed
/// graphs). `n_degree(g, v, 2)` is the reach.
pub fn n_degree(g: &SocialGraph, v: NodeId, n: u32) -> Result<usize, MetricError> {
    check_node(g, v)?;
    if !(1..=2).contains(&n) {
        return Err(MetricError::UnsupportedDegreeOrder(n));
    }
    let adj = Adjacency::new(g);
    Ok(n_degree_in(&adj, v, n))
}

pub(crate) fn n_degree_in(adj: &Adjacency, v: NodeId, n: u32) -> usize {
    let dist = paths::bfs(adj, v, Direction::Out);
    dist.iter()
        .enumerate()
        .filter(|&(u, d)| u != v && d.is_some_and(|d| d <= n))
        .count()
}

pub fn reach(g: &SocialGraph, v: NodeId) -> Result<usize, MetricError> {
    n_degree(g, v, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn density_examples() {
        assert_eq!(density(&k3d()).unwrap(), 1.0);
        assert_eq!(density(&cyc3()).unwrap(), 0.5);
        assert_eq!(density(&line4()).unwrap(), 0.5);
        let single = graph("s", true, &["a"], &[]);
        assert_eq!(density(&single), Err(MetricError::UndefinedDensity(1)));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degrees(&star4(), 0).unwrap(), (3, 3, 3));
        assert_eq!(degrees(&cyc3(), 0).unwrap(), (1, 1, 2));
        assert_eq!(degrees(&k3d(), 0).unwrap(), (2, 2, 2));
        let iso = graph("i", true, &["a", "b"], &[]);
        assert_eq!(degrees(&iso, 0).unwrap(), (0, 0, 0));
        assert_eq!(degrees(&iso, 5), Err(MetricError::UnknownNode(5)));
    }

    #[test]
    fn n_degree_examples() {
        assert_eq!(n_degree(&line4(), 1, 1).unwrap(), 2);
        assert_eq!(n_degree(&line4(), 1, 2).unwrap(), 3);
        assert_eq!(n_degree(&cyc3(), 0, 2).unwrap(), 2);
        assert_eq!(reach(&star4(), 1).unwrap(), 3);
        assert_eq!(n_degree(&line4(), 0, 3), Err(MetricError::UnsupportedDegreeOrder(3)));
        assert_eq!(n_degree(&line4(), 0, 0), Err(MetricError::UnsupportedDegreeOrder(0)));
    }
}
