//! Fixed annotation vocabulary shared by the metric engine, the graph
//! annotation maps and the knowledge store write-back.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Per-node measures written by [`crate::metrics::annotate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeMetric {
    InDegree,
    OutDegree,
    TotalDegree,
    Reach,
    ClosenessOut,
    ClosenessIn,
    Betweenness,
}

/// Whole-graph measures written by [`crate::metrics::annotate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphMetric {
    Density,
    Diameter,
    UnreachablePairs,
    ComponentCount,
    CommunityCount,
    Modularity,
}

impl NodeMetric {
    pub const ALL: [NodeMetric; 7] = [
        NodeMetric::InDegree,
        NodeMetric::OutDegree,
        NodeMetric::TotalDegree,
        NodeMetric::Reach,
        NodeMetric::ClosenessOut,
        NodeMetric::ClosenessIn,
        NodeMetric::Betweenness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeMetric::InDegree => "in_degree",
            NodeMetric::OutDegree => "out_degree",
            NodeMetric::TotalDegree => "total_degree",
            NodeMetric::Reach => "reach",
            NodeMetric::ClosenessOut => "closeness_out",
            NodeMetric::ClosenessIn => "closeness_in",
            NodeMetric::Betweenness => "betweenness",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == name)
    }
}

impl GraphMetric {
    pub const ALL: [GraphMetric; 6] = [
        GraphMetric::Density,
        GraphMetric::Diameter,
        GraphMetric::UnreachablePairs,
        GraphMetric::ComponentCount,
        GraphMetric::CommunityCount,
        GraphMetric::Modularity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphMetric::Density => "density",
            GraphMetric::Diameter => "diameter",
            GraphMetric::UnreachablePairs => "unreachable_pairs",
            GraphMetric::ComponentCount => "component_count",
            GraphMetric::CommunityCount => "community_count",
            GraphMetric::Modularity => "modularity",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == name)
    }
}

impl fmt::Display for NodeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for GraphMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
