use super::community::communities;
use super::groups::components;
use super::paths::{betweenness_of, closeness_from, diameter_of, geodesics_of};
use super::{degrees_in, Adjacency, GraphMetrics, NodeMetrics};
use crate::graph::SocialGraph;
use crate::vocabulary::{GraphMetric, NodeMetric};

pub fn node_metrics(g: &SocialGraph) -> Vec<NodeMetrics> {
    let adj = Adjacency::new(g);
    let geo = geodesics_of(&adj);
    let betweenness = betweenness_of(&adj);
    let n = adj.len();
    (0..n)
        .map(|v| {
            let (in_degree, out_degree, total_degree) = degrees_in(&adj, v);
            let column: Vec<Option<u32>> = (0..n).map(|u| geo.get(u, v)).collect();
            NodeMetrics {
                in_degree,
                out_degree,
                total_degree,
                reach: geo
                    .row(v)
                    .iter()
                    .enumerate()
                    .filter(|&(u, d)| u != v && d.is_some_and(|d| d <= 2))
                    .count(),
                closeness_out: closeness_from(geo.row(v), v),
                closeness_in: closeness_from(&column, v),
                betweenness: betweenness[v],
            }
        })
        .collect()
}

pub fn graph_metrics(g: &SocialGraph) -> GraphMetrics {
    let n = g.node_count();
    let partition = communities(g);
    let (diameter, unreachable) = if n >= 2 {
        let (d, u) = diameter_of(&geodesics_of(&Adjacency::new(g)));
        (Some(d), Some(u))
    } else {
        (None, None)
    };
    GraphMetrics {
        density: super::density(g).ok(),
        diameter,
        unreachable_pairs: unreachable,
        component_count: components(g).len(),
        community_count: partition.communities.len(),
        modularity: partition.modularity,
    }
}

/// Returns `g` with the graph-level and per-node annotation maps filled in.
/// Existing annotations are replaced, so the operation is idempotent.
/// Density, diameter and unreachable pairs are omitted below two nodes.
pub fn annotate(g: &SocialGraph) -> SocialGraph {
    let mut out = g.clone();
    out.clear_annotations();

    let gm = graph_metrics(g);
    if let Some(d) = gm.density {
        out.set_annotation(GraphMetric::Density, d);
    }
    if let Some(d) = gm.diameter {
        out.set_annotation(GraphMetric::Diameter, f64::from(d));
    }
    if let Some(u) = gm.unreachable_pairs {
        out.set_annotation(GraphMetric::UnreachablePairs, u as f64);
    }
    out.set_annotation(GraphMetric::ComponentCount, gm.component_count as f64);
    out.set_annotation(GraphMetric::CommunityCount, gm.community_count as f64);
    out.set_annotation(GraphMetric::Modularity, gm.modularity);

    for (v, m) in node_metrics(g).into_iter().enumerate() {
        for (metric, value) in [
            (NodeMetric::InDegree, m.in_degree as f64),
            (NodeMetric::OutDegree, m.out_degree as f64),
            (NodeMetric::TotalDegree, m.total_degree as f64),
            (NodeMetric::Reach, m.reach as f64),
            (NodeMetric::ClosenessOut, m.closeness_out),
            (NodeMetric::ClosenessIn, m.closeness_in),
            (NodeMetric::Betweenness, m.betweenness),
        ] {
            out.set_node_annotation(v, metric, value);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn annotate_examples() {
        let a = annotate(&cyc3());
        assert_eq!(a.annotation(GraphMetric::Density), Some(0.5));
        assert_eq!(a.annotations().len(), 6);
        assert_eq!(annotate(&a), a);

        let l = annotate(&line4());
        assert_eq!(l.node_annotation(1, NodeMetric::Betweenness), Some(2.0));
        assert_eq!(l.node_annotation(0, NodeMetric::ClosenessOut), Some(0.5));
        assert_eq!(l.annotation(GraphMetric::Diameter), Some(3.0));
    }

    #[test]
    fn single_node_annotations() {
        let g = graph("s", true, &["a"], &[]);
        let a = annotate(&g);
        assert_eq!(a.annotation(GraphMetric::Density), None);
        assert_eq!(a.annotation(GraphMetric::CommunityCount), Some(1.0));
        assert_eq!(a.node_annotation(0, NodeMetric::Reach), Some(0.0));
    }
}
