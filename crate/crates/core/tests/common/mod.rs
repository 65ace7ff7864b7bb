#![allow(dead_code)]

use classnet_core::graph::{Attributes, SocialGraph};
use classnet_oracle::OracleGraph;

pub fn to_social(g: &OracleGraph) -> SocialGraph {
    let mut out = SocialGraph::new("corpus", g.directed, g.weighted);
    for v in 0..g.n {
        out.add_node(&format!("n{v}"), Attributes::new()).unwrap();
    }
    for (u, v, w) in g.ties() {
        out.add_tie(u, v, w).unwrap();
    }
    out
}

pub fn undirected(g: &OracleGraph) -> OracleGraph {
    let mut weights = g.weights.clone();
    for u in 0..g.n {
        for v in 0..g.n {
            if g.weights[u][v].is_some() {
                weights[v][u] = weights[v][u].or(g.weights[u][v]);
            }
        }
    }
    OracleGraph {
        n: g.n,
        directed: false,
        weights,
        weighted: false,
    }
}
