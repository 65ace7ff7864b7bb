//! Divisive community detection by repeated removal of the edges with the
//! highest edge betweenness, keeping the partition of maximal modularity.

use std::collections::{BTreeSet, VecDeque};
#[cfg(test)]
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GroupKind, GroupStructure};
use crate::graph::{NodeId, SocialGraph};

const SCORE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub communities: Vec<GroupStructure>,
    pub modularity: f64,
}

/// Newman modularity of `blocks` on the undirected projection of `g`.
/// Zero for graphs without ties.
pub fn modularity(g: &SocialGraph, blocks: &[Vec<NodeId>]) -> f64 {
    let projected = g.undirected_projection();
    let edges: Vec<(NodeId, NodeId)> = projected.ties().map(|t| (t.src, t.dst)).collect();
    modularity_of(g.node_count(), &edges, blocks)
}

fn modularity_of(n: usize, edges: &[(NodeId, NodeId)], blocks: &[Vec<NodeId>]) -> f64 {
    let m = edges.len() as f64;
    if edges.is_empty() {
        return 0.0;
    }
    let mut block_of = vec![usize::MAX; n];
    for (b, members) in blocks.iter().enumerate() {
        for &v in members {
            block_of[v] = b;
        }
    }
    let mut inner = vec![0.0; blocks.len()];
    let mut degree_sum = vec![0.0; blocks.len()];
    for &(u, v) in edges {
        degree_sum[block_of[u]] += 1.0;
        degree_sum[block_of[v]] += 1.0;
        if block_of[u] == block_of[v] {
            inner[block_of[u]] += 1.0;
        }
    }
    inner
        .iter()
        .zip(&degree_sum)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

pub fn communities(g: &SocialGraph) -> Partition {
    let n = g.node_count();
    let projected = g.undirected_projection();
    let all_edges: Vec<(NodeId, NodeId)> = projected.ties().map(|t| (t.src.min(t.dst), t.src.max(t.dst))).collect();
    let mut net = EdgeSet::new(n, &all_edges);

    let mut best_blocks = net.blocks();
    let mut best_q = modularity_of(n, &all_edges, &best_blocks);
    net.rescore(&(0..n).collect::<Vec<_>>());

    let mut block_count = best_blocks.len();
    loop {
        let cut = net.top_edges();
        if cut.is_empty() {
            break;
        }
        let mut endpoints = BTreeSet::new();
        for e in cut {
            let (u, v) = net.remove(e);
            endpoints.extend([u, v]);
        }
        // Edge betweenness only changes inside the components that lost an
        // edge.
        let mut affected = BTreeSet::new();
        for x in endpoints {
            if !affected.contains(&x) {
                affected.extend(net.reachable(x));
            }
        }
        net.rescore(&affected.into_iter().collect::<Vec<_>>());

        let candidate = net.blocks();
        if candidate.len() != block_count {
            block_count = candidate.len();
            let q = modularity_of(n, &all_edges, &candidate);
            // Ties keep the earlier partition, which has fewer communities.
            if q > best_q + 1e-12 {
                best_q = q;
                best_blocks = candidate;
            }
        }
    }

    Partition {
        communities: best_blocks
            .into_iter()
            .map(|m| GroupStructure::new(GroupKind::Community, m, None))
            .collect(),
        modularity: best_q,
    }
}

/// Undirected edges indexed in `(min, max)` order, with removal and edge
/// betweenness scores.
struct EdgeSet {
    edges: Vec<(NodeId, NodeId)>,
    index: Vec<Vec<usize>>,
    adjacency: Vec<Vec<NodeId>>,
    /// `None` once removed.
    scores: Vec<Option<f64>>,
}

impl EdgeSet {
    fn new(n: usize, edges: &[(NodeId, NodeId)]) -> EdgeSet {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let mut index = vec![vec![usize::MAX; n]; n];
        let mut adjacency = vec![Vec::new(); n];
        for (i, &(u, v)) in sorted.iter().enumerate() {
            index[u][v] = i;
            index[v][u] = i;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        EdgeSet {
            scores: vec![Some(0.0); sorted.len()],
            edges: sorted,
            index,
            adjacency,
        }
    }

    /// Every remaining edge whose score is within the tolerance of the
    /// maximum. Removing them together keeps the result independent of node
    /// numbering.
    fn top_edges(&self) -> Vec<usize> {
        let top = self.scores.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..self.scores.len())
            .filter(|&e| self.scores[e].is_some_and(|s| s >= top - SCORE_EPSILON))
            .collect()
    }

    fn remove(&mut self, e: usize) -> (NodeId, NodeId) {
        let (u, v) = self.edges[e];
        self.scores[e] = None;
        self.adjacency[u].retain(|&x| x != v);
        self.adjacency[v].retain(|&x| x != u);
        (u, v)
    }

    fn reachable(&self, start: NodeId) -> Vec<NodeId> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.adjacency.len()];
        let mut out = Vec::new();
        for start in 0..self.adjacency.len() {
            if seen[start] {
                continue;
            }
            let members = self.reachable(start);
            for &m in &members {
                seen[m] = true;
            }
            out.push(members);
        }
        out
    }

    /// Recomputes the scores of every edge among `sources`, which must be a
    /// union of whole components.
    fn rescore(&mut self, sources: &[NodeId]) {
        let n = self.adjacency.len();
        let mut raw = vec![0.0; self.edges.len()];
        for &s in sources {
            let mut order = Vec::new();
            let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
            let mut sigma = vec![0.0; n];
            let mut dist: Vec<Option<u32>> = vec![None; n];
            sigma[s] = 1.0;
            dist[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let dv = dist[v].expect("queued");
                for &w in &self.adjacency[v] {
                    if dist[w].is_none() {
                        dist[w] = Some(dv + 1);
                        queue.push_back(w);
                    }
                    if dist[w] == Some(dv + 1) {
                        sigma[w] += sigma[v];
                        preds[w].push(v);
                    }
                }
            }
            let mut delta = vec![0.0; n];
            for &w in order.iter().rev() {
                for &v in &preds[w] {
                    let share = sigma[v] / sigma[w] * (1.0 + delta[w]);
                    raw[self.index[v][w]] += share;
                    delta[v] += share;
                }
            }
        }
        for &x in sources {
            for &y in &self.adjacency[x] {
                let e = self.index[x][y];
                self.scores[e] = Some(raw[e] / 2.0);
            }
        }
    }
}

/// Edge betweenness on an undirected edge set, keyed by `(min, max)`.
#[cfg(test)]
fn edge_betweenness(n: usize, edges: &BTreeSet<(NodeId, NodeId)>) -> BTreeMap<(NodeId, NodeId), f64> {
    let list: Vec<(NodeId, NodeId)> = edges.iter().copied().collect();
    let mut net = EdgeSet::new(n, &list);
    net.rescore(&(0..n).collect::<Vec<_>>());
    list.iter().zip(&net.scores).map(|(&e, s)| (e, s.expect("present"))).collect()
}
