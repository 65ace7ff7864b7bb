use std::collections::VecDeque;

use super::{check_node, Adjacency, Direction, MetricError};
use crate::graph::{NodeId, SocialGraph};

/// All-pairs hop distances. `None` marks an unreachable ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geodesics {
    n: usize,
    dist: Vec<Option<u32>>,
}

impl Geodesics {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, from: NodeId, to: NodeId) -> Option<u32> {
        self.dist[from * self.n + to]
    }

    pub fn row(&self, from: NodeId) -> &[Option<u32>] {
        &self.dist[from * self.n..(from + 1) * self.n]
    }
}

pub(crate) fn bfs(adj: &Adjacency, source: NodeId, direction: Direction) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = dist[v].map(|d| d + 1);
        for &w in adj.neighbours(v, direction) {
            if dist[w].is_none() {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn geodesic_matrix(g: &SocialGraph) -> Geodesics {
    geodesics_of(&Adjacency::new(g))
}

pub(crate) fn geodesics_of(adj: &Adjacency) -> Geodesics {
    let n = adj.len();
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(bfs(adj, s, Direction::Out));
    }
    Geodesics { n, dist }
}

/// `(longest finite geodesic, unreachable ordered pairs)`.
pub fn diameter(g: &SocialGraph) -> Result<(u32, usize), MetricError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricError::UndefinedDiameter(n));
    }
    Ok(diameter_of(&geodesic_matrix(g)))
}

pub(crate) fn diameter_of(geo: &Geodesics) -> (u32, usize) {
    let mut longest = 0;
    let mut unreachable = 0;
    for u in 0..geo.len() {
        for v in 0..geo.len() {
            if u == v {
                continue;
            }
            match geo.get(u, v) {
                Some(d) => longest = longest.max(d),
                None => unreachable += 1,
            }
        }
    }
    (longest, unreachable)
}

/// Component-adjusted closeness `(r/(n-1)) * (r/sum_d)`, where `r` nodes are
/// reachable from `v` (or reach `v` for [`Direction::In`]). Equals
/// `(n-1)/sum_d` on strongly connected graphs and is 0 when `r = 0`.
pub fn closeness(g: &SocialGraph, v: NodeId, direction: Direction) -> Result<f64, MetricError> {
    check_node(g, v)?;
    let n = g.node_count();
    if n < 2 {
        return Ok(0.0);
    }
    let dist = bfs(&Adjacency::new(g), v, direction);
    Ok(closeness_from(&dist, v))
}

pub fn closeness_all(g: &SocialGraph, direction: Direction) -> Vec<f64> {
    let adj = Adjacency::new(g);
    (0..adj.len())
        .map(|v| closeness_from(&bfs(&adj, v, direction), v))
        .collect()
}

pub(crate) fn closeness_from(dist: &[Option<u32>], v: NodeId) -> f64 {
    let n = dist.len();
    let (reached, total) = dist
        .iter()
        .enumerate()
        .filter(|&(u, _)| u != v)
        .filter_map(|(_, d)| *d)
        .fold((0u64, 0u64), |(r, s), d| (r + 1, s + u64::from(d)));
    if reached == 0 || n < 2 {
        return 0.0;
    }
    let r = reached as f64;
    (r / (n - 1) as f64) * (r / total as f64)
}

/// Raw pair-dependency betweenness of every node (Brandes accumulation).
/// Undirected graphs count each unordered pair once.
pub fn betweenness_all(g: &SocialGraph) -> Vec<f64> {
    betweenness_of(&Adjacency::new(g))
}

pub fn betweenness(g: &SocialGraph, v: NodeId) -> Result<f64, MetricError> {
    check_node(g, v)?;
    Ok(betweenness_all(g)[v])
}

/// Betweenness divided by `(n-1)(n-2)`, or `(n-1)(n-2)/2` when undirected.
pub fn normalized_betweenness(g: &SocialGraph, v: NodeId) -> Result<f64, MetricError> {
    let raw = betweenness(g, v)?;
    let n = g.node_count();
    if n < 3 {
        return Ok(0.0);
    }
    let pairs = ((n - 1) * (n - 2)) as f64;
    Ok(if g.is_directed() { raw / pairs } else { raw / (pairs / 2.0) })
}

struct ShortestPathDag {
    order: Vec<NodeId>,
    preds: Vec<Vec<NodeId>>,
    sigma: Vec<f64>,
    dist: Vec<Option<u32>>,
}

fn shortest_path_dag(adj: &Adjacency, s: NodeId) -> ShortestPathDag {
    let n = adj.len();
    let mut dag = ShortestPathDag {
        order: Vec::with_capacity(n),
        preds: vec![Vec::new(); n],
        sigma: vec![0.0; n],
        dist: vec![None; n],
    };
    dag.sigma[s] = 1.0;
    dag.dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        dag.order.push(v);
        let dv = dag.dist[v].expect("queued nodes have a distance");
        for &w in &adj.out[v] {
            if dag.dist[w].is_none() {
                dag.dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
            if dag.dist[w] == Some(dv + 1) {
                dag.sigma[w] += dag.sigma[v];
                dag.preds[w].push(v);
            }
        }
    }
    dag
}

pub(crate) fn betweenness_of(adj: &Adjacency) -> Vec<f64> {
    let n = adj.len();
    let mut scores = vec![0.0; n];
    let mut delta = vec![0.0; n];
    for s in 0..n {
        let dag = shortest_path_dag(adj, s);
        delta.iter_mut().for_each(|d| *d = 0.0);
        for &w in dag.order.iter().rev() {
            for &v in &dag.preds[w] {
                delta[v] += dag.sigma[v] / dag.sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                scores[w] += delta[w];
            }
        }
    }
    if !adj.directed {
        scores.iter_mut().for_each(|b| *b /= 2.0);
    }
    scores
}

/// For every candidate `c`, the mean over sources `s` (other than `c` and
/// `ego`, and able to reach `ego`) of the share of `s -> ego` geodesics that
/// pass through `c`. Zero for `ego` itself.
pub fn ego_mediation(g: &SocialGraph, ego: NodeId) -> Result<Vec<f64>, MetricError> {
    check_node(g, ego)?;
    let adj = Adjacency::new(g);
    let n = adj.len();
    // Distances and path counts towards ego, walking arcs backwards.
    let to_ego = bfs(&adj, ego, Direction::In);
    let mut sigma_to_ego = vec![0.0; n];
    let mut by_distance: Vec<NodeId> = (0..n).filter(|&u| to_ego[u].is_some()).collect();
    by_distance.sort_by_key(|&u| to_ego[u]);
    sigma_to_ego[ego] = 1.0;
    for &u in by_distance.iter().skip(1) {
        let du = to_ego[u].expect("filtered");
        sigma_to_ego[u] = adj.out[u]
            .iter()
            .filter(|&&w| to_ego[w] == Some(du - 1))
            .map(|&w| sigma_to_ego[w])
            .sum();
    }

    let mut share = vec![0.0; n];
    let mut sources = vec![0usize; n];
    for s in (0..n).filter(|&s| s != ego && to_ego[s].is_some()) {
        let dag = shortest_path_dag(&adj, s);
        let total = dag.sigma[ego];
        let d_total = to_ego[s].expect("filtered");
        for c in (0..n).filter(|&c| c != ego && c != s) {
            sources[c] += 1;
            if let (Some(dsc), Some(dce)) = (dag.dist[c], to_ego[c]) {
                if dsc + dce == d_total {
                    share[c] += dag.sigma[c] * sigma_to_ego[c] / total;
                }
            }
        }
    }
    Ok(share
        .into_iter()
        .zip(sources)
        .map(|(s, k)| if k == 0 { 0.0 } else { s / k as f64 })
        .collect())
}
