//! Exhaustive reference computations for small graphs (n <= 8 or so).
//!
//! Everything here works on a plain adjacency matrix and enumerates simple
//! paths or node subsets directly. Nothing is shared with the production
//! metric code, so agreement between the two is meaningful.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleGraph {
    pub n: usize,
    pub directed: bool,
    /// `weights[u][v]` is `Some(w)` (or `Some(0)` for unweighted ties)
    /// when the tie exists. Symmetric for undirected graphs.
    pub weights: Vec<Vec<Option<u8>>>,
    pub weighted: bool,
}

impl OracleGraph {
    pub fn arc(&self, u: usize, v: usize) -> bool {
        self.weights[u][v].is_some()
    }

    /// Ties as the production graph stores them: ordered pairs when
    /// directed, `u < v` pairs when undirected.
    pub fn ties(&self) -> Vec<(usize, usize, Option<u8>)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if let Some(w) = self.weights[u][v] {
                    if self.directed || u < v {
                        out.push((u, v, if self.weighted { Some(w) } else { None }));
                    }
                }
            }
        }
        out
    }

    fn undirected_arc(&self, u: usize, v: usize) -> bool {
        self.arc(u, v) || self.arc(v, u)
    }
}

/// Deterministic corpus of random graphs with 1..=max_n nodes, mixing
/// directed/undirected, weighted/unweighted and sparse/dense.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<OracleGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let directed = rng.gen_bool(0.5);
            let weighted = rng.gen_bool(0.5);
            let p: f64 = rng.gen_range(0.05..0.9);
            let mut weights = vec![vec![None; n]; n];
            for u in 0..n {
                for v in 0..n {
                    if u == v || (!directed && v < u) {
                        continue;
                    }
                    if rng.gen_bool(p) {
                        let w = if weighted { rng.gen_range(1..=5) } else { 0 };
                        weights[u][v] = Some(w);
                        if !directed {
                            weights[v][u] = Some(w);
                        }
                    }
                }
            }
            OracleGraph {
                n,
                directed,
                weights,
                weighted,
            }
        })
        .collect()
}

pub fn density(g: &OracleGraph) -> Option<Q> {
    if g.n < 2 {
        return None;
    }
    let mut arcs = 0;
    for u in 0..g.n {
        for v in 0..g.n {
            if u != v && g.arc(u, v) {
                arcs += 1;
            }
        }
    }
    // An undirected edge shows up as two arcs; so do its two possible slots.
    Some(Q::new(arcs, (g.n * (g.n - 1)) as i64))
}

/// Every simple path from `s` to `t` (as node sequences).
pub fn simple_paths(g: &OracleGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &OracleGraph, t: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("non-empty");
        if last == t {
            out.push(path.clone());
            return;
        }
        for next in 0..g.n {
            if !used[next] && g.arc(last, next) {
                used[next] = true;
                path.push(next);
                walk(g, t, path, used, out);
                path.pop();
                used[next] = false;
            }
        }
    }
    let mut used = vec![false; g.n];
    used[s] = true;
    let mut out = Vec::new();
    walk(g, t, &mut vec![s], &mut used, &mut out);
    out
}

/// Shortest simple paths from `s` to `t`.
pub fn geodesic_paths(g: &OracleGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let paths = simple_paths(g, s, t);
    let Some(best) = paths.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    paths.into_iter().filter(|p| p.len() == best).collect()
}

pub fn distance(g: &OracleGraph, s: usize, t: usize) -> Option<u32> {
    if s == t {
        return Some(0);
    }
    simple_paths(g, s, t).iter().map(|p| (p.len() - 1) as u32).min()
}

pub fn distances(g: &OracleGraph) -> Vec<Vec<Option<u32>>> {
    (0..g.n).map(|s| (0..g.n).map(|t| distance(g, s, t)).collect()).collect()
}

pub fn diameter(g: &OracleGraph) -> Option<(u32, usize)> {
    if g.n < 2 {
        return None;
    }
    let d = distances(g);
    let mut longest = 0;
    let mut unreachable = 0;
    for s in 0..g.n {
        for t in 0..g.n {
            if s != t {
                match d[s][t] {
                    Some(x) => longest = longest.max(x),
                    None => unreachable += 1,
                }
            }
        }
    }
    Some((longest, unreachable))
}

pub fn degrees(g: &OracleGraph, v: usize) -> (usize, usize, usize) {
    let inn = (0..g.n).filter(|&u| u != v && g.arc(u, v)).count();
    let out = (0..g.n).filter(|&u| u != v && g.arc(v, u)).count();
    let total = (0..g.n).filter(|&u| u != v && g.undirected_arc(u, v)).count();
    (inn, out, total)
}

pub fn reach(g: &OracleGraph, v: usize) -> usize {
    (0..g.n)
        .filter(|&u| u != v && distance(g, v, u).is_some_and(|d| d <= 2))
        .count()
}

/// `(r/(n-1)) * (r/sum_d)`; `inward` measures paths ending at `v`.
pub fn closeness(g: &OracleGraph, v: usize, inward: bool) -> Q {
    if g.n < 2 {
        return Q::from_integer(0);
    }
    let mut r = 0i64;
    let mut sum = 0i64;
    for u in (0..g.n).filter(|&u| u != v) {
        let d = if inward { distance(g, u, v) } else { distance(g, v, u) };
        if let Some(d) = d {
            r += 1;
            sum += i64::from(d);
        }
    }
    if r == 0 {
        return Q::from_integer(0);
    }
    Q::new(r, (g.n - 1) as i64) * Q::new(r, sum)
}

pub fn betweenness(g: &OracleGraph) -> Vec<Q> {
    let mut scores = vec![Q::from_integer(0); g.n];
    for s in 0..g.n {
        for t in 0..g.n {
            if s == t || (!g.directed && t < s) {
                continue;
            }
            let paths = geodesic_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as i64;
            for (v, score) in scores.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as i64;
                *score += Q::new(through, total);
            }
        }
    }
    scores
}

/// Weakly connected components as sorted member lists, ordered by first member.
pub fn components(g: &OracleGraph) -> Vec<Vec<usize>> {
    let mut linked = vec![vec![false; g.n]; g.n];
    for (u, row) in linked.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = u == v || g.undirected_arc(u, v);
        }
    }
    // Warshall transitive closure.
    for k in 0..g.n {
        for i in 0..g.n {
            for j in 0..g.n {
                if linked[i][k] && linked[k][j] {
                    linked[i][j] = true;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n {
        if !out.iter().any(|c| c.contains(&v)) {
            out.push((0..g.n).filter(|&u| linked[v][u]).collect());
        }
    }
    out
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
}

/// Maximal sets satisfying `property` with at least `min_size` members,
/// found by checking every subset.
pub fn maximal_sets(n: usize, min_size: usize, property: impl Fn(&[usize]) -> bool) -> Vec<Vec<usize>> {
    let good: Vec<Vec<usize>> = subsets(n).filter(|s| property(s)).collect();
    let mut out: Vec<Vec<usize>> = good
        .iter()
        .filter(|s| s.len() >= min_size)
        .filter(|s| {
            !good
                .iter()
                .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
        })
        .cloned()
        .collect();
    out.sort();
    out
}

pub fn cliques(g: &OracleGraph, min_size: usize) -> Vec<Vec<usize>> {
    maximal_sets(g.n, min_size, |s| {
        s.iter().all(|&u| s.iter().all(|&v| u == v || g.undirected_arc(u, v)))
    })
}

pub fn n_cliques(g: &OracleGraph, n: u32, min_size: usize) -> Vec<Vec<usize>> {
    let d = distances(g);
    maximal_sets(g.n, min_size, |s| {
        s.iter()
            .all(|&u| s.iter().all(|&v| u == v || d[u][v].is_some_and(|x| x <= n)))
    })
}

pub fn k_plexes(g: &OracleGraph, k: usize, min_size: usize) -> Vec<Vec<usize>> {
    maximal_sets(g.n, min_size, |s| {
        s.iter().all(|&u| {
            let inside = s.iter().filter(|&&v| v != u && g.undirected_arc(u, v)).count();
            inside + k >= s.len()
        })
    })
}

/// Node triples that admit a directed 3-cycle in some orientation.
pub fn triads(g: &OracleGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..g.n {
        for b in 0..g.n {
            for c in 0..g.n {
                if a != b && b != c && a != c && g.arc(a, b) && g.arc(b, c) && g.arc(c, a) {
                    let mut t = vec![a, b, c];
                    t.sort();
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line4() -> OracleGraph {
        let mut weights = vec![vec![None; 4]; 4];
        for (u, v) in [(0, 1), (1, 2), (2, 3)] {
            weights[u][v] = Some(0);
            weights[v][u] = Some(0);
        }
        OracleGraph {
            n: 4,
            directed: false,
            weights,
            weighted: false,
        }
    }

    #[test]
    fn hand_checked_line() {
        let g = line4();
        assert_eq!(betweenness(&g)[1], Q::from_integer(2));
        assert_eq!(closeness(&g, 0, false), Q::new(1, 2));
        assert_eq!(diameter(&g), Some((3, 0)));
        assert_eq!(n_cliques(&g, 2, 3), vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(corpus(7, 20, 7), corpus(7, 20, 7));
    }
}
